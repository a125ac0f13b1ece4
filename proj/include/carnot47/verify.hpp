// Self-check suite: every structural invariant the library is built on,
// runnable as a batch (the CLI `verify` command) or individually from
// tests. Each check returns its worst margin; a nonnegative margin passes.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "carnot47/io.hpp"
#include "carnot47/optimality.hpp"

namespace carnot47 {

struct CheckResult {
  std::string check;
  std::string grid;
  /// Worst margin across the grid: for positivity checks the minimum of the
  /// quantity itself, for error checks tolerance minus the worst error.
  double min_value = 0.0;
  bool pass = false;
};

using DetCoeffsFn = std::function<DetCoeffs(double)>;

CheckResult check_group_associativity(std::uint64_t seed, int n);
CheckResult check_bracket_axioms();
CheckResult check_frame_left_invariance(std::uint64_t seed, int n);
CheckResult check_frames_at_origin();
CheckResult check_right_frame_flow(std::uint64_t seed, int n);

CheckResult check_hamiltonian_conservation(std::uint64_t seed, int n_params,
                                           int n_times);
CheckResult check_controls_identity(std::uint64_t seed, int n);
CheckResult check_w_bit_constancy(std::uint64_t seed);
CheckResult check_oracle_equivalence(std::uint64_t seed, int n, double T,
                                     double step, double tol);

CheckResult check_equivariance(std::uint64_t seed, int n);
CheckResult check_stabilizer_origin();
CheckResult check_fixed_point_sets(std::uint64_t seed, int n);
CheckResult check_cn_closure(std::uint64_t seed, int n);
CheckResult check_cn_action_invariance(std::uint64_t seed, int n);
CheckResult check_invariants_rotation(std::uint64_t seed, int n);
CheckResult check_representative_consistency(std::uint64_t seed, int n);

CheckResult check_discriminant_grid(double tau_max, int n);
CheckResult check_f_bounds_grid(double tau_max, int n);
CheckResult check_offcn_det_nonzero(std::uint64_t seed, int n_geo,
                                    double tau_max, double step);
CheckResult check_det_cross(std::uint64_t seed, int n,
                            const DetCoeffsFn& coeffs = det_coeffs);
CheckResult check_incn_rep_structure(std::uint64_t seed, int n);
CheckResult check_maxwell_endpoint(std::uint64_t seed, int n);

CheckResult check_exp_roundtrip(std::uint64_t seed, int n, double tol);
CheckResult check_length_consistency(std::uint64_t seed, int n, double step);
CheckResult check_connect_equivariance(std::uint64_t seed, int n);
CheckResult check_jacobian_fd(std::uint64_t seed, int n);
CheckResult check_heisenberg_reduction(std::uint64_t seed, int n);

/// Independent planar oracle: RK4 integration of the three-dimensional
/// reduced system x' = h0, l' = h1, y' = (x h1 - h0 l)/2 with fiber
/// h0' = -w h1, h1' = w h0, from the origin.
HeisenbergPoint heisenberg_rk4_endpoint(double h0, double h1, double w,
                                        double T, double step);

/// Draws an off-collinear parameter set below the first critical phase of
/// its line, together with a generation phase tau. Used by the round-trip
/// checks.
ExpParams draw_exp_below_critical(std::mt19937_64& rng);

Mat3 random_rotation(std::mt19937_64& rng);

std::vector<CheckResult> run_verify(const Config& cfg);
nlohmann::json verify_report(const std::vector<CheckResult>& results);

}  // namespace carnot47
