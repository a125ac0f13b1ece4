// Boundary-value machinery on the quotient by the isotropy action: the
// factorized exponential map (C1, C2, c3bar, tau) -> invariants of the
// representative endpoint, its Jacobian and first critical phase, damped
// Newton inversion over a deterministic seed grid, recovery of the aligning
// rotation, the end-to-end connect pipeline, and the unit-sphere sampler.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnot47/optimality.hpp"

namespace carnot47 {

struct ExpParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3bar = 0.0;
  double tau = 0.0;

  /// Level constant of the class: K^2 (c1^2 + c2^2 + c3bar^2) = 1.
  double level_K() const;
  /// Geodesic length T = tau * sqrt(c1^2 + c2^2 + c3bar^2) = tau / K.
  double length() const;
};

/// Invariants of the representative endpoint; the map is even in c3bar and
/// scales as (s, s^2, s^3, s^4) when (c1, c2, c3bar) are scaled by s.
InvariantTuple exp_factored(const ExpParams& p);

/// Analytic Jacobian of exp_factored with respect to (c1, c2, c3bar, tau).
/// Singular at tau = 0 and identically singular on the c3bar = 0 stratum.
Mat4 exp_jacobian(const ExpParams& p);

/// First zero of det(exp_jacobian) along tau for fixed (c1, c2, c3bar),
/// located by scan plus bisection. Returns tau_hi when no sign change is
/// found below it.
double first_critical_tau(double c1, double c2, double c3bar,
                          double tau_hi = 9.0, double scan_step = 0.02);

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : SolveError {
  using SolveError::SolveError;
};
struct SingularJacobian : SolveError {
  using SolveError::SolveError;
};
struct CollinearTarget : SolveError {
  using SolveError::SolveError;
};
struct OutOfValidatedRange : SolveError {
  using SolveError::SolveError;
};

/// Deterministic seed grid for the Newton search, expressed in the
/// scale-normalized target frame.
struct SeedSpec {
  std::vector<double> radii{0.35, 0.7, 1.2, 2.0};
  int angle_count = 8;
  std::vector<double> c3bars{0.05, 0.3, 0.8, 1.5, 3.0};
  std::vector<double> taus{0.3, 0.8, 1.4, 2.2, 3.1, 4.2, 5.5, 7.0};
  int max_iterations = 50;
  int max_halvings = 20;
};

struct InvertResult {
  ExpParams best;
  /// All distinct admissible roots, smallest length first. More than one
  /// entry means the target has several preimages below criticality; the
  /// first is returned as best.
  std::vector<ExpParams> roots;
};

/// Solves exp_factored(p) = target componentwise-relatively within tol.
/// The returned c3bar is canonically nonnegative (the map is even in it and
/// the aligning rotation absorbs the sign). Roots whose tau lies beyond the
/// first critical phase of their own parameter line are discarded; if only
/// such roots exist the solve reports OutOfValidatedRange. Collinear
/// targets (ll*yy = ly^2) belong to the planar branch and are rejected as
/// CollinearTarget.
InvertResult invert_exp(const InvariantTuple& target,
                        const SeedSpec& seeds = {}, double tol = 1e-10);

struct CollinearFrame : SolveError {
  using SolveError::SolveError;
};

/// The unique rotation with R lbar = l and R ybar = y, built from the
/// orthonormal frames (l-hat, orthogonal part of y, cross product) on both
/// sides. Requires matching invariants and linearly independent (lbar,
/// ybar); collinear frames have no unique rotation.
Mat3 recover_rotation(const GroupPoint& q, const GroupPoint& qbar,
                      double tol = 1e-7);

enum class Branch { Line, InCn, OffCn };

struct GeodesicAnswer {
  ExpParams params;
  double K = 0.0;
  Mat3 R = Mat3::Identity();
  double length = 0.0;
  Branch branch = Branch::OffCn;
  /// Sup-norm mismatch between the reconstructed endpoint and the request.
  double residual = 0.0;
  /// Endpoint reached simultaneously by a one-parameter family of
  /// minimizers (vertical points of C_n).
  bool maxwell = false;
  std::vector<ExpParams> alternates;
};

struct ConnectOptions {
  double newton_tol = 1e-10;
  double cn_tol = 1e-9;
  SeedSpec seeds;
};

/// Reconstructs the endpoint encoded by an answer: the representative point
/// at phase tau (the line point for the Line branch) mapped through R.
GroupPoint answer_endpoint(const GeodesicAnswer& a);

/// Boundary-value solve from the origin to q.
///  - y = 0: straight line, length sqrt(x^2 + |l|^2).
///  - q in C_n: planar solve of the projected problem with c3bar = 0,
///    lifted back through the axis-aligning rotation; length bounded by the
///    cut time, with vertical targets flagged as Maxwell points.
///  - otherwise: invariants -> invert_exp -> representative curve ->
///    recover_rotation.
GeodesicAnswer connect(const GroupPoint& q, const ConnectOptions& opts = {});

struct SphereSample {
  GeodesicParams params;
  GroupPoint point;
};

struct SphereOptions {
  std::uint64_t seed = 0;
  ParamFamily family = ParamFamily::Generic;
};

/// Endpoints at t = 1 of `count` unit-speed geodesics with parameters drawn
/// uniformly on the Euclidean parameter sphere and rescaled onto the level
/// set. Deterministic for a fixed seed.
std::vector<SphereSample> sphere_sample(int count, const SphereOptions& opts);

}  // namespace carnot47
