// Normal Hamiltonian system of the sub-Riemannian structure: fiber and base
// ODEs, their closed-form solutions, the unit-speed level set, and a
// fixed-step RK4 integrator used as the independent numerical oracle.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "carnot47/group.hpp"

namespace carnot47 {

/// Kvec magnitudes below this select the straight-line branch.
inline constexpr double kZeroK = 1e-12;

/// Fiber coordinates (h0, h1, h2, h3, w1, w2, w3) on the cotangent space.
/// Along any extremal w is constant and H = |h|^2 / 2 is constant.
struct CotangentState {
  Vec4 h = Vec4::Zero();
  Vec3 w = Vec3::Zero();
};

struct FullState {
  GroupPoint q;
  CotangentState lambda;

  bool finite() const;
};

/// The seven constants of the closed-form geodesics: C = (C1, C2, C3, C4)
/// and Kvec = (K1, K2, K3).
struct GeodesicParams {
  Vec4 C = Vec4::Zero();
  Vec3 Kvec = Vec3::Zero();

  double K() const { return Kvec.norm(); }
  bool is_line() const { return K() < kZeroK; }

  /// Constant part of the h-vector: (-C3 K3 - C4 K2, C4 K1, C3 K1).
  /// Orthogonal to Kvec by construction.
  Vec3 z2() const;

  /// Left-hand side of the unit-speed condition: equals 2H along the
  /// extremal. For the line branch this is |C|^2.
  double level_lhs() const;
  double level_residual() const { return level_lhs() - 1.0; }

  /// Rescales C (Kvec untouched) so the level residual vanishes.
  /// Throws on all-zero parameters.
  GeodesicParams normalized() const;

  /// Constant-control family C1 = C2 = 0 with K > 0; representable but not
  /// meaningful as a unit-speed geodesic through fresh controls.
  bool is_degenerate(double tol = 1e-12) const;

  /// Fiber initial condition h(0), w = Kvec.
  CotangentState initial_covector() const;
};

/// H = (h0^2 + h1^2 + h2^2 + h3^2)/2.
double hamiltonian(const CotangentState& s);

/// Skew matrix of the fiber system h' = -Omega_w h.
Mat4 omega_matrix(const Vec3& w);

/// Right-hand side of the full cotangent flow: base velocities
/// x' = h0, l' = h, y' = (x h - h0 l)/2 and fiber h' = -Omega_w h, w' = 0.
FullState ode_rhs(const FullState& s);

struct Trajectory {
  std::vector<double> t;
  std::vector<FullState> states;
};

/// Classical fixed-step RK4 over [0, T]. The w components are copied
/// verbatim at every step (their derivative is identically zero), so they
/// stay bit-identical to the initial value. Throws on non-finite input or
/// non-positive T/step.
Trajectory integrate_numeric(const FullState& initial, double T, double step);

/// Closed-form fiber solution h(t). For K = 0 the solution is the constant
/// h(t) = (C1, C2, C3, C4).
Vec4 fiber_solution(double t, const GeodesicParams& p);

/// Closed-form geodesic through the origin. K = 0 gives the straight line
/// (C1 t, C2 t, C3 t, C4 t, 0, 0, 0); otherwise the trigonometric solution
/// of the base system.
GroupPoint geodesic_point(double t, const GeodesicParams& p);

enum class ParamFamily { Generic, InCn, Line };

/// Draws unit-level parameters: Gaussian direction, K in a moderate range,
/// then C rescaled onto the level set. InCn forces C3 = C4 = 0; Line forces
/// Kvec = 0.
GeodesicParams draw_unit_level(std::mt19937_64& rng, ParamFamily family);

}  // namespace carnot47
