// Optimality classification of geodesics: the collinearity determinant
// along the representative curve and its quadratic-form coefficients, the
// discriminant bound machinery, the Line / InCn / OffCn trichotomy, cut
// times inside the collinear subgroup, and the planar projection that
// exposes the Heisenberg reduction.
#pragma once

#include <limits>

#include "carnot47/symmetry.hpp"

namespace carnot47 {

/// Coefficients of the quadratic form q(C1, C2) = d11 C1^2 + 2 d12 C1 C2
/// + d22 C2^2 whose product with c3bar equals the collinearity determinant
/// l1*y2 - l2*y1 of the representative curve:
///   d11 = -tau^2 - tau sin tau cos tau - 2 cos^2 tau + 2
///   d12 = -sin tau (2 cos tau - 2 + tau sin tau)
///   d22 =  2 cos^2 tau + tau cos tau sin tau - 4 cos tau - tau^2 + 2
/// The form is negative definite for every tau > 0. All three functions
/// vanish to fourth order or higher at tau = 0 and are evaluated by series
/// there.
struct DetCoeffs {
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
};

DetCoeffs det_coeffs(double tau);

/// Value of the quadratic form at (c1, c2).
double det_quadratic_form(double tau, double c1, double c2);
double det_quadratic_form(const DetCoeffs& d, double c1, double c2);

/// Collinearity determinant c3bar * (d11 c1^2 + 2 d12 c1 c2 + d22 c2^2);
/// equals l1*y2 - l2*y1 of the representative curve. Zero for all tau iff
/// c3bar = 0.
double collinearity_det(double tau, double c1, double c2, double c3bar);
double collinearity_det(double tau, const CanonicalParams& cp);

/// Discriminant of the quadratic form,
/// d = -4 tau (tau - sin tau)(tau^2 + tau sin tau + 4 cos tau - 4);
/// negative for every tau > 0, which makes the form definite.
double discriminant(double tau);

/// f(tau) = tau^2 + tau sin tau + 4 cos tau - 4 together with its two lower
/// bounds: the degree-8 Taylor bound -tau^6 (tau^2 - 14)/5040 (positive on
/// (0, sqrt(14))) and the coarse bound tau^2 - tau - 8 (positive beyond
/// (1 + sqrt(33))/2). The overlap of the two intervals gives f > 0 on all
/// of (0, inf).
struct FBounds {
  double f = 0.0;
  double local_bound = 0.0;
  double global_bound = 0.0;
};

FBounds f_and_bounds(double tau);

enum class GeodesicKind { Line, InCn, OffCn };

struct GeodesicClass {
  GeodesicKind kind = GeodesicKind::Line;
  /// +inf for lines, 2*pi*sqrt(C1^2+C2^2) inside C_n, NaN (not computed)
  /// outside.
  double cut_time = std::numeric_limits<double>::infinity();
  /// Present for the K > 0 branches.
  CanonicalParams canonical;
};

struct ClassifyOptions {
  double tau_max = 50.0;
  double tau_step = 1e-3;
  /// Verify the OffCn branch by checking strict negativity of the quadratic
  /// form on the whole grid; a violation throws instead of being ignored.
  bool scan = true;
};

/// Trichotomy of a unit-level parameter set. Requires |level residual| <=
/// tol; rejects the constant-control degenerate family C1 = C2 = 0, K > 0.
GeodesicClass classify(const GeodesicParams& p, double tol,
                       const ClassifyOptions& opts = {});

/// Cut time 2*pi*sqrt(C1^2 + C2^2) of a geodesic inside C_n. Requires
/// c3bar = 0 (within tol) and (C1, C2) != 0.
double cut_time(const CanonicalParams& cp, double tol = 1e-9);

/// Planar image (x, |l|, lambda |l|) of a point of C_n, where y = lambda l
/// in the least-squares sense lambda = (l,y)/(l,l). For l = 0 the image is
/// (x, 0, |y|).
struct HeisenbergPoint {
  double x = 0.0;
  double l = 0.0;
  double y = 0.0;
};

HeisenbergPoint heisenberg_project(const GroupPoint& q, double tol = 1e-9);

}  // namespace carnot47
