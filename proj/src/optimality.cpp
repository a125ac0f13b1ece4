#include "carnot47/optimality.hpp"

#include <cmath>
#include <stdexcept>

#include "carnot47/detail/trig.hpp"

namespace carnot47 {

namespace {

constexpr double kSeriesSwitch = 1.0;

// d11 = -u^2/4 - (u/4) sin u + 1 - cos u with u = 2 tau; the quadratic
// terms cancel and the series starts at u^6:
//   d11 = sum_{n>=3} (-1)^n (n-2) / (2 (2n)!) u^{2n}.
double d11_series(double tau) {
  const double u2 = 4.0 * tau * tau;
  double fact = 720.0;  // (2n)! at n = 3
  double upow = u2 * u2 * u2;
  double sign = -1.0;
  double sum = sign * upow / (2.0 * fact);
  for (int n = 4; n < 28; ++n) {
    fact *= double((2 * n - 1) * (2 * n));
    upow *= u2;
    sign = -sign;
    const double term = sign * double(n - 2) * upow / (2.0 * fact);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// d22 = sum_{n>=2} (-1)^n (4^n (2-n)/2 - 4) tau^{2n} / (2n)!.
double d22_series(double tau) {
  const double t2 = tau * tau;
  double fact = 24.0;  // (2n)! at n = 2
  double four_n = 16.0;
  double tpow = t2 * t2;
  double sign = 1.0;
  double sum = sign * (four_n * 0.0 / 2.0 - 4.0) * tpow / fact;  // n = 2
  for (int n = 3; n < 28; ++n) {
    fact *= double((2 * n - 1) * (2 * n));
    four_n *= 4.0;
    tpow *= t2;
    sign = -sign;
    const double term =
        sign * (four_n * double(2 - n) / 2.0 - 4.0) * tpow / fact;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// d12 = 2 sin tau - sin 2tau - tau (1 - cos 2tau)/2
//     = sum_{m>=2} (-1)^m (2 - 2^{2m+1} + 4^m (2m+1)/2) tau^{2m+1}/(2m+1)!.
double d12_series(double tau) {
  const double t2 = tau * tau;
  double fact = 120.0;  // (2m+1)! at m = 2
  double four_m = 16.0;
  double tpow = t2 * t2 * tau;
  double sign = 1.0;
  double sum = sign * (2.0 - 2.0 * four_m + four_m * 5.0 / 2.0) * tpow / fact;
  for (int m = 3; m < 28; ++m) {
    fact *= double((2 * m) * (2 * m + 1));
    four_m *= 4.0;
    tpow *= t2;
    sign = -sign;
    const double coeff = 2.0 - 2.0 * four_m + four_m * double(2 * m + 1) / 2.0;
    const double term = sign * coeff * tpow / fact;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// f = tau^2 + tau sin tau + 4 cos tau - 4
//   = sum_{n>=3} (-1)^n 2 (2-n) tau^{2n} / (2n)!.
double f_series(double tau) {
  const double t2 = tau * tau;
  double fact = 720.0;  // (2n)! at n = 3
  double tpow = t2 * t2 * t2;
  double sign = -1.0;
  double sum = sign * 2.0 * (2.0 - 3.0) * tpow / fact;
  for (int n = 4; n < 28; ++n) {
    fact *= double((2 * n - 1) * (2 * n));
    tpow *= t2;
    sign = -sign;
    const double term = sign * 2.0 * double(2 - n) * tpow / fact;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double f_value(double tau) {
  if (std::abs(tau) < kSeriesSwitch) return f_series(tau);
  return tau * tau + tau * std::sin(tau) + 4.0 * std::cos(tau) - 4.0;
}

}  // namespace

DetCoeffs det_coeffs(double tau) {
  DetCoeffs d;
  if (std::abs(tau) < kSeriesSwitch) {
    d.d11 = d11_series(tau);
    d.d12 = d12_series(tau);
    d.d22 = d22_series(tau);
    return d;
  }
  const double s = std::sin(tau);
  const double c = std::cos(tau);
  d.d11 = -tau * tau - tau * s * c - 2.0 * c * c + 2.0;
  d.d12 = -s * (2.0 * c - 2.0 + tau * s);
  d.d22 = 2.0 * c * c + tau * c * s - 4.0 * c - tau * tau + 2.0;
  return d;
}

double det_quadratic_form(const DetCoeffs& d, double c1, double c2) {
  return d.d11 * c1 * c1 + 2.0 * d.d12 * c1 * c2 + d.d22 * c2 * c2;
}

double det_quadratic_form(double tau, double c1, double c2) {
  return det_quadratic_form(det_coeffs(tau), c1, c2);
}

double collinearity_det(double tau, double c1, double c2, double c3bar) {
  return c3bar * det_quadratic_form(tau, c1, c2);
}

double collinearity_det(double tau, const CanonicalParams& cp) {
  return collinearity_det(tau, cp.C1, cp.C2, cp.c3bar);
}

double discriminant(double tau) {
  return -4.0 * tau * detail::t_minus_sin(tau) * f_value(tau);
}

FBounds f_and_bounds(double tau) {
  FBounds b;
  b.f = f_value(tau);
  const double t2 = tau * tau;
  const double t6 = t2 * t2 * t2;
  b.local_bound = -t6 * (t2 - 14.0) / 5040.0;
  b.global_bound = t2 - tau - 8.0;
  return b;
}

GeodesicClass classify(const GeodesicParams& p, double tol,
                       const ClassifyOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be > 0");
  if (std::abs(p.level_residual()) > tol)
    throw std::invalid_argument(
        "classify: parameters are off the unit level set; normalize first");

  GeodesicClass cls;
  if (p.is_line()) {
    cls.kind = GeodesicKind::Line;
    cls.cut_time = std::numeric_limits<double>::infinity();
    return cls;
  }
  if (p.is_degenerate())
    throw std::invalid_argument(
        "classify: constant-control family (C1 = C2 = 0) has no "
        "classification");

  cls.canonical = canonicalize(p);
  if (std::abs(cls.canonical.c3bar) <= tol) {
    cls.kind = GeodesicKind::InCn;
    cls.cut_time = cut_time(cls.canonical, tol);
    return cls;
  }

  cls.kind = GeodesicKind::OffCn;
  cls.cut_time = std::numeric_limits<double>::quiet_NaN();
  if (opts.scan) {
    // The quadratic form is negative definite for all tau > 0, so the
    // determinant never vanishes off C_n. A violation here means a broken
    // build, not a borderline input.
    const auto n = static_cast<std::size_t>(opts.tau_max / opts.tau_step);
    for (std::size_t i = 1; i <= n; ++i) {
      const double tau = double(i) * opts.tau_step;
      if (!(det_quadratic_form(tau, cls.canonical.C1, cls.canonical.C2) < 0.0))
        throw std::runtime_error(
            "classify: collinearity determinant vanished on the OffCn "
            "branch at tau = " + std::to_string(tau));
    }
  }
  return cls;
}

double cut_time(const CanonicalParams& cp, double tol) {
  if (std::abs(cp.c3bar) > tol)
    throw std::invalid_argument(
        "cut_time: only geodesics inside C_n have a known cut time");
  const double r = std::hypot(cp.C1, cp.C2);
  if (r <= 0.0)
    throw std::invalid_argument("cut_time: (C1, C2) must be nonzero");
  return 2.0 * M_PI * r;
}

HeisenbergPoint heisenberg_project(const GroupPoint& q, double tol) {
  if (!in_cn(q, tol))
    throw std::invalid_argument("heisenberg_project: point is not in C_n");
  const double lnorm = q.ell.norm();
  if (lnorm == 0.0) return HeisenbergPoint{q.x, 0.0, q.y.norm()};
  const double lambda = q.ell.dot(q.y) / q.ell.squaredNorm();
  return HeisenbergPoint{q.x, lnorm, lambda * lnorm};
}

}  // namespace carnot47
