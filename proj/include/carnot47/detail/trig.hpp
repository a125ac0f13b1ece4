// Cancellation-safe evaluation of the small trigonometric combinations the
// geodesic formulas are built from. Near t = 0 the naive forms lose all
// significant digits (they cancel to O(t^3)..O(t^6)), so each function
// switches to its exact power series below a fixed threshold.
#pragma once

#include <cmath>

namespace carnot47::detail {

inline constexpr double kSeriesThreshold = 0.9;

/// 1 - cos(t), evaluated as 2 sin^2(t/2).
inline double one_minus_cos(double t) {
  const double s = std::sin(0.5 * t);
  return 2.0 * s * s;
}

/// t - sin(t) = t^3/6 - t^5/120 + ...
inline double t_minus_sin(double t) {
  if (std::abs(t) >= kSeriesThreshold) return t - std::sin(t);
  const double t2 = t * t;
  double term = t * t2 / 6.0;  // m = 1
  double sum = term;
  for (int m = 1; m < 24; ++m) {
    term *= -t2 / double((2 * m + 2) * (2 * m + 3));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// 2 sin(t) - t cos(t) - t = t^3/6 - t^5/40 + ...
/// Coefficient of t^{2m+1} is (-1)^{m+1} (2m-1)/(2m+1)!.
inline double y_drift_c1(double t) {
  if (std::abs(t) >= kSeriesThreshold)
    return 2.0 * std::sin(t) - t * std::cos(t) - t;
  const double t2 = t * t;
  double odd_fact = 6.0;  // (2m+1)! at m = 1
  double tpow = t * t2;
  double sum = tpow / odd_fact;
  double sign = 1.0;
  for (int m = 2; m < 24; ++m) {
    odd_fact *= double((2 * m) * (2 * m + 1));
    tpow *= t2;
    sign = -sign;
    const double term = sign * double(2 * m - 1) * tpow / odd_fact;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// 2 - 2 cos(t) - t sin(t) = t^4/12 - t^6/180 + ...
/// Coefficient of t^{2m} is (-1)^m (2m-2)/(2m)!.
inline double y_drift_c2(double t) {
  if (std::abs(t) >= kSeriesThreshold)
    return 2.0 * one_minus_cos(t) - t * std::sin(t);
  const double t2 = t * t;
  double even_fact = 24.0;  // (2m)! at m = 2
  double tpow = t2 * t2;
  double sum = 2.0 * tpow / even_fact;
  double sign = 1.0;
  for (int m = 3; m < 24; ++m) {
    even_fact *= double((2 * m - 1) * (2 * m));
    tpow *= t2;
    sign = -sign;
    const double term = sign * double(2 * m - 2) * tpow / even_fact;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace carnot47::detail
