#include "carnot47/group.hpp"

#include <cmath>
#include <stdexcept>

namespace carnot47 {

Vec7 GroupPoint::coords() const {
  Vec7 c;
  c << x, ell(0), ell(1), ell(2), y(0), y(1), y(2);
  return c;
}

bool GroupPoint::finite() const {
  return std::isfinite(x) && ell.allFinite() && y.allFinite();
}

GroupPoint identity() { return GroupPoint{}; }

GroupPoint point_from_coords(const Vec7& c) {
  GroupPoint q;
  q.x = c(0);
  q.ell = c.segment<3>(1);
  q.y = c.segment<3>(4);
  return q;
}

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) {
  GroupPoint r;
  r.x = a.x + b.x;
  r.ell = a.ell + b.ell;
  r.y = a.y + b.y + 0.5 * (a.x * b.ell - b.x * a.ell);
  return r;
}

GroupPoint inverse(const GroupPoint& a) {
  return GroupPoint{-a.x, -a.ell, -a.y};
}

bool approx_equal(const GroupPoint& a, const GroupPoint& b, double tol) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff() <= tol;
}

Frame frame_left(const GroupPoint& q) {
  Frame f = Frame::Zero();
  f(0, 0) = 1.0;
  f.block<3, 1>(4, 0) = -0.5 * q.ell;         // N0
  for (int i = 0; i < 3; ++i) {
    f(1 + i, 1 + i) = 1.0;                    // Ni
    f(4 + i, 1 + i) = 0.5 * q.x;
    f(4 + i, 4 + i) = 1.0;                    // N0i
  }
  return f;
}

Frame frame_right(const GroupPoint& q) {
  Frame f = Frame::Zero();
  f(0, 0) = 1.0;
  f.block<3, 1>(4, 0) = 0.5 * q.ell;
  for (int i = 0; i < 3; ++i) {
    f(1 + i, 1 + i) = 1.0;
    f(4 + i, 1 + i) = -0.5 * q.x;
    f(4 + i, 4 + i) = 1.0;
  }
  return f;
}

double structure_constant(int j, int l, int k) {
  if (j < 0 || j > 6 || l < 0 || l > 6 || k < 0 || k > 6)
    throw std::out_of_range("structure_constant: frame index out of range");
  if (j == 0 && l >= 1 && l <= 3 && k == l + 3) return 1.0;
  if (l == 0 && j >= 1 && j <= 3 && k == j + 3) return -1.0;
  return 0.0;
}

Vec7 lie_bracket(const Vec7& u, const Vec7& v) {
  Vec7 w = Vec7::Zero();
  // [N0, Ni] = N0i is the only nonzero block; bilinear extension.
  for (int i = 1; i <= 3; ++i)
    w(i + 3) = u(0) * v(i) - v(0) * u(i);
  return w;
}

Vec7 TangentVector::coordinates_at(const GroupPoint& q) const {
  return frame_left(q) * frame_coeffs;
}

}  // namespace carnot47
