#include "carnot47/symmetry.hpp"

#include <cmath>
#include <stdexcept>

#include "carnot47/detail/trig.hpp"

namespace carnot47 {

bool is_rotation(const Mat3& R, double tol) {
  const double ortho = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

GroupPoint act(const Mat3& R, const GroupPoint& q) {
  if (!is_rotation(R))
    throw std::invalid_argument("act: matrix is not a rotation");
  return GroupPoint{q.x, R * q.ell, R * q.y};
}

Mat3 rotation_aligning(const Vec3& from, const Vec3& to) {
  const Vec3 axis = from.cross(to);
  const double s = axis.norm();
  const double c = from.dot(to);
  if (s < 1e-14) {
    if (c > 0.0) return Mat3::Identity();
    // Opposite vectors: half turn about a fixed perpendicular axis.
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(from(i)) < std::abs(from(k))) k = i;
    Vec3 perp = from.cross(Vec3::Unit(k)).normalized();
    return Eigen::AngleAxisd(M_PI, perp).toRotationMatrix();
  }
  return Eigen::AngleAxisd(std::atan2(s, c), axis / s).toRotationMatrix();
}

Vec7 so3_field(const Vec3& a, const GroupPoint& q) {
  Vec7 v = Vec7::Zero();
  v.segment<3>(1) = q.ell.cross(a);
  v.segment<3>(4) = q.y.cross(a);
  return v;
}

Vec7 symmetry_field(const SymmetryGenerator& g, const GroupPoint& q) {
  return frame_right(q) * g.translation + so3_field(g.axis, q);
}

bool in_cn(const GroupPoint& q, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("in_cn: tol must be > 0");
  const double cross = q.ell.cross(q.y).norm();
  return cross <= tol * std::max(1.0, q.ell.norm() * q.y.norm());
}

InvariantTuple invariants_of_point(const GroupPoint& q) {
  return InvariantTuple{q.x, q.ell.squaredNorm(), q.ell.dot(q.y),
                        q.y.squaredNorm()};
}

CanonicalParams canonicalize(const GeodesicParams& p) {
  const double K = p.K();
  if (K < kZeroK)
    throw std::invalid_argument(
        "canonicalize: K = 0 selects the line branch, which has no "
        "canonical rotation");
  const Vec3 z1 = p.Kvec;
  const Vec3 z2 = p.z2();
  const double C = z2.norm();

  CanonicalParams cp;
  cp.C1 = p.C(0);
  cp.C2 = p.C(1);
  cp.K = K;
  cp.c3bar = C / K;
  if (C > 0.0) {
    const Vec3 u = z1 / K;
    const Vec3 v = z2 / C;
    cp.R.col(0) = u;
    cp.R.col(1) = v;
    cp.R.col(2) = u.cross(v);
  } else {
    cp.R = rotation_aligning(Vec3::UnitX(), z1 / K);
  }
  return cp;
}

GeodesicParams params_from_canonical(const CanonicalParams& cp) {
  GeodesicParams p;
  p.C(0) = cp.C1;
  p.C(1) = cp.C2;
  p.Kvec = cp.K * cp.R.col(0);
  const Vec3 z2 = cp.c3bar * cp.K * cp.R.col(1);
  const double k1 = p.Kvec(0);
  if (std::abs(k1) < 1e-9 * cp.K) {
    // z2 = (-C3 K3 - C4 K2, C4 K1, C3 K1) only spans the plane orthogonal
    // to Kvec when K1 is nonzero.
    if (z2.tail<2>().norm() > 1e-9 * std::max(1.0, z2.norm()))
      throw std::domain_error(
          "params_from_canonical: (C3, C4) chart degenerates at K1 = 0");
    const Vec3 k = p.Kvec;
    const double d = k(1) * k(1) + k(2) * k(2);
    p.C(2) = -z2(0) * k(2) / d;
    p.C(3) = -z2(0) * k(1) / d;
    return p;
  }
  p.C(3) = z2(1) / k1;
  p.C(2) = z2(2) / k1;
  return p;
}

GeodesicParams rotate_params(const Mat3& R, const GeodesicParams& p) {
  if (p.is_line()) {
    GeodesicParams r = p;
    Vec3 lv = R * p.C.tail<3>();
    r.C.tail<3>() = lv;
    return r;
  }
  CanonicalParams cp = canonicalize(p);
  cp.R = R * cp.R;
  return params_from_canonical(cp);
}

GroupPoint reduced_curve_point(double tau, double c1, double c2,
                               double c3bar) {
  const double s = std::sin(tau);
  const double omc = detail::one_minus_cos(tau);
  GroupPoint q;
  q.x = -c1 * omc + c2 * s;
  q.ell(0) = c1 * s + c2 * omc;
  q.ell(1) = c3bar * tau;
  q.y(0) = (c1 * c1 + c2 * c2) * detail::t_minus_sin(tau);
  q.y(1) = c3bar * (c1 * detail::y_drift_c1(tau) + c2 * detail::y_drift_c2(tau));
  return q;
}

GroupPoint representative_point(double tau, const CanonicalParams& cp) {
  return reduced_curve_point(tau, cp.C1, cp.C2, cp.c3bar);
}

GroupPoint reduced_to_group(const GroupPoint& reduced, const Mat3& R) {
  return act(R, GroupPoint{reduced.x, reduced.ell, 0.5 * reduced.y});
}

InvariantTuple invariants_curve(double tau, double c1, double c2,
                                double c3bar) {
  return invariants_of_point(reduced_curve_point(tau, c1, c2, c3bar));
}

InvariantTuple invariants_curve(double tau, const CanonicalParams& cp) {
  return invariants_curve(tau, cp.C1, cp.C2, cp.c3bar);
}

}  // namespace carnot47
