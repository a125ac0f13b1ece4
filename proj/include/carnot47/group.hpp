// Carnot group with growth vector (4,7): the group arithmetic on
// R x R^3 x R^3, its 2-step nilpotent Lie algebra, and the left- and
// right-invariant frames in global exponential coordinates.
#pragma once

#include <Eigen/Dense>

namespace carnot47 {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Columns are the coordinate components of the seven frame fields, in the
// fixed order N0, N1, N2, N3, N01, N02, N03. Rows follow the coordinate
// order (x, l1, l2, l3, y1, y2, y3).
using Frame = Eigen::Matrix<double, 7, 7>;

/// A point (x, l, y) of the group, identified with R^7.
struct GroupPoint {
  double x = 0.0;
  Vec3 ell = Vec3::Zero();
  Vec3 y = Vec3::Zero();

  Vec7 coords() const;
  bool finite() const;
};

GroupPoint identity();
GroupPoint point_from_coords(const Vec7& c);

/// Group product. The y-block picks up the half-commutator correction
/// y + y~ + (x*l~ - x~*l)/2.
GroupPoint multiply(const GroupPoint& a, const GroupPoint& b);

/// Group inverse; componentwise negation (the half-terms cancel).
GroupPoint inverse(const GroupPoint& a);

bool approx_equal(const GroupPoint& a, const GroupPoint& b, double tol);

/// Left-invariant frame at q, as coordinate components.
Frame frame_left(const GroupPoint& q);

/// Right-invariant frame at q; the sign of the half-corrections is
/// opposite to the left frame.
Frame frame_right(const GroupPoint& q);

/// Structure constant c_{jl}^k of the frame Lie algebra: [e_j, e_l] =
/// sum_k c_{jl}^k e_k. The only nonzero brackets are [N0, Ni] = N0i.
double structure_constant(int j, int l, int k);

/// Lie bracket of two tangent vectors at the origin, both given by their
/// coefficients in the fixed frame.
Vec7 lie_bracket(const Vec7& u, const Vec7& v);

/// A tangent vector stored by its coefficients in the left-invariant frame.
struct TangentVector {
  Vec7 frame_coeffs = Vec7::Zero();

  /// Coordinate components of the vector when attached at base point q.
  Vec7 coordinates_at(const GroupPoint& q) const;
};

}  // namespace carnot47
