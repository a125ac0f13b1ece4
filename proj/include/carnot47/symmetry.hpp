// Symmetries of the control structure: the so(3) isotropy action rotating
// the l- and y-blocks, transvections from the right-invariant frame, the
// collinear subgroup C_n of points with l parallel to y, canonicalization of
// geodesic parameters by frame alignment, and the rotation invariants of a
// point.
#pragma once

#include "carnot47/dynamics.hpp"
#include "carnot47/group.hpp"

namespace carnot47 {

/// True iff R is orthogonal with determinant +1 within tol.
bool is_rotation(const Mat3& R, double tol = 1e-12);

/// (x, l, y) -> (x, R l, R y). Throws if R is not a rotation. This map is a
/// group automorphism and sends geodesics through the origin to geodesics
/// through the origin.
GroupPoint act(const Mat3& R, const GroupPoint& q);

/// Minimal-angle rotation taking unit vector `from` to unit vector `to`
/// (identity when they coincide; a half-turn about a fixed perpendicular
/// axis when they are opposite).
Mat3 rotation_aligning(const Vec3& from, const Vec3& to);

/// Generator of an infinitesimal symmetry: an isotropy axis a acting as the
/// simultaneous rotation generator on the l- and y-blocks, plus coefficients
/// of a transvection over the right-invariant frame.
struct SymmetryGenerator {
  Vec3 axis = Vec3::Zero();
  Vec7 translation = Vec7::Zero();
};

/// Isotropy field of axis a at q, in coordinate components:
/// dl = l x a, dy = y x a, dx = 0. Vanishes at the origin.
Vec7 so3_field(const Vec3& a, const GroupPoint& q);

/// Full symmetry field: transvection part over the right-invariant frame
/// plus the isotropy part.
Vec7 symmetry_field(const SymmetryGenerator& g, const GroupPoint& q);

/// Collinearity test for membership in C_n: |l x y| <= tol * max(1, |l||y|).
/// Points with l = 0 or y = 0 count as collinear.
bool in_cn(const GroupPoint& q, double tol);

/// Rotation invariants (x, (l,l), (l,y), (y,y)) coordinatizing the quotient
/// by the isotropy action.
struct InvariantTuple {
  double x = 0.0;
  double ll = 0.0;
  double ly = 0.0;
  double yy = 0.0;

  /// |l x y|^2 = ll*yy - ly^2; nonnegative for realizable tuples.
  double cross_defect() const { return ll * yy - ly * ly; }
};

InvariantTuple invariants_of_point(const GroupPoint& q);

/// Reduced parameters of a geodesic's rotation class: C1, C2 unchanged,
/// c3bar = |z2|/K, the level constant K, and the aligning rotation R with
/// R e1 = Kvec/K and R e2 = z2/|z2|.
struct CanonicalParams {
  double C1 = 0.0;
  double C2 = 0.0;
  double c3bar = 0.0;
  double K = 0.0;
  Mat3 R = Mat3::Identity();
};

/// Aligns the frame (Kvec, z2) with (K e1, |z2| e2). Requires K > 0; when
/// z2 = 0 the rotation is the minimal-angle one taking e1 to Kvec/K.
CanonicalParams canonicalize(const GeodesicParams& p);

/// Rebuilds full parameters from a canonical set: Kvec = K R e1,
/// z2 = c3bar K R e2, with (C3, C4) solved from z2. Throws when the first
/// component of Kvec vanishes (the (C3, C4) chart degenerates there).
GeodesicParams params_from_canonical(const CanonicalParams& cp);

/// Parameters of the rotated geodesic act(R, .): Kvec' = R Kvec and
/// z2' = R z2. Same chart restriction as params_from_canonical.
GeodesicParams rotate_params(const Mat3& R, const GeodesicParams& p);

/// Representative curve of the rotation class at phase tau = K t, written in
/// the reduced chart that doubles the vertical block (y' = 2 y). In this
/// chart the components are the plain trigonometric polynomials
///   x   = C1 (cos tau - 1) + C2 sin tau
///   l1  = C1 sin tau + C2 (1 - cos tau),  l2 = c3bar tau,      l3 = 0
///   y1  = (C1^2 + C2^2)(tau - sin tau),   y2 = c3bar drift(tau), y3 = 0
/// and the planar reduction carries no 1/2 factors. reduced_to_group maps a
/// reduced point back to the group.
GroupPoint representative_point(double tau, const CanonicalParams& cp);

/// Core of the representative curve, independent of K and R.
GroupPoint reduced_curve_point(double tau, double c1, double c2,
                               double c3bar);

/// Undoes the reduced chart: halves the vertical block and rotates by R.
/// For cp = canonicalize(p) this reproduces geodesic_point(tau / K, p).
GroupPoint reduced_to_group(const GroupPoint& reduced, const Mat3& R);

/// Invariants of the representative curve, evaluated directly from the
/// reduced components. Identical to
/// invariants_of_point(representative_point(tau, cp)).
InvariantTuple invariants_curve(double tau, const CanonicalParams& cp);
InvariantTuple invariants_curve(double tau, double c1, double c2,
                                double c3bar);

}  // namespace carnot47
