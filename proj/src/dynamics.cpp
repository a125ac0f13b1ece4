#include "carnot47/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "carnot47/detail/trig.hpp"

namespace carnot47 {

bool FullState::finite() const {
  return q.finite() && lambda.h.allFinite() && lambda.w.allFinite();
}

Vec3 GeodesicParams::z2() const {
  return Vec3(-C(2) * Kvec(2) - C(3) * Kvec(1), C(3) * Kvec(0),
              C(2) * Kvec(0));
}

double GeodesicParams::level_lhs() const {
  if (is_line()) return C.squaredNorm();
  const double k2 = Kvec.squaredNorm();
  return k2 * (C(0) * C(0) + C(1) * C(1)) + z2().squaredNorm();
}

GeodesicParams GeodesicParams::normalized() const {
  const double lhs = level_lhs();
  if (lhs <= 0.0)
    throw std::invalid_argument("normalized: zero parameters define no curve");
  GeodesicParams p = *this;
  p.C /= std::sqrt(lhs);
  return p;
}

bool GeodesicParams::is_degenerate(double tol) const {
  return !is_line() && std::abs(C(0)) < tol && std::abs(C(1)) < tol;
}

CotangentState GeodesicParams::initial_covector() const {
  CotangentState s;
  s.w = Kvec;
  if (is_line()) {
    s.h = C;
    return s;
  }
  s.h(0) = K() * C(1);
  s.h.tail<3>() = C(0) * Kvec + z2();
  return s;
}

double hamiltonian(const CotangentState& s) { return 0.5 * s.h.squaredNorm(); }

Mat4 omega_matrix(const Vec3& w) {
  Mat4 m = Mat4::Zero();
  m.block<1, 3>(0, 1) = w.transpose();
  m.block<3, 1>(1, 0) = -w;
  return m;
}

FullState ode_rhs(const FullState& s) {
  FullState d;
  const Vec3 hv = s.lambda.h.tail<3>();
  d.q.x = s.lambda.h(0);
  d.q.ell = hv;
  d.q.y = 0.5 * (s.q.x * hv - s.lambda.h(0) * s.q.ell);
  d.lambda.h = -(omega_matrix(s.lambda.w) * s.lambda.h);
  d.lambda.w.setZero();
  return d;
}

namespace {

FullState axpy(const FullState& s, double a, const FullState& d) {
  FullState r;
  r.q.x = s.q.x + a * d.q.x;
  r.q.ell = s.q.ell + a * d.q.ell;
  r.q.y = s.q.y + a * d.q.y;
  r.lambda.h = s.lambda.h + a * d.lambda.h;
  r.lambda.w = s.lambda.w;  // exact: w' = 0
  return r;
}

}  // namespace

Trajectory integrate_numeric(const FullState& initial, double T, double step) {
  if (!initial.finite())
    throw std::invalid_argument("integrate_numeric: non-finite initial state");
  if (!(T > 0.0) || !(step > 0.0))
    throw std::invalid_argument("integrate_numeric: T and step must be > 0");

  Trajectory traj;
  const auto n_full = static_cast<std::size_t>(T / step);
  traj.t.reserve(n_full + 2);
  traj.states.reserve(n_full + 2);

  FullState s = initial;
  double t = 0.0;
  traj.t.push_back(t);
  traj.states.push_back(s);

  auto rk4_step = [](const FullState& y, double h) {
    const FullState k1 = ode_rhs(y);
    const FullState k2 = ode_rhs(axpy(y, 0.5 * h, k1));
    const FullState k3 = ode_rhs(axpy(y, 0.5 * h, k2));
    const FullState k4 = ode_rhs(axpy(y, h, k3));
    FullState r = y;
    r.q.x += h / 6.0 * (k1.q.x + 2 * k2.q.x + 2 * k3.q.x + k4.q.x);
    r.q.ell += h / 6.0 * (k1.q.ell + 2 * k2.q.ell + 2 * k3.q.ell + k4.q.ell);
    r.q.y += h / 6.0 * (k1.q.y + 2 * k2.q.y + 2 * k3.q.y + k4.q.y);
    r.lambda.h +=
        h / 6.0 * (k1.lambda.h + 2 * k2.lambda.h + 2 * k3.lambda.h + k4.lambda.h);
    return r;
  };

  for (std::size_t i = 0; i < n_full; ++i) {
    s = rk4_step(s, step);
    t = double(i + 1) * step;
    traj.t.push_back(t);
    traj.states.push_back(s);
  }
  if (t < T - 1e-15 * std::max(1.0, T)) {
    s = rk4_step(s, T - t);
    traj.t.push_back(T);
    traj.states.push_back(s);
  }
  return traj;
}

Vec4 fiber_solution(double t, const GeodesicParams& p) {
  if (p.is_line()) return p.C;
  const double K = p.K();
  const double c = std::cos(K * t);
  const double s = std::sin(K * t);
  Vec4 h;
  h(0) = K * (-p.C(0) * s + p.C(1) * c);
  h.tail<3>() = (p.C(0) * c + p.C(1) * s) * p.Kvec + p.z2();
  return h;
}

GroupPoint geodesic_point(double t, const GeodesicParams& p) {
  GroupPoint q;
  if (p.is_line()) {
    q.x = p.C(0) * t;
    q.ell = p.C.tail<3>() * t;
    return q;
  }
  const double K = p.K();
  const double tau = K * t;
  const double s = std::sin(tau);
  const double omc = detail::one_minus_cos(tau);
  const double c1 = p.C(0), c2 = p.C(1);
  const Vec3 zc = p.z2();

  q.x = -c1 * omc + c2 * s;
  q.ell = ((c1 * s + c2 * omc) / K) * p.Kvec + t * zc;
  const double drift =
      c1 * detail::y_drift_c1(tau) + c2 * detail::y_drift_c2(tau);
  q.y = ((c1 * c1 + c2 * c2) * detail::t_minus_sin(tau) * p.Kvec +
         drift * zc) /
        (2.0 * K);
  return q;
}

GeodesicParams draw_unit_level(std::mt19937_64& rng, ParamFamily family) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> kmag(0.4, 2.5);
  for (;;) {
    GeodesicParams p;
    for (int i = 0; i < 4; ++i) p.C(i) = gauss(rng);
    if (family == ParamFamily::Line) {
      p.Kvec.setZero();
    } else {
      Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
      if (dir.norm() < 1e-6) continue;
      p.Kvec = kmag(rng) * dir.normalized();
    }
    if (family == ParamFamily::InCn) {
      p.C(2) = 0.0;
      p.C(3) = 0.0;
    }
    if (p.C.head<2>().norm() < 0.05 && family != ParamFamily::Line) continue;
    if (p.level_lhs() <= 1e-12) continue;
    return p.normalized();
  }
}

}  // namespace carnot47
