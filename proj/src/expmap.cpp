#include "carnot47/expmap.hpp"

#include <algorithm>
#include <cmath>

#include "carnot47/detail/trig.hpp"

namespace carnot47 {

double ExpParams::level_K() const {
  return 1.0 / std::sqrt(c1 * c1 + c2 * c2 + c3bar * c3bar);
}

double ExpParams::length() const {
  return tau * std::sqrt(c1 * c1 + c2 * c2 + c3bar * c3bar);
}

InvariantTuple exp_factored(const ExpParams& p) {
  return invariants_curve(p.tau, p.c1, p.c2, p.c3bar);
}

Mat4 exp_jacobian(const ExpParams& p) {
  const double tau = p.tau, c1 = p.c1, c2 = p.c2, c3 = p.c3bar;
  const double s = std::sin(tau);
  const double c = std::cos(tau);
  const double omc = detail::one_minus_cos(tau);
  const double tms = detail::t_minus_sin(tau);
  const double g1 = detail::y_drift_c1(tau);
  const double g2 = detail::y_drift_c2(tau);

  const double L1 = c1 * s + c2 * omc;
  const double L2 = c3 * tau;
  const double r2 = c1 * c1 + c2 * c2;
  const double Y1 = r2 * tms;
  const double G = c1 * g1 + c2 * g2;
  const double Y2 = c3 * G;
  const double dG_dtau = c1 * (tau * s - omc) + c2 * (s - tau * c);

  // Gradients of the reduced components over (c1, c2, c3bar, tau).
  const Vec4 dx(-omc, s, 0.0, -c1 * s + c2 * c);
  const Vec4 dL1(s, omc, 0.0, c1 * c + c2 * s);
  const Vec4 dL2(0.0, 0.0, tau, c3);
  const Vec4 dY1(2.0 * c1 * tms, 2.0 * c2 * tms, 0.0, r2 * omc);
  const Vec4 dY2(c3 * g1, c3 * g2, G, c3 * dG_dtau);

  Mat4 J;
  J.row(0) = dx.transpose();
  J.row(1) = (2.0 * L1 * dL1 + 2.0 * L2 * dL2).transpose();
  J.row(2) = (Y1 * dL1 + L1 * dY1 + Y2 * dL2 + L2 * dY2).transpose();
  J.row(3) = (2.0 * Y1 * dY1 + 2.0 * Y2 * dY2).transpose();
  return J;
}

double first_critical_tau(double c1, double c2, double c3bar, double tau_hi,
                          double scan_step) {
  if (std::abs(c3bar) < 1e-14) return 0.0;  // singular stratum
  auto det_at = [&](double tau) {
    return exp_jacobian(ExpParams{c1, c2, c3bar, tau}).determinant();
  };
  double prev_tau = scan_step;
  double prev = det_at(prev_tau);
  for (double tau = 2.0 * scan_step; tau <= tau_hi + 1e-12; tau += scan_step) {
    const double cur = det_at(tau);
    if ((prev < 0.0) != (cur < 0.0) || cur == 0.0) {
      double lo = prev_tau, hi = tau;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((det_at(mid) < 0.0) == (prev < 0.0))
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = cur;
    prev_tau = tau;
  }
  return tau_hi;
}

namespace {

template <int N>
struct NewtonOutcome {
  Eigen::Matrix<double, N, 1> x;
  bool converged = false;
  bool singular = false;
};

// Damped Newton with step halving on the residual norm.
template <int N, class Resid, class Jac, class Accept>
NewtonOutcome<N> damped_newton(Eigen::Matrix<double, N, 1> x, Resid resid,
                               Jac jac, Accept accept, int max_iter,
                               int max_halvings) {
  using VecN = Eigen::Matrix<double, N, 1>;
  NewtonOutcome<N> out;
  VecN F = resid(x);
  for (int it = 0; it < max_iter; ++it) {
    if (accept(F)) {
      out.x = x;
      out.converged = true;
      return out;
    }
    const Eigen::Matrix<double, N, N> J = jac(x);
    Eigen::PartialPivLU<Eigen::Matrix<double, N, N>> lu(J);
    if (std::abs(lu.determinant()) < 1e-14) {
      out.x = x;
      out.singular = true;
      return out;
    }
    const VecN delta = lu.solve(-F);
    if (!delta.allFinite()) {
      out.x = x;
      return out;
    }
    const double f0 = F.norm();
    double alpha = 1.0;
    bool stepped = false;
    for (int h = 0; h <= max_halvings; ++h) {
      const VecN trial = x + alpha * delta;
      const VecN Ft = resid(trial);
      if (Ft.allFinite() && Ft.norm() < f0) {
        x = trial;
        F = Ft;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      out.x = x;
      out.converged = accept(F);
      return out;
    }
  }
  out.x = x;
  out.converged = accept(F);
  return out;
}

bool params_close(const ExpParams& a, const ExpParams& b) {
  const double scale =
      std::max({1.0, std::abs(a.c1), std::abs(a.c2), std::abs(a.c3bar),
                std::abs(a.tau)});
  return std::abs(a.c1 - b.c1) <= 1e-6 * scale &&
         std::abs(a.c2 - b.c2) <= 1e-6 * scale &&
         std::abs(a.c3bar - b.c3bar) <= 1e-6 * scale &&
         std::abs(a.tau - b.tau) <= 1e-6 * scale;
}

bool params_less(const ExpParams& a, const ExpParams& b) {
  const double la = a.length(), lb = b.length();
  if (la != lb) return la < lb;
  if (a.c1 != b.c1) return a.c1 < b.c1;
  if (a.c2 != b.c2) return a.c2 < b.c2;
  if (a.c3bar != b.c3bar) return a.c3bar < b.c3bar;
  return a.tau < b.tau;
}

double sup_distance(const GroupPoint& a, const GroupPoint& b) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

}  // namespace

InvertResult invert_exp(const InvariantTuple& target, const SeedSpec& seeds,
                        double tol) {
  const double inv_scale = std::max(1.0, target.ll * target.yy);
  if (target.ll < 0.0 || target.yy < 0.0 ||
      target.cross_defect() < -1e-9 * inv_scale)
    throw std::invalid_argument(
        "invert_exp: target violates the Cauchy-Schwarz constraint; no "
        "point has these invariants");
  if (target.cross_defect() <= 1e-20 * inv_scale)
    throw CollinearTarget(
        "invert_exp: collinear target (ll*yy = ly^2); solve the planar "
        "reduction instead");

  // The map scales as (s, s^2, s^3, s^4) under (c1,c2,c3bar) -> s*(...),
  // so solve against a normalized target and rescale the roots.
  const double s = std::max(
      {std::abs(target.x) / 2.0, std::sqrt(target.ll),
       std::cbrt(std::abs(target.ly)), std::pow(target.yy, 0.25)});
  if (!(s > 0.0))
    throw std::invalid_argument("invert_exp: target is the origin");
  const InvariantTuple tgt{target.x / s, target.ll / (s * s),
                           target.ly / (s * s * s),
                           target.yy / (s * s * s * s)};

  auto resid = [&tgt](const Vec4& v) {
    const InvariantTuple e =
        invariants_curve(v(3), v(0), v(1), v(2));
    return Vec4(e.x - tgt.x, e.ll - tgt.ll, e.ly - tgt.ly, e.yy - tgt.yy);
  };
  auto jac = [](const Vec4& v) {
    return exp_jacobian(ExpParams{v(0), v(1), v(2), v(3)});
  };
  auto accept = [&tgt, tol](const Vec4& F) {
    return std::abs(F(0)) <= tol * std::max(1.0, std::abs(tgt.x)) &&
           std::abs(F(1)) <= tol * std::max(1.0, std::abs(tgt.ll)) &&
           std::abs(F(2)) <= tol * std::max(1.0, std::abs(tgt.ly)) &&
           std::abs(F(3)) <= tol * std::max(1.0, std::abs(tgt.yy));
  };

  std::vector<ExpParams> roots;
  bool any_singular = false;
  for (double r : seeds.radii) {
    for (int k = 0; k < seeds.angle_count; ++k) {
      const double phi = 2.0 * M_PI * double(k) / double(seeds.angle_count);
      for (double c3 : seeds.c3bars) {
        for (double tau0 : seeds.taus) {
          Vec4 x0(r * std::cos(phi), r * std::sin(phi), c3, tau0);
          const auto out = damped_newton<4>(x0, resid, jac, accept,
                                            seeds.max_iterations,
                                            seeds.max_halvings);
          if (out.singular) any_singular = true;
          if (!out.converged) continue;
          ExpParams root{out.x(0), out.x(1), std::abs(out.x(2)), out.x(3)};
          if (root.tau <= 1e-8) continue;
          bool known = false;
          for (const auto& existing : roots)
            if (params_close(existing, root)) {
              known = true;
              break;
            }
          if (!known) roots.push_back(root);
        }
      }
    }
  }

  if (roots.empty()) {
    if (any_singular)
      throw SingularJacobian(
          "invert_exp: Newton hit a singular Jacobian from every seed");
    throw NoConvergence("invert_exp: no seed converged to the target");
  }

  std::vector<ExpParams> valid;
  for (const auto& root : roots) {
    const double tau_crit =
        first_critical_tau(root.c1, root.c2, root.c3bar,
                           std::max(9.0, root.tau + 1.0));
    if (root.tau <= tau_crit + 1e-9) valid.push_back(root);
  }
  if (valid.empty())
    throw OutOfValidatedRange(
        "invert_exp: every root lies beyond the first critical phase of "
        "the factorized map");

  for (auto& v : valid) {
    v.c1 *= s;
    v.c2 *= s;
    v.c3bar *= s;
  }
  std::sort(valid.begin(), valid.end(), params_less);
  return InvertResult{valid.front(), valid};
}

Mat3 recover_rotation(const GroupPoint& q, const GroupPoint& qbar,
                      double tol) {
  const InvariantTuple a = invariants_of_point(q);
  const InvariantTuple b = invariants_of_point(qbar);
  auto matches = [tol](double u, double v) {
    return std::abs(u - v) <= tol * std::max({1.0, std::abs(u), std::abs(v)});
  };
  if (!matches(a.x, b.x) || !matches(a.ll, b.ll) || !matches(a.ly, b.ly) ||
      !matches(a.yy, b.yy))
    throw std::invalid_argument(
        "recover_rotation: points lie in different rotation classes");

  auto independent = [](const GroupPoint& g) {
    return g.ell.cross(g.y).norm() >
           1e-12 * std::max(1.0, g.ell.norm() * g.y.norm());
  };
  if (!independent(q) || !independent(qbar))
    throw CollinearFrame(
        "recover_rotation: l and y are collinear; the rotation is not "
        "unique");

  auto frame = [](const GroupPoint& g) {
    Mat3 M;
    M.col(0) = g.ell.normalized();
    const Vec3 yperp = g.y - g.y.dot(M.col(0)) * M.col(0);
    M.col(1) = yperp.normalized();
    M.col(2) = M.col(0).cross(M.col(1));
    return M;
  };
  return frame(q) * frame(qbar).transpose();
}

GroupPoint answer_endpoint(const GeodesicAnswer& a) {
  GroupPoint rep;
  if (a.branch == Branch::Line) {
    rep.x = a.params.c1 * a.params.tau;
    rep.ell = Vec3(a.params.c2 * a.params.tau, 0.0, 0.0);
  } else {
    rep = reduced_curve_point(a.params.tau, a.params.c1, a.params.c2,
                              a.params.c3bar);
  }
  return act(a.R, rep);
}

namespace {

GeodesicAnswer connect_line(const GroupPoint& q) {
  GeodesicAnswer ans;
  ans.branch = Branch::Line;
  const double lnorm = q.ell.norm();
  const double T = std::hypot(q.x, lnorm);
  ans.params = ExpParams{q.x / T, lnorm / T, 0.0, T};
  ans.K = 0.0;
  ans.length = T;
  ans.R = lnorm > 0.0 ? rotation_aligning(Vec3::UnitX(), q.ell / lnorm)
                      : Mat3::Identity();
  ans.residual = sup_distance(answer_endpoint(ans), q);
  return ans;
}

// Planar problem in the reduced chart: match
//   x(tau)  = c1 (cos tau - 1) + c2 sin tau
//   l(tau)  = c1 sin tau + c2 (1 - cos tau)
//   y(tau)  = (c1^2 + c2^2)(tau - sin tau)
// against a target with y > 0 and tau in (0, 2 pi].
std::vector<ExpParams> planar_roots(double tx, double tl, double ty,
                                    const ConnectOptions& opts) {
  const double sigma = std::max(std::hypot(tx, tl), std::sqrt(ty));
  const double nx = tx / sigma, nl = tl / sigma, ny = ty / (sigma * sigma);

  auto resid = [&](const Eigen::Vector3d& v) {
    const double c1 = v(0), c2 = v(1), tau = v(2);
    const double sn = std::sin(tau);
    const double omc = detail::one_minus_cos(tau);
    return Eigen::Vector3d(-c1 * omc + c2 * sn - nx,
                           c1 * sn + c2 * omc - nl,
                           (c1 * c1 + c2 * c2) * detail::t_minus_sin(tau) - ny);
  };
  auto jac = [](const Eigen::Vector3d& v) {
    const double c1 = v(0), c2 = v(1), tau = v(2);
    const double sn = std::sin(tau);
    const double cs = std::cos(tau);
    const double omc = detail::one_minus_cos(tau);
    const double tms = detail::t_minus_sin(tau);
    Mat3 J;
    J.row(0) << -omc, sn, -c1 * sn + c2 * cs;
    J.row(1) << sn, omc, c1 * cs + c2 * sn;
    J.row(2) << 2.0 * c1 * tms, 2.0 * c2 * tms, (c1 * c1 + c2 * c2) * omc;
    return J;
  };
  const double tol = opts.newton_tol;
  auto accept = [&](const Eigen::Vector3d& F) {
    return std::abs(F(0)) <= tol * std::max(1.0, std::abs(nx)) &&
           std::abs(F(1)) <= tol * std::max(1.0, std::abs(nl)) &&
           std::abs(F(2)) <= tol * std::max(1.0, std::abs(ny));
  };

  std::vector<double> radii{0.4, 0.8, 1.3, 2.2};
  // Near-vertical targets live close to tau = 2 pi with radius sqrt(y/2pi).
  radii.push_back(std::sqrt(ny / (2.0 * M_PI)));
  const std::vector<double> taus{0.4, 0.9, 1.5, 2.2, 2.9, 3.6,
                                 4.3, 5.0, 5.6, 5.9, 6.1, 6.25};

  std::vector<ExpParams> roots;
  for (double r : radii) {
    for (int k = 0; k < opts.seeds.angle_count; ++k) {
      const double phi =
          2.0 * M_PI * double(k) / double(opts.seeds.angle_count);
      for (double tau0 : taus) {
        Eigen::Vector3d x0(r * std::cos(phi), r * std::sin(phi), tau0);
        const auto out =
            damped_newton<3>(x0, resid, jac, accept,
                             opts.seeds.max_iterations, opts.seeds.max_halvings);
        if (!out.converged) continue;
        ExpParams root{out.x(0) * sigma, out.x(1) * sigma, 0.0, out.x(2)};
        if (root.tau <= 1e-8 || root.tau > 2.0 * M_PI + 1e-9) continue;
        bool known = false;
        for (const auto& existing : roots)
          if (params_close(existing, root)) {
            known = true;
            break;
          }
        if (!known) roots.push_back(root);
      }
    }
  }
  std::sort(roots.begin(), roots.end(), params_less);
  return roots;
}

GeodesicAnswer connect_in_cn(const GroupPoint& q, const ConnectOptions& opts) {
  const HeisenbergPoint hp = heisenberg_project(q, opts.cn_tol);
  GeodesicAnswer ans;
  ans.branch = Branch::InCn;

  // Fold the target into the y > 0 half; the sign is absorbed by the
  // aligning rotation below.
  const double sgn = hp.y >= 0.0 ? 1.0 : -1.0;
  const Vec3 axis =
      q.ell.norm() > 0.0 ? Vec3(q.ell.normalized()) : Vec3(q.y.normalized());

  if (std::hypot(hp.x, hp.l) <= 1e-9 * std::max(1.0, std::abs(hp.y))) {
    // Vertical point: reached at the cut time by the whole circle of
    // parameters with the same C1^2 + C2^2. Maxwell point.
    const double r = std::sqrt(std::abs(hp.y) / (2.0 * M_PI));
    ans.params = ExpParams{r, 0.0, 0.0, 2.0 * M_PI};
    ans.maxwell = true;
  } else {
    const auto roots = planar_roots(hp.x, sgn * hp.l, sgn * hp.y, opts);
    if (roots.empty())
      throw NoConvergence("connect: planar solve found no admissible root");
    ans.params = roots.front();
    ans.alternates.assign(roots.begin() + 1, roots.end());
  }

  const double r = std::hypot(ans.params.c1, ans.params.c2);
  ans.K = 1.0 / r;
  ans.length = ans.params.tau * r;
  ans.R = rotation_aligning(Vec3::UnitX(), sgn * axis);
  ans.residual = sup_distance(answer_endpoint(ans), q);
  return ans;
}

GeodesicAnswer connect_off_cn(const GroupPoint& q, const ConnectOptions& opts) {
  const InvariantTuple target = invariants_of_point(q);
  const InvertResult inv = invert_exp(target, opts.seeds, opts.newton_tol);

  GeodesicAnswer ans;
  ans.branch = Branch::OffCn;
  ans.params = inv.best;
  if (inv.roots.size() > 1)
    ans.alternates.assign(inv.roots.begin() + 1, inv.roots.end());
  ans.K = inv.best.level_K();
  ans.length = inv.best.length();
  const GroupPoint rep = reduced_curve_point(inv.best.tau, inv.best.c1,
                                             inv.best.c2, inv.best.c3bar);
  ans.R = recover_rotation(q, rep, 1e-6);
  ans.residual = sup_distance(answer_endpoint(ans), q);
  return ans;
}

}  // namespace

GeodesicAnswer connect(const GroupPoint& q, const ConnectOptions& opts) {
  if (!q.finite())
    throw std::invalid_argument("connect: endpoint is not finite");
  const double mag =
      std::max({std::abs(q.x), q.ell.norm(), q.y.norm()});
  if (mag <= 1e-14)
    throw std::invalid_argument("connect: endpoint is the origin");
  if (q.y.norm() <= 1e-12 * std::max(1.0, std::hypot(q.x, q.ell.norm())))
    return connect_line(q);
  if (in_cn(q, opts.cn_tol)) return connect_in_cn(q, opts);
  return connect_off_cn(q, opts);
}

std::vector<SphereSample> sphere_sample(int count, const SphereOptions& opts) {
  if (count <= 0)
    throw std::invalid_argument("sphere_sample: count must be positive");
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<SphereSample> out;
  out.reserve(static_cast<std::size_t>(count));
  while (out.size() < static_cast<std::size_t>(count)) {
    // Uniform direction on the parameter sphere, then rescaled onto the
    // level set (C only; Kvec fixes the time scale).
    GeodesicParams p;
    for (int i = 0; i < 4; ++i) p.C(i) = gauss(rng);
    if (opts.family == ParamFamily::Line) {
      p.Kvec.setZero();
    } else {
      for (int i = 0; i < 3; ++i) p.Kvec(i) = gauss(rng);
    }
    if (opts.family == ParamFamily::InCn) {
      p.C(2) = 0.0;
      p.C(3) = 0.0;
    }
    double norm = std::sqrt(p.C.squaredNorm() + p.Kvec.squaredNorm());
    if (norm < 1e-8) continue;
    p.C /= norm;
    p.Kvec /= norm;
    if (opts.family != ParamFamily::Line && p.K() < 1e-6) continue;
    if (p.level_lhs() <= 1e-12) continue;
    p = p.normalized();
    out.push_back(SphereSample{p, geodesic_point(1.0, p)});
  }
  return out;
}

}  // namespace carnot47
