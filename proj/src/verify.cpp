#include "carnot47/verify.hpp"

#include <algorithm>
#include <cmath>

#include "carnot47/detail/trig.hpp"

namespace carnot47 {

namespace {

GroupPoint random_point(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  GroupPoint q;
  q.x = u(rng);
  for (int i = 0; i < 3; ++i) {
    q.ell(i) = u(rng);
    q.y(i) = u(rng);
  }
  return q;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

CheckResult make_result(std::string name, std::string grid, double margin,
                        bool strict = false) {
  CheckResult r;
  r.check = std::move(name);
  r.grid = std::move(grid);
  r.min_value = margin;
  r.pass = strict ? margin > 0.0 : margin >= 0.0;
  return r;
}

}  // namespace

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

CheckResult check_group_associativity(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const GroupPoint a = random_point(rng, 2.0);
    const GroupPoint b = random_point(rng, 2.0);
    const GroupPoint c = random_point(rng, 2.0);
    const GroupPoint lhs = multiply(multiply(a, b), c);
    const GroupPoint rhs = multiply(a, multiply(b, c));
    const double scale = std::max(1.0, lhs.coords().cwiseAbs().maxCoeff());
    worst = std::max(worst,
                     (lhs.coords() - rhs.coords()).cwiseAbs().maxCoeff() / scale);
  }
  return make_result("group_associativity", "random triples n=" + std::to_string(n),
                     1e-12 - worst);
}

CheckResult check_bracket_axioms() {
  double worst = 0.0;
  // Table values, antisymmetry and Jacobi over the full frame.
  for (int j = 0; j < 7; ++j)
    for (int l = 0; l < 7; ++l) {
      const Vec7 bjl = lie_bracket(Vec7::Unit(j), Vec7::Unit(l));
      Vec7 expected = Vec7::Zero();
      if (j == 0 && l >= 1 && l <= 3) expected(l + 3) = 1.0;
      if (l == 0 && j >= 1 && j <= 3) expected(j + 3) = -1.0;
      worst = std::max(worst, (bjl - expected).cwiseAbs().maxCoeff());
      const Vec7 blj = lie_bracket(Vec7::Unit(l), Vec7::Unit(j));
      worst = std::max(worst, (bjl + blj).cwiseAbs().maxCoeff());
      for (int k = 0; k < 7; ++k) {
        worst = std::max(
            worst, std::abs(structure_constant(j, l, k) - bjl(k)));
        const Vec7 jac =
            lie_bracket(lie_bracket(Vec7::Unit(j), Vec7::Unit(l)), Vec7::Unit(k)) +
            lie_bracket(lie_bracket(Vec7::Unit(l), Vec7::Unit(k)), Vec7::Unit(j)) +
            lie_bracket(lie_bracket(Vec7::Unit(k), Vec7::Unit(j)), Vec7::Unit(l));
        worst = std::max(worst, jac.cwiseAbs().maxCoeff());
      }
    }
  return make_result("lie_bracket_axioms", "exhaustive 7x7x7", 1e-15 - worst);
}

CheckResult check_frame_left_invariance(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const GroupPoint g = random_point(rng, 1.5);
    const GroupPoint q = random_point(rng, 1.5);
    const Frame fq = frame_left(q);
    const Frame fgq = frame_left(multiply(g, q));
    for (int c = 0; c < 7; ++c) {
      const Vec7 v = fq.col(c);
      const GroupPoint qp = point_from_coords(q.coords() + h * v);
      const GroupPoint qm = point_from_coords(q.coords() - h * v);
      const Vec7 pushed =
          (multiply(g, qp).coords() - multiply(g, qm).coords()) / (2.0 * h);
      worst = std::max(worst, (pushed - fgq.col(c)).cwiseAbs().maxCoeff());
    }
  }
  return make_result("frame_left_invariance",
                     "finite differences n=" + std::to_string(n), 1e-6 - worst);
}

CheckResult check_frames_at_origin() {
  const double diff =
      (frame_left(identity()) - frame_right(identity())).cwiseAbs().maxCoeff();
  return make_result("frames_agree_at_origin", "single point", 1e-15 - diff);
}

CheckResult check_right_frame_flow(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> su(-1.5, 1.5);
  double worst = 0.0;
  auto flow = [](const GroupPoint& q0, int field, double s, bool right) {
    // The frame fields are polynomial, so RK4 integrates them exactly up
    // to roundoff.
    const int steps = 64;
    const double h = s / steps;
    Vec7 c = q0.coords();
    auto rhs = [&](const Vec7& v) {
      const GroupPoint p = point_from_coords(v);
      return right ? Vec7(frame_right(p).col(field))
                   : Vec7(frame_left(p).col(field));
    };
    for (int i = 0; i < steps; ++i) {
      const Vec7 k1 = rhs(c);
      const Vec7 k2 = rhs(c + 0.5 * h * k1);
      const Vec7 k3 = rhs(c + 0.5 * h * k2);
      const Vec7 k4 = rhs(c + h * k3);
      c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return point_from_coords(c);
  };
  for (int i = 0; i < n; ++i) {
    const GroupPoint q = random_point(rng, 1.5);
    const double s = su(rng);
    const int field = int(rng() % 7);
    const GroupPoint exp_sv = point_from_coords(s * Vec7::Unit(field));
    // Right-invariant fields flow by left translation, and vice versa.
    const GroupPoint fr = flow(q, field, s, true);
    worst = std::max(
        worst, (fr.coords() - multiply(exp_sv, q).coords()).cwiseAbs().maxCoeff());
    const GroupPoint fl = flow(q, field, s, false);
    worst = std::max(
        worst, (fl.coords() - multiply(q, exp_sv).coords()).cwiseAbs().maxCoeff());
  }
  return make_result("frame_flows_are_translations",
                     "rk4 flows n=" + std::to_string(n), 1e-11 - worst);
}

CheckResult check_hamiltonian_conservation(std::uint64_t seed, int n_params,
                                           int n_times) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tu(0.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < n_params; ++i) {
    const ParamFamily fam = i % 5 == 3   ? ParamFamily::InCn
                            : i % 5 == 4 ? ParamFamily::Line
                                         : ParamFamily::Generic;
    const GeodesicParams p = draw_unit_level(rng, fam);
    CotangentState s;
    s.w = p.Kvec;
    for (int k = 0; k < n_times; ++k) {
      s.h = fiber_solution(tu(rng), p);
      worst = std::max(worst,
                       std::abs(hamiltonian(s) - 0.5 * p.level_lhs()));
    }
  }
  return make_result("hamiltonian_conservation",
                     std::to_string(n_params) + " params x " +
                         std::to_string(n_times) + " times",
                     1e-10 - worst);
}

CheckResult check_controls_identity(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tu(0.1, 8.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const GeodesicParams p =
        draw_unit_level(rng, i % 4 == 3 ? ParamFamily::Line : ParamFamily::Generic);
    const double t = tu(rng);
    const Vec7 fd =
        (geodesic_point(t + h, p).coords() - geodesic_point(t - h, p).coords()) /
        (2.0 * h);
    const GroupPoint q = geodesic_point(t, p);
    const Vec7 horiz =
        frame_left(q).leftCols<4>() * fiber_solution(t, p);
    worst = std::max(worst, (fd - horiz).cwiseAbs().maxCoeff());
  }
  return make_result("controls_identity",
                     "finite differences n=" + std::to_string(n), 1e-6 - worst);
}

CheckResult check_w_bit_constancy(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const GeodesicParams p = draw_unit_level(rng, ParamFamily::Generic);
  FullState s0;
  s0.lambda = p.initial_covector();
  const Trajectory traj = integrate_numeric(s0, 2.0, 1e-3);
  bool ok = true;
  for (const auto& st : traj.states)
    for (int i = 0; i < 3; ++i)
      ok = ok && st.lambda.w(i) == s0.lambda.w(i);
  return make_result("w_bitwise_constant", "2000 rk4 steps", ok ? 1.0 : -1.0);
}

CheckResult check_oracle_equivalence(std::uint64_t seed, int n, double T,
                                     double step, double tol) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ParamFamily fam = i % 5 == 3   ? ParamFamily::InCn
                            : i % 5 == 4 ? ParamFamily::Line
                                         : ParamFamily::Generic;
    const GeodesicParams p = draw_unit_level(rng, fam);
    FullState s0;
    s0.lambda = p.initial_covector();
    const Trajectory traj = integrate_numeric(s0, T, step);
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
      const double t = traj.t[k];
      const GroupPoint qc = geodesic_point(t, p);
      const Vec4 hc = fiber_solution(t, p);
      worst = std::max(worst, (traj.states[k].q.coords() - qc.coords())
                                  .cwiseAbs()
                                  .maxCoeff());
      worst = std::max(worst,
                       (traj.states[k].lambda.h - hc).cwiseAbs().maxCoeff());
    }
  }
  return make_result("oracle_equivalence",
                     std::to_string(n) + " params, t in [0," +
                         std::to_string(T) + "], step " + std::to_string(step),
                     tol - worst);
}

CheckResult check_equivariance(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tu(0.0, 6.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    GeodesicParams p = draw_unit_level(rng, ParamFamily::Generic);
    Mat3 R = random_rotation(rng);
    GeodesicParams p2;
    try {
      p2 = rotate_params(R, p);
    } catch (const std::domain_error&) {
      --i;  // chart degeneracy at K1 = 0; redraw
      continue;
    }
    for (int k = 0; k < 20; ++k) {
      const double t = tu(rng);
      const GroupPoint lhs = act(R, geodesic_point(t, p));
      const GroupPoint rhs = geodesic_point(t, p2);
      worst = std::max(worst,
                       (lhs.coords() - rhs.coords()).cwiseAbs().maxCoeff());
    }
  }
  return make_result("geodesic_equivariance",
                     std::to_string(n) + " rotations x 20 times", 1e-9 - worst);
}

CheckResult check_stabilizer_origin() {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    worst = std::max(
        worst, so3_field(Vec3::Unit(i), identity()).cwiseAbs().maxCoeff());
  return make_result("stabilizer_vanishes_at_origin", "3 generators",
                     1e-15 - worst);
}

CheckResult check_fixed_point_sets(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    Vec3 a(u(rng), u(rng), u(rng));
    if (a.norm() < 1e-3) continue;
    const GroupPoint q{u(rng), u(rng) * a, u(rng) * a};
    ok = ok && in_cn(q, 1e-9);
  }
  return make_result("fixed_point_sets_in_cn", "random axes n=" + std::to_string(n),
                     ok ? 1.0 : -1.0);
}

CheckResult check_cn_closure(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    Vec3 a(u(rng), u(rng), u(rng));
    if (a.norm() < 1e-3) continue;
    const GroupPoint p{u(rng), u(rng) * a, u(rng) * a};
    const GroupPoint q{u(rng), u(rng) * a, u(rng) * a};
    ok = ok && in_cn(multiply(p, q), 1e-9) && in_cn(inverse(p), 1e-9);
  }
  return make_result("cn_subgroup_closure", "same-axis pairs n=" + std::to_string(n),
                     ok ? 1.0 : -1.0);
}

CheckResult check_cn_action_invariance(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    Vec3 a(u(rng), u(rng), u(rng));
    if (a.norm() < 1e-3) continue;
    const GroupPoint q{u(rng), u(rng) * a, u(rng) * a};
    ok = ok && in_cn(act(random_rotation(rng), q), 1e-9);
  }
  return make_result("cn_invariant_under_action",
                     "random rotations n=" + std::to_string(n), ok ? 1.0 : -1.0);
}

CheckResult check_invariants_rotation(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const GroupPoint q = random_point(rng, 3.0);
    const Mat3 R = random_rotation(rng);
    const InvariantTuple a = invariants_of_point(q);
    const InvariantTuple b = invariants_of_point(act(R, q));
    worst = std::max({worst, rel_err(a.x, b.x), rel_err(a.ll, b.ll),
                      rel_err(a.ly, b.ly), rel_err(a.yy, b.yy)});
  }
  return make_result("invariants_rotation_invariant",
                     "random (R, q) n=" + std::to_string(n), 1e-12 - worst);
}

CheckResult check_representative_consistency(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tu(0.0, 8.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const GeodesicParams p = draw_unit_level(rng, ParamFamily::Generic);
    const CanonicalParams cp = canonicalize(p);
    // z1 and z2 are orthogonal by construction.
    const Vec3 z2 = p.z2();
    if (z2.norm() > 0.0)
      worst = std::max(worst,
                       std::abs(p.Kvec.dot(z2)) / (p.K() * z2.norm()));
    // The reduced curve, halved in the vertical block and rotated back,
    // is the geodesic itself.
    for (int k = 0; k < 12; ++k) {
      const double tau = tu(rng);
      const GroupPoint back =
          reduced_to_group(representative_point(tau, cp), cp.R);
      const GroupPoint geo = geodesic_point(tau / cp.K, p);
      worst = std::max(worst,
                       (back.coords() - geo.coords()).cwiseAbs().maxCoeff());
      const InvariantTuple via_curve = invariants_curve(tau, cp);
      const InvariantTuple via_point =
          invariants_of_point(representative_point(tau, cp));
      worst = std::max({worst, rel_err(via_curve.x, via_point.x),
                        rel_err(via_curve.ll, via_point.ll),
                        rel_err(via_curve.ly, via_point.ly),
                        rel_err(via_curve.yy, via_point.yy)});
    }
  }
  return make_result("representative_consistency",
                     std::to_string(n) + " params x 12 phases", 1e-9 - worst);
}

CheckResult check_discriminant_grid(double tau_max, int n) {
  double min_neg = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    const double tau = tau_max * double(i) / double(n);
    min_neg = std::min(min_neg, -discriminant(tau));
  }
  return make_result("discriminant_negative",
                     "tau in (0," + std::to_string(tau_max) + "] n=" +
                         std::to_string(n),
                     min_neg, /*strict=*/true);
}

CheckResult check_f_bounds_grid(double tau_max, int n) {
  const double local_end = std::sqrt(14.0);
  const double global_start = 0.5 * (1.0 + std::sqrt(33.0));
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    const double tau = tau_max * double(i) / double(n);
    const FBounds b = f_and_bounds(tau);
    margin = std::min(margin, b.f);
    if (tau < local_end) margin = std::min(margin, b.f - b.local_bound);
    if (tau > global_start) margin = std::min(margin, b.f - b.global_bound);
  }
  return make_result("f_positive_with_bounds",
                     "tau in (0," + std::to_string(tau_max) + "] n=" +
                         std::to_string(n),
                     margin, /*strict=*/true);
}

CheckResult check_offcn_det_nonzero(std::uint64_t seed, int n_geo,
                                    double tau_max, double step) {
  std::mt19937_64 rng(seed);
  double min_abs = std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::size_t>(tau_max / step);
  for (int g = 0; g < n_geo; ++g) {
    CanonicalParams cp;
    do {
      cp = canonicalize(draw_unit_level(rng, ParamFamily::Generic));
    } while (cp.c3bar < 1e-3);
    for (std::size_t i = 1; i <= n; ++i) {
      const double tau = double(i) * step;
      min_abs = std::min(min_abs, std::abs(collinearity_det(tau, cp)));
    }
  }
  return make_result("offcn_determinant_nonzero",
                     std::to_string(n_geo) + " geodesics x tau in (0," +
                         std::to_string(tau_max) + "] step " +
                         std::to_string(step),
                     min_abs, /*strict=*/true);
}

CheckResult check_det_cross(std::uint64_t seed, int n, const DetCoeffsFn& coeffs) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cu(-2.0, 2.0);
  std::uniform_real_distribution<double> c3u(0.1, 2.0);
  std::uniform_real_distribution<double> tu(0.05, 40.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c1 = cu(rng), c2 = cu(rng), c3 = c3u(rng), tau = tu(rng);
    const DetCoeffs d = coeffs(tau);
    const double qf = c3 * det_quadratic_form(d, c1, c2);
    const GroupPoint rep = reduced_curve_point(tau, c1, c2, c3);
    const double det = rep.ell(0) * rep.y(1) - rep.ell(1) * rep.y(0);
    worst = std::max(worst, rel_err(qf, det));
  }
  return make_result("determinant_cross_check",
                     "random params n=" + std::to_string(n), 1e-9 - worst);
}

CheckResult check_incn_rep_structure(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tu(0.0, 12.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const GeodesicParams p = draw_unit_level(rng, ParamFamily::InCn);
    const CanonicalParams cp = canonicalize(p);
    worst = std::max(worst, std::abs(cp.c3bar));
    for (int k = 0; k < 10; ++k) {
      const GroupPoint rep = representative_point(tu(rng), cp);
      worst = std::max({worst, std::abs(rep.ell(1)), std::abs(rep.ell(2)),
                        std::abs(rep.y(1)), std::abs(rep.y(2))});
    }
  }
  return make_result("incn_representative_planar",
                     std::to_string(n) + " params x 10 phases", 1e-12 - worst);
}

CheckResult check_maxwell_endpoint(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ku(0.5, 2.0);
  std::uniform_real_distribution<double> au(0.0, 2.0 * M_PI);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double K = ku(rng);
    const double r = 1.0 / K;
    const Vec3 kvec = K * random_rotation(rng).col(0);
    const double t_cut = 2.0 * M_PI * r;
    GroupPoint first_true;
    GroupPoint first_rep;
    for (int k = 0; k < 6; ++k) {
      const double th = au(rng);
      GeodesicParams p;
      p.C = Vec4(r * std::cos(th), r * std::sin(th), 0.0, 0.0);
      p.Kvec = kvec;
      const GroupPoint qt = geodesic_point(t_cut, p);
      const GroupPoint qr = reduced_curve_point(2.0 * M_PI, p.C(0), p.C(1), 0.0);
      if (k == 0) {
        first_true = qt;
        first_rep = qr;
        continue;
      }
      worst = std::max(worst, (qt.coords() - first_true.coords())
                                  .cwiseAbs()
                                  .maxCoeff());
      worst = std::max(worst, (qr.coords() - first_rep.coords())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
  }
  return make_result("maxwell_common_endpoint",
                     std::to_string(n) + " circles x 6 angles", 1e-9 - worst);
}

ExpParams draw_exp_below_critical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ru(0.4, 1.4);
  std::uniform_real_distribution<double> au(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> c3u(0.15, 1.2);
  std::uniform_real_distribution<double> fu(0.2, 0.92);
  for (;;) {
    const double r = ru(rng), phi = au(rng), c3 = c3u(rng);
    ExpParams p{r * std::cos(phi), r * std::sin(phi), c3, 0.0};
    const double tau_crit = first_critical_tau(p.c1, p.c2, p.c3bar);
    p.tau = fu(rng) * tau_crit;
    if (p.tau < 0.15) continue;
    return p;
  }
}

CheckResult check_exp_roundtrip(std::uint64_t seed, int n, double tol) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ExpParams p = draw_exp_below_critical(rng);
    const InvariantTuple target = exp_factored(p);
    const InvertResult inv = invert_exp(target, {}, 1e-11);
    const InvariantTuple back = exp_factored(inv.best);
    worst = std::max({worst, rel_err(back.x, target.x),
                      rel_err(back.ll, target.ll), rel_err(back.ly, target.ly),
                      rel_err(back.yy, target.yy)});
    const double pscale =
        std::max({1.0, std::abs(p.c1), std::abs(p.c2), p.c3bar, p.tau});
    const double perr =
        std::max({std::abs(inv.best.c1 - p.c1), std::abs(inv.best.c2 - p.c2),
                  std::abs(inv.best.c3bar - p.c3bar),
                  std::abs(inv.best.tau - p.tau)});
    worst = std::max(worst, perr / pscale * (tol / 1e-6));
  }
  return make_result("exp_map_roundtrip",
                     std::to_string(n) + " forward draws", tol - worst);
}

CheckResult check_length_consistency(std::uint64_t seed, int n, double step) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int done = 0;
  int guard = 0;
  while (done < n && guard < 8 * n) {
    ++guard;
    const ExpParams p = draw_exp_below_critical(rng);
    const Mat3 R = random_rotation(rng);
    const GroupPoint q = act(R, reduced_curve_point(p.tau, p.c1, p.c2, p.c3bar));
    GeodesicAnswer ans;
    try {
      ans = connect(q);
    } catch (const SolveError&) {
      continue;
    }
    CanonicalParams cp;
    cp.C1 = ans.params.c1;
    cp.C2 = ans.params.c2;
    cp.c3bar = ans.params.c3bar;
    cp.K = ans.params.level_K();
    cp.R = ans.R;
    GeodesicParams full;
    try {
      full = params_from_canonical(cp);
    } catch (const std::domain_error&) {
      continue;
    }
    FullState s0;
    s0.lambda = full.initial_covector();
    const Trajectory traj = integrate_numeric(s0, ans.length, step);
    double arc = 0.0;
    for (std::size_t k = 1; k < traj.t.size(); ++k)
      arc += 0.5 * (traj.states[k - 1].lambda.h.norm() +
                    traj.states[k].lambda.h.norm()) *
             (traj.t[k] - traj.t[k - 1]);
    worst = std::max(worst, std::abs(arc - ans.length));
    ++done;
  }
  return make_result("length_equals_arclength",
                     std::to_string(done) + " answers, rk4 quadrature",
                     1e-7 - worst);
}

CheckResult check_connect_equivariance(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ExpParams p = draw_exp_below_critical(rng);
    const GroupPoint q =
        reduced_curve_point(p.tau, p.c1, p.c2, p.c3bar);
    const Mat3 R = random_rotation(rng);
    const GeodesicAnswer a1 = connect(q);
    const GeodesicAnswer a2 = connect(act(R, q));
    worst = std::max({worst, std::abs(a1.params.c1 - a2.params.c1),
                      std::abs(a1.params.c2 - a2.params.c2),
                      std::abs(a1.params.c3bar - a2.params.c3bar),
                      std::abs(a1.params.tau - a2.params.tau)});
    worst = std::max(worst, (a2.R - R * a1.R).cwiseAbs().maxCoeff() * 1e-2);
  }
  return make_result("connect_equivariance",
                     std::to_string(n) + " random (R, q)", 1e-9 - worst);
}

CheckResult check_jacobian_fd(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cu(-1.5, 1.5);
  std::uniform_real_distribution<double> c3u(0.1, 1.5);
  std::uniform_real_distribution<double> tu(0.2, 6.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ExpParams p{cu(rng), cu(rng), c3u(rng), tu(rng)};
    const Mat4 J = exp_jacobian(p);
    Mat4 Jfd;
    Vec4 v(p.c1, p.c2, p.c3bar, p.tau);
    for (int c = 0; c < 4; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(v(c)));
      Vec4 vp = v, vm = v;
      vp(c) += h;
      vm(c) -= h;
      const InvariantTuple ip =
          invariants_curve(vp(3), vp(0), vp(1), vp(2));
      const InvariantTuple im =
          invariants_curve(vm(3), vm(0), vm(1), vm(2));
      Jfd(0, c) = (ip.x - im.x) / (2.0 * h);
      Jfd(1, c) = (ip.ll - im.ll) / (2.0 * h);
      Jfd(2, c) = (ip.ly - im.ly) / (2.0 * h);
      Jfd(3, c) = (ip.yy - im.yy) / (2.0 * h);
    }
    const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
    worst = std::max(worst, (J - Jfd).cwiseAbs().maxCoeff() / scale);
  }
  return make_result("jacobian_finite_difference",
                     std::to_string(n) + " random points", 1e-6 - worst);
}

HeisenbergPoint heisenberg_rk4_endpoint(double h0, double h1, double w,
                                        double T, double step) {
  // State (x, l, y, h0, h1).
  Eigen::Matrix<double, 5, 1> s;
  s << 0.0, 0.0, 0.0, h0, h1;
  auto rhs = [w](const Eigen::Matrix<double, 5, 1>& v) {
    Eigen::Matrix<double, 5, 1> d;
    d << v(3), v(4), 0.5 * (v(0) * v(4) - v(3) * v(1)), -w * v(4), w * v(3);
    return d;
  };
  const auto n = static_cast<std::size_t>(std::ceil(T / step));
  const double h = T / double(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k1 = rhs(s);
    const auto k2 = rhs(s + 0.5 * h * k1);
    const auto k3 = rhs(s + 0.5 * h * k2);
    const auto k4 = rhs(s + h * k3);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return HeisenbergPoint{s(0), s(1), s(2)};
}

CheckResult check_heisenberg_reduction(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < n; ++i) {
    const GeodesicParams p = draw_unit_level(rng, ParamFamily::InCn);
    const double K = p.K();
    // Horizontality of the projected curve for the planar frame
    // (d/dx - l/2 d/dy, d/dl + x/2 d/dy), checked away from |l| kinks.
    for (int k = 1; k <= 16; ++k) {
      const double t = 0.9 * M_PI / K * double(k) / 16.0;
      const double B = p.C(0) * std::sin(K * t) +
                       p.C(1) * detail::one_minus_cos(K * t);
      if (std::abs(B) < 0.1 * p.C.head<2>().norm()) continue;
      const HeisenbergPoint hp = heisenberg_project(geodesic_point(t, p));
      const HeisenbergPoint hp_p = heisenberg_project(geodesic_point(t + h, p));
      const HeisenbergPoint hp_m = heisenberg_project(geodesic_point(t - h, p));
      const double xdot = (hp_p.x - hp_m.x) / (2.0 * h);
      const double ldot = (hp_p.l - hp_m.l) / (2.0 * h);
      const double ydot = (hp_p.y - hp_m.y) / (2.0 * h);
      worst = std::max(worst,
                       std::abs(ydot - 0.5 * (hp.x * ldot - xdot * hp.l)));
    }
    // Independent planar integration reproduces the projected endpoint.
    const HeisenbergPoint end = heisenberg_project(geodesic_point(1.0, p));
    const HeisenbergPoint rk = heisenberg_rk4_endpoint(
        K * p.C(1), K * p.C(0), K, 1.0, 1e-3 / std::max(1.0, K));
    worst = std::max({worst, std::abs(end.x - rk.x),
                      std::abs(end.l - std::abs(rk.l)),
                      std::abs(std::abs(end.y) - std::abs(rk.y))});
  }
  return make_result("heisenberg_reduction",
                     std::to_string(n) + " incn geodesics", 1e-6 - worst);
}

std::vector<CheckResult> run_verify(const Config& cfg) {
  std::vector<CheckResult> out;
  const std::uint64_t s = cfg.seed;
  out.push_back(check_group_associativity(s + 1, 200));
  out.push_back(check_bracket_axioms());
  out.push_back(check_frame_left_invariance(s + 2, 25));
  out.push_back(check_frames_at_origin());
  out.push_back(check_right_frame_flow(s + 3, 40));
  out.push_back(check_hamiltonian_conservation(s + 4, 100, 100));
  out.push_back(check_controls_identity(s + 5, 60));
  out.push_back(check_w_bit_constancy(s + 6));
  out.push_back(
      check_oracle_equivalence(s + 7, 100, 10.0, cfg.rk4_step, cfg.tol_oracle));
  out.push_back(check_equivariance(s + 8, 40));
  out.push_back(check_stabilizer_origin());
  out.push_back(check_fixed_point_sets(s + 9, 200));
  out.push_back(check_cn_closure(s + 10, 200));
  out.push_back(check_cn_action_invariance(s + 11, 200));
  out.push_back(check_invariants_rotation(s + 12, 200));
  out.push_back(check_representative_consistency(s + 13, 60));
  out.push_back(check_discriminant_grid(100.0, 100000));
  out.push_back(check_f_bounds_grid(100.0, 100000));
  out.push_back(
      check_offcn_det_nonzero(s + 14, 100, cfg.grid_tau_max, cfg.grid_step));
  out.push_back(check_det_cross(s + 15, 300));
  out.push_back(check_incn_rep_structure(s + 16, 50));
  out.push_back(check_maxwell_endpoint(s + 17, 30));
  out.push_back(check_exp_roundtrip(s + 18, 200, 1e-9));
  out.push_back(check_length_consistency(s + 19, 25, cfg.rk4_step));
  out.push_back(check_connect_equivariance(s + 20, 25));
  out.push_back(check_jacobian_fd(s + 21, 100));
  out.push_back(check_heisenberg_reduction(s + 22, 40));
  return out;
}

nlohmann::json verify_report(const std::vector<CheckResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results)
    arr.push_back({{"check", r.check},
                   {"grid", r.grid},
                   {"min_value", r.min_value},
                   {"pass", r.pass}});
  return arr;
}

}  // namespace carnot47
