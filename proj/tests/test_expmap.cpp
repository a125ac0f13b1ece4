#include <doctest.h>

#include <cmath>

#include "carnot47/expmap.hpp"
#include "carnot47/verify.hpp"

using namespace carnot47;

TEST_CASE("factorized exponential map") {
  SUBCASE("origin at tau = 0") {
    const InvariantTuple v = exp_factored(ExpParams{0.7, -0.2, 0.9, 0.0});
    CHECK(v.x == 0.0);
    CHECK(v.ll == 0.0);
    CHECK(v.ly == 0.0);
    CHECK(v.yy == 0.0);
  }
  SUBCASE("pinned value") {
    const InvariantTuple v = exp_factored(ExpParams{1.0, 0.0, 0.0, M_PI});
    CHECK(v.x == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(v.ll == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(v.yy == doctest::Approx(M_PI * M_PI).epsilon(1e-14));
  }
  SUBCASE("even in c3bar") {
    const InvariantTuple a = exp_factored(ExpParams{0.5, 0.3, 0.8, 2.1});
    const InvariantTuple b = exp_factored(ExpParams{0.5, 0.3, -0.8, 2.1});
    CHECK(a.x == b.x);
    CHECK(a.ll == b.ll);
    CHECK(a.ly == b.ly);
    CHECK(a.yy == b.yy);
  }
  SUBCASE("reduced-chart scaling against the geodesic invariants") {
    // The reduced chart doubles the vertical block, so against the actual
    // geodesic endpoint the cross invariant doubles and the vertical norm
    // quadruples.
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const GeodesicParams p = draw_unit_level(rng, ParamFamily::Generic);
      const CanonicalParams cp = canonicalize(p);
      const double t = 0.4 + 0.2 * double(i);
      const InvariantTuple red =
          exp_factored(ExpParams{cp.C1, cp.C2, cp.c3bar, cp.K * t});
      const InvariantTuple geo = invariants_of_point(geodesic_point(t, p));
      CHECK(red.x == doctest::Approx(geo.x).epsilon(1e-9));
      CHECK(red.ll == doctest::Approx(geo.ll).epsilon(1e-9));
      CHECK(red.ly == doctest::Approx(2.0 * geo.ly).epsilon(1e-9));
      CHECK(red.yy == doctest::Approx(4.0 * geo.yy).epsilon(1e-9));
    }
  }
}

TEST_CASE("exp jacobian") {
  SUBCASE("matches finite differences") {
    CHECK(check_jacobian_fd(29, 40).pass);
  }
  SUBCASE("singular at tau = 0 and on the planar stratum") {
    CHECK(std::abs(exp_jacobian(ExpParams{0.6, 0.2, 0.7, 0.0}).determinant()) <
          1e-20);
    CHECK(std::abs(exp_jacobian(ExpParams{0.6, 0.2, 0.0, 2.0}).determinant()) <
          1e-20);
  }
  SUBCASE("first critical phase is bracketed by a sign change") {
    const double c1 = 0.8, c2 = 0.3, c3 = 0.6;
    const double tc = first_critical_tau(c1, c2, c3);
    CHECK(tc > 0.5);
    CHECK(tc < 9.0);
    const double before =
        exp_jacobian(ExpParams{c1, c2, c3, tc - 1e-3}).determinant();
    const double after =
        exp_jacobian(ExpParams{c1, c2, c3, tc + 1e-3}).determinant();
    CHECK(before * after < 0.0);
  }
}

TEST_CASE("invert_exp") {
  SUBCASE("round trip") { CHECK(check_exp_roundtrip(31, 40, 1e-9).pass); }
  SUBCASE("canonical sign of c3bar") {
    std::mt19937_64 rng(37);
    const ExpParams p = draw_exp_below_critical(rng);
    const InvertResult inv = invert_exp(exp_factored(p));
    CHECK(inv.best.c3bar >= 0.0);
  }
  SUBCASE("collinear target rejected toward the planar branch") {
    CHECK_THROWS_AS(invert_exp(InvariantTuple{-2.0, 0.0, 0.0, M_PI * M_PI}),
                    CollinearTarget);
  }
  SUBCASE("cauchy-schwarz violation rejected") {
    CHECK_THROWS_AS(invert_exp(InvariantTuple{0.0, 1.0, 5.0, 1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("recover_rotation") {
  const GroupPoint qbar{0.5, Vec3(1.0, 0.2, 0.0), Vec3(-0.3, 1.1, 0.4)};
  SUBCASE("identity for equal points") {
    const Mat3 R = recover_rotation(qbar, qbar);
    CHECK((R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("recovers a synthetic rotation") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 25; ++i) {
      const Mat3 R0 = random_rotation(rng);
      const Mat3 R = recover_rotation(act(R0, qbar), qbar);
      CHECK((R - R0).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("collinear frame rejected") {
    const GroupPoint col{0.5, Vec3(1, 0, 0), Vec3(2, 0, 0)};
    CHECK_THROWS_AS(recover_rotation(col, col), CollinearFrame);
  }
  SUBCASE("mismatched invariants rejected") {
    GroupPoint other = qbar;
    other.x += 1.0;
    CHECK_THROWS_AS(recover_rotation(other, qbar), std::invalid_argument);
  }
}

TEST_CASE("connect") {
  SUBCASE("straight line to a horizontal point") {
    const GeodesicAnswer a = connect(GroupPoint{3.0, Vec3::Zero(), Vec3::Zero()});
    CHECK(a.branch == Branch::Line);
    CHECK(a.length == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(a.residual < 1e-12);
    const GeodesicAnswer b =
        connect(GroupPoint{1.0, Vec3(2.0, 0.0, 2.0), Vec3::Zero()});
    CHECK(b.branch == Branch::Line);
    CHECK(b.length == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(b.residual < 1e-12);
  }
  SUBCASE("vertical maxwell endpoint") {
    const GeodesicAnswer a =
        connect(GroupPoint{0.0, Vec3::Zero(), Vec3(2.0 * M_PI, 0, 0)});
    CHECK(a.branch == Branch::InCn);
    CHECK(a.maxwell);
    CHECK(a.length == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    CHECK(a.K == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.residual < 1e-9);
  }
  SUBCASE("planar branch round trip") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> tu(0.5, 5.5);
    std::uniform_real_distribution<double> au(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> ru(0.4, 1.5);
    for (int i = 0; i < 12; ++i) {
      const double r = ru(rng), phi = au(rng), tau = tu(rng);
      const double c1 = r * std::cos(phi), c2 = r * std::sin(phi);
      const Mat3 R0 = random_rotation(rng);
      const GroupPoint q = act(R0, reduced_curve_point(tau, c1, c2, 0.0));
      if (q.ell.norm() < 1e-3 || q.y.norm() < 1e-6) continue;
      const GeodesicAnswer a = connect(q);
      CHECK(a.branch == Branch::InCn);
      CHECK(a.residual < 1e-7);
      CHECK(a.length == doctest::Approx(tau * r).epsilon(1e-7));
      CHECK(a.length <= 2.0 * M_PI * std::hypot(a.params.c1, a.params.c2) +
                            1e-9);
    }
  }
  SUBCASE("negative vertical part") {
    const GroupPoint q{0.3, Vec3(0.0, 0.9, 0.0), Vec3(0.0, -1.2, 0.0)};
    const GeodesicAnswer a = connect(q);
    CHECK(a.branch == Branch::InCn);
    CHECK(a.residual < 1e-7);
  }
  SUBCASE("generic round trip") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 15; ++i) {
      const ExpParams p = draw_exp_below_critical(rng);
      const Mat3 R0 = random_rotation(rng);
      const GroupPoint q =
          act(R0, reduced_curve_point(p.tau, p.c1, p.c2, p.c3bar));
      const GeodesicAnswer a = connect(q);
      CHECK(a.branch == Branch::OffCn);
      CHECK(a.residual < 1e-7);
      CHECK(a.length == doctest::Approx(p.length()).epsilon(1e-7));
    }
  }
  SUBCASE("origin rejected") {
    CHECK_THROWS_AS(connect(identity()), std::invalid_argument);
  }
  SUBCASE("equivariant answers") {
    CHECK(check_connect_equivariance(53, 8).pass);
  }
  SUBCASE("length matches the arclength quadrature") {
    CHECK(check_length_consistency(59, 8, 1e-3).pass);
  }
}

TEST_CASE("sphere sampling") {
  SUBCASE("level residual by construction") {
    const auto samples = sphere_sample(100, {7, ParamFamily::Generic});
    for (const auto& s : samples)
      CHECK(std::abs(s.params.level_residual()) <= 1e-10);
  }
  SUBCASE("deterministic for a fixed seed") {
    const auto a = sphere_sample(50, {99, ParamFamily::Generic});
    const auto b = sphere_sample(50, {99, ParamFamily::Generic});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK((a[i].point.coords() - b[i].point.coords()).cwiseAbs().maxCoeff() ==
            0.0);
  }
  SUBCASE("line family lands on the unit sphere with y = 0") {
    const auto samples = sphere_sample(60, {11, ParamFamily::Line});
    for (const auto& s : samples) {
      CHECK(s.point.y.cwiseAbs().maxCoeff() == 0.0);
      const double r =
          std::sqrt(s.point.x * s.point.x + s.point.ell.squaredNorm());
      CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("planar family stays in C_n") {
    const auto samples = sphere_sample(60, {13, ParamFamily::InCn});
    for (const auto& s : samples) CHECK(in_cn(s.point, 1e-9));
  }
  SUBCASE("bad count rejected") {
    CHECK_THROWS_AS(sphere_sample(0, {}), std::invalid_argument);
  }
}
