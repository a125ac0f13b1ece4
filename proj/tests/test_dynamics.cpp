#include <doctest.h>

#include <cmath>
#include <sstream>

#include "carnot47/dynamics.hpp"
#include "carnot47/io.hpp"
#include "carnot47/verify.hpp"

using namespace carnot47;

TEST_CASE("hamiltonian") {
  CotangentState s;
  s.h = Vec4(1, 0, 0, 0);
  s.w = Vec3(3, -1, 2);
  CHECK(hamiltonian(s) == 0.5);
  s.h = Vec4(1, 1, 1, 1);
  CHECK(hamiltonian(s) == 2.0);
}

TEST_CASE("ode_rhs") {
  FullState s;
  SUBCASE("zero covector freezes everything") {
    s.q = GroupPoint{1.0, Vec3(2, 3, 4), Vec3(5, 6, 7)};
    s.lambda.w = Vec3(1, 2, 3);
    const FullState d = ode_rhs(s);
    CHECK(d.q.coords().cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.lambda.h.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.lambda.w.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("fiber rotation against the hand-computed matrix product") {
    s.lambda.w = Vec3(1, 0, 0);
    s.lambda.h = Vec4(1, 0, 0, 0);
    const FullState d = ode_rhs(s);
    CHECK((d.lambda.h - Vec4(0, 1, 0, 0)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("y velocity vanishes at the origin") {
    s.lambda.h = Vec4(0.4, -0.2, 0.9, 0.1);
    const FullState d = ode_rhs(s);
    CHECK(d.q.y.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.q.x == 0.4);
  }
}

TEST_CASE("integrate_numeric basics") {
  FullState s0;
  SUBCASE("constant trajectory for h = 0") {
    s0.q = GroupPoint{0.5, Vec3(1, 2, 3), Vec3(0, 0, 1)};
    s0.lambda.w = Vec3(0.3, 0.1, -0.2);
    const Trajectory traj = integrate_numeric(s0, 1.0, 1e-2);
    for (const auto& st : traj.states) {
      CHECK(approx_equal(st.q, s0.q, 0.0));
      CHECK(st.lambda.h.cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("w stays bit-identical") { CHECK(check_w_bit_constancy(5).pass); }
  SUBCASE("rejects bad input") {
    CHECK_THROWS_AS(integrate_numeric(s0, -1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_numeric(s0, 1.0, 0.0), std::invalid_argument);
    s0.q.x = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(integrate_numeric(s0, 1.0, 1e-3), std::invalid_argument);
  }
}

TEST_CASE("rk4 order of convergence") {
  std::mt19937_64 rng(23);
  const GeodesicParams p = draw_unit_level(rng, ParamFamily::Generic);
  FullState s0;
  s0.lambda = p.initial_covector();
  auto max_err = [&](double step) {
    const Trajectory traj = integrate_numeric(s0, 5.0, step);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.t.size(); ++k)
      worst = std::max(worst, (traj.states[k].q.coords() -
                               geodesic_point(traj.t[k], p).coords())
                                  .cwiseAbs()
                                  .maxCoeff());
    return worst;
  };
  const double e1 = max_err(4e-2);
  const double e2 = max_err(2e-2);
  CHECK(e1 > 1e-13);  // above the roundoff floor, so the ratio is meaningful
  const double ratio = e1 / e2;
  CHECK(ratio > 10.0);
  CHECK(ratio < 26.0);
}

TEST_CASE("fiber_solution") {
  GeodesicParams p;
  p.C = Vec4(0.3, -0.5, 0.2, 0.7);
  p.Kvec = Vec3(0.8, -0.4, 1.1);
  const double K = p.K();

  SUBCASE("initial value") {
    const Vec4 h0 = fiber_solution(0.0, p);
    CHECK(h0(0) == doctest::Approx(K * p.C(1)).epsilon(1e-14));
    const Vec3 expected = p.C(0) * p.Kvec + p.z2();
    CHECK((h0.tail<3>() - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("periodicity") {
    for (double t : {0.0, 0.7, 2.9}) {
      const Vec4 a = fiber_solution(t, p);
      const Vec4 b = fiber_solution(t + 2.0 * M_PI / K, p);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("constant solution when Kvec = 0") {
    p.Kvec.setZero();
    const Vec4 h = fiber_solution(3.7, p);
    CHECK((h - p.C).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("geodesic_point") {
  SUBCASE("line branch") {
    GeodesicParams p;
    p.C = Vec4(1, 0, 0, 0);
    const GroupPoint q = geodesic_point(3.0, p);
    CHECK(q.x == 3.0);
    CHECK(q.ell.cwiseAbs().maxCoeff() == 0.0);
    CHECK(q.y.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("starts at the origin") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
      const GeodesicParams p = draw_unit_level(rng, ParamFamily::Generic);
      CHECK(approx_equal(geodesic_point(0.0, p), identity(), 1e-15));
    }
  }
  SUBCASE("constant-control family evaluates to a line in l") {
    GeodesicParams p;
    p.C = Vec4(0, 0, 0.5, -0.3);
    p.Kvec = Vec3(1.2, 0.1, -0.4);
    const GroupPoint q = geodesic_point(2.0, p);
    CHECK(std::abs(q.x) < 1e-15);
    CHECK((q.ell - 2.0 * p.z2()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(q.y.cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("closed forms against the rk4 oracle") {
  CHECK(check_oracle_equivalence(41, 12, 10.0, 1e-3, 1e-8).pass);
}

TEST_CASE("hamiltonian conservation along closed forms") {
  CHECK(check_hamiltonian_conservation(43, 40, 100).pass);
}

TEST_CASE("controls identity") {
  CHECK(check_controls_identity(47, 30).pass);
}

TEST_CASE("level set") {
  GeodesicParams p;
  SUBCASE("pinned residuals") {
    p.C = Vec4(1, 0, 0, 0);
    p.Kvec = Vec3(1, 0, 0);
    CHECK(p.level_residual() == doctest::Approx(0.0).epsilon(1e-15));

    p.C = Vec4(0, 0, 1, 0);
    p.Kvec = Vec3(0, 0, 1);
    CHECK(p.level_residual() == doctest::Approx(0.0).epsilon(1e-15));

    p.C = Vec4(0.5, 0.5, 0.5, 0.5);
    p.Kvec = Vec3::Zero();
    CHECK(p.level_residual() == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("normalization rescales C only") {
    p.C = Vec4(2, -1, 3, 0.5);
    p.Kvec = Vec3(0.3, 1.4, -0.2);
    const GeodesicParams n = p.normalized();
    CHECK(n.level_residual() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((n.Kvec - p.Kvec).cwiseAbs().maxCoeff() == 0.0);
    const double s = p.C(0) / n.C(0);
    for (int i = 1; i < 4; ++i)
      CHECK(p.C(i) / n.C(i) == doctest::Approx(s).epsilon(1e-12));
  }
  SUBCASE("all-zero rejected") {
    CHECK_THROWS_AS(GeodesicParams{}.normalized(), std::invalid_argument);
  }
}

TEST_CASE("trajectory csv format") {
  GeodesicParams p;
  p.C = Vec4(1, 0, 0, 0);
  p.Kvec = Vec3(1, 0, 0);
  FullState s0;
  s0.lambda = p.initial_covector();
  const Trajectory traj = integrate_numeric(s0, 0.1, 0.05);
  std::ostringstream os;
  write_trajectory_csv(os, traj, {"# sample"});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# sample");
  std::getline(is, line);
  CHECK(line == "t,x,l1,l2,l3,y1,y2,y3,h0,h1,h2,h3,w1,w2,w3");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}
