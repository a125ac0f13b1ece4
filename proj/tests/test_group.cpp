#include <doctest.h>

#include "carnot47/group.hpp"
#include "carnot47/verify.hpp"

using namespace carnot47;

TEST_CASE("identity and inverse") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    GroupPoint g;
    g.x = u(rng);
    for (int k = 0; k < 3; ++k) {
      g.ell(k) = u(rng);
      g.y(k) = u(rng);
    }
    CHECK(approx_equal(multiply(identity(), g), g, 0.0));
    CHECK(approx_equal(multiply(g, identity()), g, 0.0));
    CHECK(approx_equal(multiply(g, inverse(g)), identity(), 1e-15));
    CHECK(approx_equal(inverse(inverse(g)), g, 0.0));
  }
  CHECK(approx_equal(inverse(identity()), identity(), 0.0));

  const GroupPoint a{1.0, Vec3(1, 0, 0), Vec3::Zero()};
  const GroupPoint ainv = inverse(a);
  CHECK(ainv.x == -1.0);
  CHECK(ainv.ell == Vec3(-1, 0, 0));
  CHECK(ainv.y == Vec3::Zero());
}

TEST_CASE("group law half-commutator term") {
  // (1,(1,0,0),0) * (1,0,0) = (2,(1,0,0),(-1/2,0,0))
  const GroupPoint a{1.0, Vec3(1, 0, 0), Vec3::Zero()};
  const GroupPoint b{1.0, Vec3::Zero(), Vec3::Zero()};
  const GroupPoint ab = multiply(a, b);
  CHECK(ab.x == 2.0);
  CHECK(ab.ell == Vec3(1, 0, 0));
  CHECK(ab.y == Vec3(-0.5, 0, 0));
}

TEST_CASE("associativity") {
  CHECK(check_group_associativity(7, 300).pass);
}

TEST_CASE("left frame fields") {
  const Frame f0 = frame_left(identity());
  CHECK((f0.col(0) - Vec7::Unit(0)).cwiseAbs().maxCoeff() == 0.0);

  GroupPoint q;
  q.x = 2.0;
  q.ell = Vec3(0.3, -0.7, 1.1);
  const Frame f = frame_left(q);
  // N1 = d/dl1 + (x/2) d/dy1 at x = 2
  Vec7 n1 = Vec7::Zero();
  n1(1) = 1.0;
  n1(4) = 1.0;
  CHECK((f.col(1) - n1).cwiseAbs().maxCoeff() == 0.0);
  // N0 picks up -l/2 on the y block
  CHECK(f(4, 0) == -0.15);
  CHECK(f(5, 0) == 0.35);
  CHECK(f(6, 0) == -0.55);
  // N0i = d/dyi everywhere
  for (int i = 0; i < 3; ++i)
    CHECK((f.col(4 + i) - Vec7::Unit(4 + i)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("right frame fields") {
  CHECK(check_frames_at_origin().pass);
  GroupPoint q;
  q.x = 2.0;
  const Frame f = frame_right(q);
  Vec7 n1 = Vec7::Zero();
  n1(1) = 1.0;
  n1(4) = -1.0;  // sign opposite to the left frame
  CHECK((f.col(1) - n1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("frame flows are group translations") {
  CHECK(check_right_frame_flow(13, 40).pass);
}

TEST_CASE("left invariance of the left frame") {
  CHECK(check_frame_left_invariance(17, 20).pass);
}

TEST_CASE("bracket table") {
  // [N0, Ni] = N0i
  for (int i = 1; i <= 3; ++i) {
    const Vec7 b = lie_bracket(Vec7::Unit(0), Vec7::Unit(i));
    CHECK((b - Vec7::Unit(i + 3)).cwiseAbs().maxCoeff() == 0.0);
  }
  // first-layer fields commute among themselves
  CHECK(lie_bracket(Vec7::Unit(1), Vec7::Unit(2)).cwiseAbs().maxCoeff() == 0.0);
  // the center kills everything
  for (int j = 0; j < 7; ++j)
    for (int c = 4; c < 7; ++c) {
      CHECK(lie_bracket(Vec7::Unit(c), Vec7::Unit(j)).cwiseAbs().maxCoeff() ==
            0.0);
    }
  // 2-step nilpotency: brackets of brackets vanish
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    Vec7 a, b, c;
    for (int k = 0; k < 7; ++k) {
      a(k) = u(rng);
      b(k) = u(rng);
      c(k) = u(rng);
    }
    CHECK(lie_bracket(lie_bracket(a, b), c).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("bracket axioms exhaustive") {
  CHECK(check_bracket_axioms().pass);
}

TEST_CASE("tangent vector coordinates") {
  GroupPoint q;
  q.x = 4.0;
  TangentVector v;
  v.frame_coeffs = Vec7::Unit(2);  // N2
  const Vec7 coords = v.coordinates_at(q);
  CHECK(coords(2) == 1.0);
  CHECK(coords(5) == 2.0);  // (x/2) d/dy2
}
