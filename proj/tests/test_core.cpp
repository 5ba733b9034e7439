#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gapstress/core.hpp"

using namespace gapstress;
using Catch::Approx;

TEST_CASE("lame params enforce ellipticity") {
  CHECK_NOTHROW(LameParams(1.0, 1.0, 2));
  CHECK_NOTHROW(LameParams(-0.5, 1.0, 2));  // 2*(-0.5)+2 = 1 > 0
  CHECK_THROWS(LameParams(1.0, 0.0, 2));
  CHECK_THROWS(LameParams(-2.0, 1.0, 2));   // 2*(-2)+2 < 0
  CHECK_THROWS(LameParams(1.0, 1.0, 4));
}

TEST_CASE("rigid basis layout") {
  auto b2 = rigid_basis(2);
  REQUIRE(b2.size() == 3);
  Eigen::Vector2d x(0.3, -0.7);
  CHECK(b2[0].value(x).isApprox(Eigen::Vector2d(1, 0)));
  CHECK(b2[1].value(x).isApprox(Eigen::Vector2d(0, 1)));
  CHECK(b2[2].value(x).isApprox(Eigen::Vector2d(0.7, 0.3)));  // (-x2, x1)

  auto b3 = rigid_basis(3);
  REQUIRE(b3.size() == 6);
  Eigen::Vector3d y(1.0, 2.0, 3.0);
  CHECK(b3[3].value(y).isApprox(Eigen::Vector3d(-2, 1, 0)));   // x1 e2 - x2 e1
  CHECK(b3[4].value(y).isApprox(Eigen::Vector3d(-3, 0, 1)));   // x1 e3 - x3 e1
  CHECK(b3[5].value(y).isApprox(Eigen::Vector3d(0, -3, 2)));   // x2 e3 - x3 e2

  CHECK_THROWS(rigid_basis(4));
}

TEST_CASE("rigid motions have zero strain") {
  for (int d : {2, 3}) {
    for (const auto& psi : rigid_basis(d)) {
      Eigen::MatrixXd g = psi.gradient();
      CHECK((g + g.transpose()).norm() == Approx(0.0).margin(1e-15));
    }
  }
}

TEST_CASE("energy density hand values") {
  LameParams p(1.0, 1.0, 2);
  Matrix2d g = Matrix2d::Zero();
  g(0, 1) = 1.0;  // d_{x2} u^1 = 1
  CHECK(energy_density(p, g, g) == Approx(p.mu));

  Matrix2d h = Matrix2d::Zero();
  h(1, 1) = 1.0;  // d_{x2} u^2 = 1
  CHECK(energy_density(p, h, h) == Approx(3.0));

  // rigid gradient pairs give zero against anything
  LameParams p3(1.3, 0.7, 3);
  auto b3 = rigid_basis(3);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& psi : b3) {
    Matrix3d r = psi.gradient();
    Matrix3d any;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) any(i, j) = u(rng);
    CHECK(energy_density(p3, r, any) == Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("energy density is a symmetric positive-semidefinite bilinear form") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  LameParams p(2.0, 0.5, 2);
  for (int rep = 0; rep < 200; ++rep) {
    Matrix2d a, b, c;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        a(i, j) = u(rng);
        b(i, j) = u(rng);
        c(i, j) = u(rng);
      }
    const double s = u(rng), t = u(rng);
    CHECK(energy_density(p, a, b) == Approx(energy_density(p, b, a)).margin(1e-13));
    CHECK(energy_density(p, Matrix2d(s * a + t * b), c) ==
          Approx(s * energy_density(p, a, c) + t * energy_density(p, b, c)).margin(1e-12));
    CHECK(energy_density(p, a, a) >= -1e-14);
    // equality iff symmetric part vanishes
    Matrix2d skew;
    skew << 0.0, -u(rng), 0.0, 0.0;
    skew(1, 0) = -skew(0, 1);
    CHECK(energy_density(p, skew, skew) == Approx(0.0).margin(1e-14));
  }
}

TEST_CASE("strain trace equals divergence") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = u(rng);
  CHECK(strain(g).trace() == Approx(g.trace()));
}

TEST_CASE("traction examples") {
  LameParams p(1.0, 1.0, 2);
  SECTION("rigid motion gives zero traction") {
    for (const auto& psi : rigid_basis(2)) {
      Matrix2d g = psi.gradient();
      Vector2d n(0.6, 0.8);
      CHECK(traction(p, g, n).norm() == Approx(0.0).margin(1e-14));
    }
  }
  SECTION("identity gradient, vertical normal") {
    Matrix2d g = Matrix2d::Identity();
    Vector2d t = traction(p, g, Vector2d(0, 1));
    CHECK(t.x() == Approx(0.0).margin(1e-15));
    CHECK(t.y() == Approx(4.0));  // 2 lambda + 2 mu
  }
  SECTION("linearity") {
    Matrix2d g;
    g << 0.3, -1.2, 0.8, 2.0;
    Vector2d n(1, 0);
    CHECK(traction(p, Matrix2d(3.5 * g), n).isApprox(3.5 * traction(p, g, n), 1e-13));
  }
  SECTION("non-unit normal rejected") {
    Matrix2d g = Matrix2d::Identity();
    CHECK_THROWS(traction(p, g, Vector2d(0, 1.001)));
  }
}
