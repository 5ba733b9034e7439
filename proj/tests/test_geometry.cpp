#include <catch2/catch_amalgamated.hpp>

#include "gapstress/geometry.hpp"

using namespace gapstress;
using Catch::Approx;

TEST_CASE("model surface charts") {
  InclusionPairGeometry g(2, 2, 1.0, 0.01, 0.4, OuterBoundary::disk(3.0));
  CHECK(surface_chart(g, 1, 0.1) == Approx(0.005));
  CHECK(surface_chart(g, 2, 0.1) == Approx(-0.005));
  CHECK(surface_chart(g, 1, 0.0) == 0.0);
  CHECK(surface_chart(g, 2, 0.0) == 0.0);
  CHECK_THROWS(surface_chart(g, 1, 0.9));
  CHECK_THROWS(surface_chart(g, 3, 0.1));
}

TEST_CASE("gap profile") {
  InclusionPairGeometry g(2, 2, 1.0, 0.01, 0.4, OuterBoundary::disk(3.0));
  CHECK(gap(g, 0.1) == Approx(0.02));
  CHECK(gap(g, 0.0) == Approx(g.eps));
  InclusionPairGeometry g4(2, 4, 2.0, 1e-9, 0.6, OuterBoundary::disk(3.0));
  CHECK(gap(g4, 0.5) == Approx(0.125).epsilon(1e-6));
  CHECK_THROWS(gap(g, 1.0));
  // strictly increasing in |x'|
  double prev = gap(g, 0.0);
  for (double x = 0.02; x < 0.8; x += 0.02) {
    CHECK(gap(g, x) > prev);
    prev = gap(g, x);
  }
}

TEST_CASE("gap minus eps is m-homogeneous") {
  const int m = 3;
  const double kappa = 0.8, s = 1.7;
  InclusionPairGeometry g1(2, m, kappa, 0.01, 0.4, OuterBoundary::disk(3.0));
  InclusionPairGeometry g2(2, m, kappa * std::pow(s, m), 0.01, 0.4, OuterBoundary::disk(3.0));
  for (double x : {0.05, 0.2, 0.33})
    CHECK(gap(g1, x) - g1.eps == Approx(gap(g2, x / s) - g2.eps).epsilon(1e-13));
}

TEST_CASE("disks map onto the m=2 model") {
  SECTION("kappa values") {
    CHECK(disks_to_model(1.0, 1.0, 0.01, 3.0).kappa == Approx(1.0));
    CHECK(disks_to_model(2.0, 2.0, 0.01, 6.0).kappa == Approx(0.5));
    CHECK(disks_to_model(1e9, 1.0, 0.01, 4e9).kappa == Approx(0.5).epsilon(1e-8));
  }
  SECTION("not fitting is rejected") {
    CHECK_THROWS(disks_to_model(1.0, 1.0, 0.01, 2.0));
  }
  SECTION("chart approximates the true circle to O(R^4)") {
    auto g = disks_to_model(1.0, 1.0, 0.01, 3.0);
    double worst = 0.0;
    for (double x = 0.0; x <= g.R; x += g.R / 64.0) {
      const double true_h = 1.0 - std::sqrt(1.0 - x * x);
      worst = std::max(worst, std::abs(true_h - surface_chart(g, 1, x)));
    }
    CHECK(worst <= 0.15 * std::pow(g.R, 4.0));  // frozen constant
  }
}

TEST_CASE("narrow region sampler") {
  InclusionPairGeometry g(2, 2, 1.0, 0.01, 0.4, OuterBoundary::disk(3.0));
  SECTION("n=1 returns the gap midpoint") {
    auto pts = narrow_region_samples(g, 1);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].norm() == Approx(0.0).margin(1e-15));
  }
  SECTION("strict membership and ridge coverage") {
    const int n = 64;
    auto pts = narrow_region_samples(g, n);
    REQUIRE(static_cast<int>(pts.size()) == n);
    const double ridge = std::sqrt(g.eps);
    int ridge_count = 0;
    for (const auto& x : pts) {
      auto [lo, hi] = chart_bounds(g, x(0));
      CHECK(x(1) > lo);
      CHECK(x(1) < hi);
      CHECK(std::abs(x(0)) <= g.R);
      if (std::abs(x(0)) >= 0.5 * ridge && std::abs(x(0)) <= 2.0 * ridge) ++ridge_count;
    }
    CHECK(ridge_count >= n / 10);
  }
  SECTION("3D points live between the charts") {
    InclusionPairGeometry g3(3, 3, 1.0, 0.01, 0.4, OuterBoundary::disk(3.0));
    for (const auto& x : narrow_region_samples(g3, 17)) {
      const double xp = std::hypot(x(0), x(1));
      auto [lo, hi] = chart_bounds(g3, xp);
      CHECK(x(2) > lo);
      CHECK(x(2) < hi);
    }
  }
}

TEST_CASE("geometry validation") {
  CHECK_THROWS(InclusionPairGeometry(2, 1, 1.0, 0.01, 0.4, OuterBoundary::disk(3.0)));
  CHECK_THROWS(InclusionPairGeometry(2, 2, -1.0, 0.01, 0.4, OuterBoundary::disk(3.0)));
  CHECK_THROWS(InclusionPairGeometry(2, 2, 1.0, 0.5, 0.4, OuterBoundary::disk(3.0)));
  CHECK_THROWS(InclusionPairGeometry(2, 2, 1.0, 0.01, 4.0, OuterBoundary::disk(3.0)));
}
