#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gapstress/aux_fields.hpp"
#include "gapstress/quadrature.hpp"

using namespace gapstress;
using Catch::Approx;

namespace {

InclusionPairGeometry model2(int m, double kappa, double eps) {
  return InclusionPairGeometry(2, m, kappa, eps, 0.4, OuterBoundary::disk(3.0));
}
InclusionPairGeometry model3(int m, double kappa, double eps) {
  return InclusionPairGeometry(3, m, kappa, eps, 0.4, OuterBoundary::disk(3.0));
}

Eigen::VectorXd chart_point(const InclusionPairGeometry& g, double xp, double t, double theta = 0.0) {
  auto [lo, hi] = chart_bounds(g, xp);
  Eigen::VectorXd x(g.d);
  if (g.d == 2)
    x << xp, lo + t * (hi - lo);
  else
    x << xp * std::cos(theta), xp * std::sin(theta), lo + t * (hi - lo);
  return x;
}

}  // namespace

TEST_CASE("bridge profile") {
  CHECK(bridge(0.0) == 0.0);
  CHECK(bridge(1.0) == 0.0);
  CHECK(bridge(0.5) == Approx(-0.125));
  CHECK(bridge_deriv(0.5) == 0.0);
}

TEST_CASE("keel boundary values and vertical derivative") {
  auto g = model2(2, 1.0, 0.1);
  ScalarKeel keel(g);
  for (double xp : {0.0, 0.1, -0.25, 0.35}) {
    CHECK(keel.eval(chart_point(g, xp, 1.0)).value == Approx(1.0).margin(1e-13));
    CHECK(keel.eval(chart_point(g, xp, 0.0)).value == Approx(0.0).margin(1e-13));
    CHECK(keel.eval(chart_point(g, xp, 0.5)).value == Approx(0.5).margin(1e-13));
    const auto e = keel.eval(chart_point(g, xp, 0.37));
    CHECK(e.grad(1) == Approx(1.0 / gap(g, xp)).epsilon(1e-14));
  }
  // eps = 0.1, x' = 0: d/dx2 = 1/delta = 10 exactly
  CHECK(keel.eval(chart_point(g, 0.0, 0.2)).grad(1) == Approx(10.0).epsilon(1e-15));
  CHECK_THROWS(keel.eval(Eigen::Vector2d(0.9, 0.0)));   // |x'| > 2R
  CHECK_THROWS(keel.eval(Eigen::Vector2d(0.0, 0.2)));   // above the chart
}

TEST_CASE("mirrored keel is one minus keel") {
  auto g = model2(3, 0.7, 0.03);
  ScalarKeel up(g), down(g, true);
  for (double xp : {0.0, 0.12, -0.3}) {
    auto x = chart_point(g, xp, 0.3);
    CHECK(down.eval(x).value == Approx(1.0 - up.eval(x).value).margin(1e-13));
  }
}

TEST_CASE("aux field boundary conformity") {
  LameParams p(1.7, 0.6, 2);
  auto g = model2(2, 1.2, 0.02);
  auto basis = rigid_basis(2);
  for (int alpha = 1; alpha <= 3; ++alpha) {
    VectorAuxField f(p, g, alpha);
    for (double xp : {0.0, 0.05, -0.2, 0.33, -0.39}) {
      auto xu = chart_point(g, xp, 1.0);
      auto xl = chart_point(g, xp, 0.0);
      CHECK((f.eval(xu).value - basis[alpha - 1].value(xu)).norm() < 1e-12);
      CHECK(f.eval(xl).value.norm() < 1e-12);
    }
  }
  // mirrored family: psi_alpha on the lower chart, zero on the upper
  for (int alpha = 1; alpha <= 3; ++alpha) {
    VectorAuxField f(p, g, alpha, true);
    for (double xp : {0.0, 0.17, -0.31}) {
      auto xu = chart_point(g, xp, 1.0);
      auto xl = chart_point(g, xp, 0.0);
      CHECK((f.eval(xl).value - basis[alpha - 1].value(xl)).norm() < 1e-12);
      CHECK(f.eval(xu).value.norm() < 1e-12);
    }
  }
}

TEST_CASE("dominant gradient entry is 1/delta") {
  LameParams p(1.0, 1.0, 2);
  auto g = model2(2, 1.0, 0.01);
  VectorAuxField f(p, g, 1);
  for (double xp : {0.0, 0.08, -0.2}) {
    auto e = f.eval(chart_point(g, xp, 0.6));
    CHECK(e.grad(0, 1) == Approx(1.0 / gap(g, xp)).epsilon(1e-13));
  }
  // d=3, alpha=1: d_{x3}(u)^1 = 1/delta
  LameParams p3(1.0, 1.0, 3);
  auto g3 = model3(2, 1.0, 0.01);
  VectorAuxField f3(p3, g3, 1);
  auto e3 = f3.eval(chart_point(g3, 0.1, 0.4, 0.8));
  CHECK(e3.grad(0, 2) == Approx(1.0 / gap(g3, 0.1)).epsilon(1e-12));
}

TEST_CASE("corrector cancellation identity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uxp(-1.0, 1.0), ut(0.05, 0.95);
  const std::pair<double, double> lame[] = {{1, 1}, {2, 0.5}, {0.3, 2.5}, {5, 1}, {-0.4, 1}};
  SECTION("d=2") {
    for (auto [lam, mu] : lame) {
      LameParams p(lam, mu, 2);
      for (int m : {2, 3, 4}) {
        auto g = model2(m, 1.4, 0.01);
        VectorAuxField f(p, g, 1);
        for (int i = 0; i < 200; ++i) {
          auto x = chart_point(g, 0.39 * uxp(rng), ut(rng));
          auto e = f.eval(x);
          const double t1 = (p.lambda + p.mu) * e.hess[0](0, 1);
          const double t2 = (p.lambda + 2.0 * p.mu) * e.hess[1](1, 1);
          const double scale = std::max(std::abs(t1), std::abs(t2));
          if (scale > 0.0) CHECK(std::abs(t1 + t2) <= 1e-12 * scale);
        }
      }
    }
  }
  SECTION("d=3") {
    for (auto [lam, mu] : lame) {
      LameParams p(lam, mu, 3);
      auto g = model3(2, 0.8, 0.02);
      VectorAuxField f(p, g, 1);
      for (int i = 0; i < 200; ++i) {
        auto x = chart_point(g, 0.39 * std::abs(uxp(rng)), ut(rng), 3.0 * uxp(rng));
        auto e = f.eval(x);
        const double t1 = (p.lambda + p.mu) * e.hess[0](2, 0);
        const double t2 = (p.lambda + 2.0 * p.mu) * e.hess[2](2, 2);
        const double scale = std::max(std::abs(t1), std::abs(t2));
        if (scale > 0.0) CHECK(std::abs(t1 + t2) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("analytic derivatives match finite differences at order >= 1.9") {
  LameParams p(1.1, 0.9, 2);
  auto g = model2(3, 0.9, 0.05);
  VectorAuxField f(p, g, 2);
  const Eigen::Vector2d x0 = chart_point(g, 0.21, 0.4);

  auto grad_err = [&](double h) {
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
      Eigen::VectorXd xp = x0, xm = x0;
      xp(j) += h;
      xm(j) -= h;
      Eigen::VectorXd fd = (f.eval(xp).value - f.eval(xm).value) / (2.0 * h);
      worst = std::max(worst, (fd - f.eval(x0).grad.col(j)).norm());
    }
    return worst;
  };
  auto hess_err = [&](double h) {
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
      Eigen::VectorXd xp = x0, xm = x0;
      xp(j) += h;
      xm(j) -= h;
      Eigen::MatrixXd fd = (f.eval(xp).grad - f.eval(xm).grad) / (2.0 * h);
      auto e0 = f.eval(x0);
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
          worst = std::max(worst, std::abs(fd(i, k) - e0.hess[i](j, k)));
    }
    return worst;
  };
  const double h1 = 1e-4, h2 = 5e-5;
  const double g1 = grad_err(h1), g2 = grad_err(h2);
  const double H1 = hess_err(h1), H2 = hess_err(h2);
  CHECK(std::log2(g1 / g2) / std::log2(h1 / h2) >= 1.9);
  CHECK(std::log2(H1 / H2) / std::log2(h1 / h2) >= 1.9);
}

TEST_CASE("parallel-plate limit: residual vanishes for alpha <= d") {
  LameParams p(1.0, 1.0, 2);
  // kappa -> 0 realizes flat plates; residual terms all carry the slope
  InclusionPairGeometry g(2, 2, 1e-30, 0.01, 0.4, OuterBoundary::disk(3.0));
  for (int alpha : {1, 2}) {
    VectorAuxField f(p, g, alpha);
    for (double xp : {0.0, 0.1, -0.3})
      CHECK(f.lame_residual(chart_point(g, xp, 0.3)).norm() < 1e-20);
  }
}

TEST_CASE("residual second component reduces to the corrector term") {
  // after cancellation, (L u_1^1)^2 = mu * d11 (utilde)^2
  LameParams p(2.3, 0.8, 2);
  for (int m : {2, 4}) {
    auto g = model2(m, 1.1, 0.02);
    VectorAuxField f(p, g, 1);
    for (double xp : {0.05, 0.17, -0.29}) {
      auto x = chart_point(g, xp, 0.55);
      auto e = f.eval(x);
      auto r = f.lame_residual(x);
      CHECK(r(1) == Approx(p.mu * e.hess[1](0, 0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("residual bound shapes") {
  LameParams p(1.0, 1.0, 2);
  SECTION("m=2: |residual| <= C / delta") {
    auto g = model2(2, 1.0, 0.01);
    VectorAuxField f(p, g, 1);
    double worst = 0.0;
    for (double xp = -0.39; xp <= 0.39; xp += 0.013) {
      for (double t : {0.15, 0.5, 0.85}) {
        auto x = chart_point(g, xp, t);
        worst = std::max(worst, f.lame_residual(x).norm() * gap(g, xp));
      }
    }
    CHECK(worst < 10.0);  // frozen regression bound; observed ~ O(kappa)
  }
  SECTION("m>=3: |residual| <= C |x'|^{m-2}/delta (1 + eps/|x'|)") {
    auto g = model2(4, 1.0, 0.005);
    VectorAuxField f(p, g, 1);
    double worst = 0.0;
    for (double xp = 0.01; xp <= 0.39; xp += 0.007) {
      auto x = chart_point(g, xp, 0.4);
      const double bound = std::pow(xp, 2.0) / gap(g, xp) * (1.0 + g.eps / xp);
      worst = std::max(worst, f.lame_residual(x).norm() / bound);
    }
    CHECK(worst < 40.0);  // frozen regression constant
  }
  SECTION("alpha > d: |residual| <= C / delta") {
    auto g = model2(2, 1.0, 0.01);
    VectorAuxField f(p, g, 3);
    double worst = 0.0;
    for (double xp = -0.39; xp <= 0.39; xp += 0.017)
      worst = std::max(worst, f.lame_residual(chart_point(g, xp, 0.3)).norm() * gap(g, xp));
    CHECK(worst < 10.0);
  }
}

TEST_CASE("residual * delta stays bounded under eps halvings") {
  LameParams p(1.0, 1.0, 2);
  const double xp = 0.2;  // x' = R/2
  double eps = 0.02;
  double first = 0.0;
  for (int k = 0; k < 6; ++k, eps *= 0.5) {
    auto g = model2(2, 1.0, eps);
    VectorAuxField f(p, g, 1);
    const double v = f.lame_residual(chart_point(g, xp, 0.5)).norm() * gap(g, xp);
    if (k == 0) first = v;
    CHECK(v <= 4.0 * std::max(first, 1.0));  // regression: stays O(1)
  }
}

TEST_CASE("corrector energy bounded uniformly in eps") {
  LameParams p(1.0, 1.0, 2);
  auto corrector_energy = [&](double eps, int m) {
    auto g = model2(m, 1.0, eps);
    VectorAuxField full(p, g, 1);
    ScalarKeel keel(g);
    // |grad utilde|^2 integrated over Omega_R by tensor quadrature
    auto integrand = [&](double xp) {
      auto [lo, hi] = chart_bounds(g, xp);
      const int nq = 8;
      double acc = 0.0;
      for (int q = 0; q < nq; ++q) {
        const double t = (q + 0.5) / nq;
        Eigen::Vector2d x(xp, lo + t * (hi - lo));
        auto e = full.eval(x);
        // corrector is the second component for alpha = 1
        acc += e.grad.row(1).squaredNorm();
      }
      return acc * (hi - lo) / nq;
    };
    return adaptive_simpson(integrand, -0.399, 0.399, 1e-8);
  };
  // one decade of eps values; bound frozen at twice the first sweep point
  for (int m : {2, 3}) {
    const double first = corrector_energy(0.01, m);
    for (int k = 0; k <= 9; ++k)
      CHECK(corrector_energy(0.01 * std::pow(0.1, k / 9.0), m) <= 2.0 * first + 1e-12);
  }
}

TEST_CASE("lame residual respects the chart restriction") {
  LameParams p(1.0, 1.0, 2);
  auto g = model2(2, 1.0, 0.01);
  VectorAuxField f(p, g, 1);
  CHECK_THROWS(f.lame_residual(Eigen::Vector2d(0.41, 0.0)));  // outside Omega_R
  CHECK_NOTHROW(f.eval(Eigen::Vector2d(0.41, chart_bounds(g, 0.41).first * 0.5 +
                                                 chart_bounds(g, 0.41).second * 0.5)));
  CHECK_THROWS(VectorAuxField(p, g, 4));  // invalid alpha for d=2
}
