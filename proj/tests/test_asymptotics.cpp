#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gapstress/asymptotics.hpp"
#include "gapstress/quadrature.hpp"

using namespace gapstress;
using Catch::Approx;

namespace {
InclusionPairGeometry geom(int d, int m, double kappa, double eps) {
  return InclusionPairGeometry(d, m, kappa, eps, 0.4, OuterBoundary::disk(3.0));
}
}  // namespace

TEST_CASE("profile integrals against the closed form") {
  CHECK(q_integral(2, 2) == Approx(M_PI).margin(1e-10));
  CHECK(q_integral(2, 4) == Approx(M_PI / std::sqrt(2.0)).margin(1e-10));
  CHECK(q_integral(3, 8, true) == Approx(M_PI / 4.0).margin(1e-10));
  for (int d : {2, 3})
    for (int m = 2; m <= 9; ++m)
      for (bool tilde : {false, true}) {
        if (!q_integral_convergent(d, m, tilde)) {
          CHECK_THROWS(q_integral(d, m, tilde));
          continue;
        }
        CHECK(q_integral(d, m, tilde) == Approx(q_integral_closed(d, m, tilde)).margin(1e-9));
      }
}

TEST_CASE("rate functions case table") {
  CHECK(rate(2, 2, 0.04, 1.0).rho_d == Approx(0.2));
  CHECK(rate(3, 2, 0.04, 1.0).rho_d == Approx(1.0 / std::abs(std::log(0.04))));
  CHECK(rate(2, 3, 1e-3, 1.0).E == Approx(1.5 / std::abs(std::log(1e-3))).epsilon(1e-12));
  CHECK(rate(2, 5, 0.01, 1.0).rho_md == 0.0);
  CHECK(rate(3, 8, 0.01, 1.0).rho_md == 0.0);
  CHECK(rate(3, 4, 0.01, 2.0).F == Approx(2.0 * 2.0 / (M_PI * std::abs(std::log(0.01)))));
  CHECK(rate(2, 4, 0.01, 1.0).E ==
        Approx(std::pow(0.01, 0.25) / q_integral_closed(2, 4, true)).epsilon(1e-9));
  CHECK_THROWS(rate(2, 2, 0.7, 1.0));
  // rates vanish monotonically with eps where nonzero
  double prev_E = 0.0, prev_rho = 0.0;
  for (double eps : {1e-4, 1e-3, 1e-2, 1e-1}) {
    auto r = rate(2, 3, eps, 1.0);
    CHECK(r.E > prev_E);
    CHECK(r.rho_md > prev_rho);
    prev_E = r.E;
    prev_rho = r.rho_md;
  }
}

TEST_CASE("capacity leading terms") {
  LameParams p(1.0, 1.0, 2);
  SECTION("d=2 m=2") {
    auto g = geom(2, 2, 1.0, 1e-4);
    CHECK(a11_leading(p, g, 1).value(1e-4) == Approx(100.0 * M_PI).epsilon(1e-12));
    const double ratio = a11_leading(p, g, 2).value(1e-4) / a11_leading(p, g, 1).value(1e-4);
    CHECK(ratio == Approx((p.lambda + 2.0 * p.mu) / p.mu).epsilon(1e-13));
    CHECK_THROWS(a11_leading(p, g, 3));
    CHECK_FALSE(a11_leading(p, g, 1).unknown_const);
  }
  SECTION("d=2 m=4 rotation branch") {
    auto g = geom(2, 4, 0.6, 0.01);
    auto a = a11_leading(p, g, 3);
    CHECK(a.value(0.01) ==
          Approx((p.lambda + 2.0 * p.mu) * q_integral(2, 4, true) /
                 (std::pow(0.6, 0.75) * std::pow(0.01, 0.25)))
              .epsilon(1e-10));
    CHECK(a.unknown_const);
  }
  SECTION("d=3 m=2 log branch") {
    LameParams p3(2.0, 0.5, 3);
    auto g = geom(3, 2, 1.5, 0.01);
    auto a = a11_leading(p3, g, 1);
    CHECK(a.value(0.01) == Approx(M_PI * 0.5 / 1.5 * std::abs(std::log(0.01))).epsilon(1e-12));
    CHECK(a.unknown_const);
    CHECK_THROWS(a11_leading(p3, g, 4));
  }
  SECTION("d=3 m=4 rotations carry the halved coefficient") {
    LameParams p3(1.0, 1.0, 3);
    auto g = geom(3, 4, 1.0, 0.01);
    const double a44 = a11_leading(p3, g, 4).value(0.01);
    const double a55 = a11_leading(p3, g, 5).value(0.01);
    CHECK(a55 / a44 == Approx((p3.lambda + 2.0 * p3.mu) / (2.0 * p3.mu)).epsilon(1e-12));
  }
}

TEST_CASE("c_diff_leading") {
  LameParams p(1.0, 1.0, 2);
  auto g = geom(2, 2, 1.0, 0.01);
  SECTION("spec value") {
    Eigen::VectorXd b(3);
    b << M_PI, 0.0, 0.0;
    CHECK(c_diff_leading(p, g, b)(0) == Approx(0.1).epsilon(1e-12));
  }
  SECTION("zero is linear") {
    CHECK(c_diff_leading(p, g, Eigen::VectorXd::Zero(3)).norm() == 0.0);
  }
  SECTION("abstract diagonal solve") {
    // with a11 = 2 and b = 1 the entry is b / a11 = 0.5
    Eigen::VectorXd b(3);
    b << a11_leading(p, g, 1).value(g.eps) * 0.5, 0.0, 0.0;
    CHECK(c_diff_leading(p, g, b)(0) == Approx(0.5));
  }
}

TEST_CASE("theorem coefficients equal the capacity route") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ul(0.2, 3.0), uk(0.3, 2.5), ue(1e-4, 0.05);
  for (int rep = 0; rep < 100; ++rep) {
    const double mu = ul(rng), lam = ul(rng) - 0.5;
    const double kappa = uk(rng), eps = ue(rng);
    for (int d : {2, 3}) {
      LameParams p(lam, mu, d);
      for (int m : {2, 3, 4, 5, 6, 8}) {
        auto g = geom(d, m, kappa, eps);
        for (int alpha = 1; alpha <= rigid_count(d); ++alpha) {
          if (c_diff_vanishes(d, m, alpha)) continue;
          const double route_a = theorem_gradient_coefficient(p, g, alpha);
          const double route_b = 1.0 / a11_leading(p, g, alpha).value(eps);
          CHECK(route_a == Approx(route_b).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("gradient prediction structure at the gap center") {
  LameParams p(1.0, 1.0, 2);
  SECTION("zero data gives the zero matrix") {
    auto g = geom(2, 2, 1.0, 0.01);
    CHECK(grad_u_asymptotic(p, g, Eigen::VectorXd::Zero(3), Eigen::Vector2d(0.0, 0.0)).norm() ==
          0.0);
  }
  SECTION("(1,2) entry in closed form on the segment x1 = 0") {
    const double eps = 0.01, kappa = 1.3, bs = 0.8;
    auto g = geom(2, 2, kappa, eps);
    Eigen::VectorXd b(3);
    b << bs, 0.0, 0.0;
    const auto G = grad_u_asymptotic(p, g, b, Eigen::Vector2d(0.0, 0.001));
    CHECK(G(0, 1) ==
          Approx(std::sqrt(kappa) / (M_PI * p.mu) * bs / std::sqrt(eps)).epsilon(1e-12));
  }
  SECTION("eps -> eps/4 doubles the center entry") {
    const double kappa = 1.0, bs = 1.0;
    Eigen::VectorXd b(3);
    b << bs, 0.0, 0.0;
    auto g1 = geom(2, 2, kappa, 0.04);
    auto g2 = geom(2, 2, kappa, 0.01);
    const double e1 = grad_u_asymptotic(p, g1, b, Eigen::Vector2d(0, 0))(0, 1);
    const double e2 = grad_u_asymptotic(p, g2, b, Eigen::Vector2d(0, 0))(0, 1);
    CHECK(e2 / e1 == Approx(2.0).epsilon(1e-12));
  }
  SECTION("only last-column entries at x' = 0 (blow-up matrix structure)") {
    Eigen::VectorXd b(3);
    b << 0.7, -0.4, 0.0;
    for (int m : {3, 4}) {
      auto g = geom(2, m, 1.0, 0.01);
      const auto G = grad_u_asymptotic(p, g, b, Eigen::Vector2d(0.0, 0.0));
      CHECK(std::abs(G(0, 0)) < 1e-15);
      CHECK(std::abs(G(1, 0)) < 1e-15);
    }
    // m=2 keeps an O(eps) off-column correction from the profile curvature
    auto g = geom(2, 2, 1.0, 0.01);
    const auto G = grad_u_asymptotic(p, g, b, Eigen::Vector2d(0.0, 0.0));
    CHECK(std::abs(G(1, 0)) < 10.0 * g.kappa * g.eps * std::abs(G(0, 1)));
    // rotation data adds only a bounded off-column term while the last
    // column grows as eps decreases
    Eigen::VectorXd brot(3);
    brot << 0.7, -0.4, 0.2;
    double prev_col = 0.0;
    for (double eps : {0.04, 0.01, 0.0025}) {
      auto gm = geom(2, 4, 1.0, eps);
      const auto Gm = grad_u_asymptotic(p, gm, brot, Eigen::Vector2d(0.0, 0.0));
      CHECK(std::abs(Gm(1, 0)) < 1.0);  // bounded: |c_diff_3| * |ubar|
      CHECK(std::abs(Gm(0, 1)) > prev_col);
      prev_col = std::abs(Gm(0, 1));
    }
  }
}

TEST_CASE("blow-up matrix") {
  LameParams p(1.0, 1.0, 2);
  SECTION("spec example") {
    Eigen::VectorXd b(3);
    b << 2.0, 3.0, 0.0;
    auto B = blowup_matrix(p, 2, b);
    CHECK(B(0, 1) == Approx(2.0));
    CHECK(B(1, 1) == Approx(1.0));
    CHECK(B(0, 0) == 0.0);
    CHECK(B(1, 0) == 0.0);
  }
  SECTION("linearity in bstar") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-2, 2);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) b(i) = u(rng);
    LameParams p3(0.7, 1.9, 3);
    auto B1 = blowup_matrix(p3, 3, b);
    auto B2 = blowup_matrix(p3, 3, Eigen::VectorXd(2.5 * b));
    CHECK((B2 - 2.5 * B1).norm() < 1e-14);
    // only the last column is populated
    CHECK(B1.leftCols(2).norm() == 0.0);
  }
  SECTION("zero data") {
    CHECK(blowup_matrix(p, 2, Eigen::VectorXd::Zero(3)).norm() == 0.0);
  }
}

TEST_CASE("anisotropy integrals") {
  SECTION("m=2 integrand is unity and G2 = 2 pi") {
    auto a = anisotropy(2, 1.7, 0.4);
    for (double t : {0.1, 1.0, 2.5, 4.4}) CHECK(a.integrand_E(t) == Approx(1.0).margin(1e-14));
    CHECK(a.G == Approx(2.0 * M_PI).margin(1e-9));
    CHECK(a.coeff_main() == Approx(std::sqrt(1.7 * 0.4)).epsilon(1e-13));
    // the m=2 replacement is consistent with the literal m(kk')^{1/m}/G_m
    CHECK(a.coeff_main() / M_PI ==
          Approx(2.0 * std::sqrt(1.7 * 0.4) / a.G).epsilon(1e-9));
  }
  SECTION("Beta-function oracle for G and G~") {
    for (int m : {3, 4, 6}) {
      const double kappa = 1.3, kp = 0.6;
      auto a = anisotropy(m, kappa, kp);
      const double G_exact = 2.0 * beta_fn(1.0 / m, 1.0 / m);
      const double Gt_exact = 2.0 * (std::pow(kappa, -2.0 / m) + std::pow(kp, -2.0 / m)) *
                              beta_fn(1.0 / m, 3.0 / m);
      CHECK(a.G == Approx(G_exact).epsilon(1e-9));
      CHECK(a.G_tilde == Approx(Gt_exact).epsilon(1e-9));
    }
  }
  SECTION("G~ is symmetric under kappa swap") {
    auto a = anisotropy(5, 2.0, 0.7);
    auto b = anisotropy(5, 0.7, 2.0);
    CHECK(a.G_tilde == Approx(b.G_tilde).epsilon(1e-10));
  }
  SECTION("recorded isotropic-reduction ratios") {
    // the kappa = kappa' reduction matches the radial-profile coefficient
    // only at m = 2; the observed ratios are frozen here
    CHECK(anisotropy(2, 1.0, 1.0).isotropic_ratio_main() == Approx(1.0));
    CHECK(anisotropy(3, 1.0, 1.0).isotropic_ratio_main() ==
          Approx(3.0 * M_PI / (4.0 * beta_fn(1.0 / 3.0, 1.0 / 3.0))).epsilon(1e-9));
    CHECK(anisotropy(4, 1.0, 1.0).isotropic_ratio_main() ==
          Approx(2.0 * M_PI / beta_fn(0.25, 0.25)).epsilon(1e-9));
    CHECK(anisotropy(4, 1.0, 1.0).isotropic_ratio_tilde() ==
          Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK_THROWS(anisotropy(4, -1.0, 1.0));
  }
}

TEST_CASE("effective moduli") {
  LameParams p(1.0, 1.0, 2);
  auto em = effective_moduli(p, 2, 1.0, 1.0, 1.0, 0.01);
  CHECK(em.mu_star == Approx(10.0 * M_PI).epsilon(1e-9));
  CHECK(em.young == Approx(2.5));
  CHECK(em.E_star == Approx(25.0 * M_PI).epsilon(1e-9));
  CHECK(em.unknown_const);
  // same sqrt(kappa eps) denominator as the capacity asymptote
  auto g = geom(2, 2, 1.0, 0.01);
  CHECK(em.mu_star == Approx(a11_leading(p, g, 1).value(0.01)).epsilon(1e-9));
  // both moduli scale as eps^{-(1-1/m)}
  for (int m : {2, 3, 5}) {
    auto e1 = effective_moduli(p, m, 1.0, 2.0, 1.3, 0.02);
    auto e2 = effective_moduli(p, m, 1.0, 2.0, 1.3, 0.01);
    CHECK(e2.mu_star / e1.mu_star == Approx(std::pow(2.0, 1.0 - 1.0 / m)).epsilon(1e-10));
  }
}
