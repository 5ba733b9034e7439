#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <memory>

#include "gapstress/aux_fields.hpp"
#include "gapstress/fem.hpp"
#include "gapstress/meshgen.hpp"

using namespace gapstress;
using Catch::Approx;

namespace {

struct Setup {
  OracleGeometry geo;
  Mesh mesh;
  std::unique_ptr<P2Space> space;
  Setup(double eps, double h = 0.35, int layers = 6) : geo(make_disks_geometry(1.0, eps, 3.0)) {
    MeshParams mp;
    mp.h_target = h;
    mp.n_layers = layers;
    mesh = build_mesh(geo, mp);
    space = std::make_unique<P2Space>(mesh);
  }
};

Vector2d phi_shear(const Vector2d& x) { return {x.y(), 0.0}; }
Vector2d phi_zero(const Vector2d&) { return Vector2d::Zero(); }

}  // namespace

TEST_CASE("patch test: affine fields are reproduced exactly") {
  Setup s(0.08, 0.45, 4);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem sys(*s.space, p, BCSpec::all_dirichlet());
  Matrix2d A;
  A << 0.3, -0.8, 0.5, 1.1;
  auto sol = sys.solve([&](int, const Vector2d& x) -> Vector2d { return A * x; });
  double worst = 0.0;
  for (int i = 0; i < s.space->n_nodes(); ++i) {
    const Vector2d exact = A * s.space->node(i);
    worst = std::max(worst, (Vector2d(sol.u(2 * i), sol.u(2 * i + 1)) - exact).norm());
  }
  CHECK(worst < 1e-9);
  // probe returns the constant gradient
  const Matrix2d g = s.space->gradient(sol.u, Vector2d(1.4, 0.7));
  CHECK((g - A).norm() < 1e-9);
}

TEST_CASE("rigid boundary data is the exact minimizer") {
  Setup s(0.05);
  LameParams p(2.0, 0.5, 2);
  ElasticSystem rigid(*s.space, p, BCSpec::rigid_inclusions(false));
  for (int alpha = 1; alpha <= 3; ++alpha) {
    auto sol = solve_full(rigid, [&](const Vector2d& x) -> Vector2d {
      switch (alpha) {
        case 1: return {1.0, 0.0};
        case 2: return {0.0, 1.0};
        default: return {-x.y(), x.x()};
      }
    });
    CHECK(max_strain(*s.space, sol.u) < 1e-8);
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 3; ++a)
        CHECK(sol.C(i, a) == Approx(a + 1 == alpha ? 1.0 : 0.0).margin(1e-8));
  }
}

TEST_CASE("v family basics") {
  Setup s(0.05);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem sys(*s.space, p, BCSpec::all_dirichlet());

  SECTION("zero data gives the zero solution") {
    auto fam = solve_v_family(sys, phi_zero);
    CHECK(fam.v0.norm() == Approx(0.0).margin(1e-12));
  }
  SECTION("superposition of boundary data") {
    auto fam = solve_v_family(sys, phi_zero);
    for (int alpha = 1; alpha <= 3; ++alpha) {
      auto both = sys.solve([&](int tag, const Vector2d& x) -> Vector2d {
        if (tag == kTagInc1 || tag == kTagInc2) {
          if (alpha == 1) return {1.0, 0.0};
          if (alpha == 2) return {0.0, 1.0};
          return {-x.y(), x.x()};
        }
        return Vector2d::Zero();
      });
      const Eigen::VectorXd sum = fam.v[0][alpha - 1] + fam.v[1][alpha - 1];
      CHECK((sum - both.u).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }
}

TEST_CASE("capacity matrix properties and the def_aij identity") {
  Setup s(0.05);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem sys(*s.space, p, BCSpec::all_dirichlet());
  auto fam = solve_v_family(sys, phi_shear);
  const Eigen::MatrixXd a6 = compute_capacity(*s.space, p, fam);

  SECTION("symmetric positive definite") {
    CHECK((a6 - a6.transpose()).norm() < 1e-12 * a6.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a6);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
  SECTION("energy form equals the discrete boundary pairing") {
    auto psi = [](int alpha) {
      return [alpha](const Vector2d& x) -> Vector2d {
        if (alpha == 1) return {1.0, 0.0};
        if (alpha == 2) return {0.0, 1.0};
        return {-x.y(), x.x()};
      };
    };
    for (int i = 0; i < 2; ++i)
      for (int a = 1; a <= 3; ++a)
        for (int j = 0; j < 2; ++j)
          for (int b = 1; b <= 3; ++b) {
            const double via_energy = a6(3 * i + a - 1, 3 * j + b - 1);
            const double via_flux = -sys.reaction_pairing(
                fam.v[i][a - 1], j == 0 ? kTagInc1 : kTagInc2, psi(b));
            CHECK(via_flux == Approx(via_energy).epsilon(1e-6).margin(1e-9));
          }
  }
  SECTION("symmetry-pattern zeros") {
    const double diag = a6(0, 0);
    // a_11^{12} and a_11^{23} vanish on the symmetric mesh
    CHECK(std::abs(a6(0, 1)) < 1e-3 * diag);
    CHECK(std::abs(a6(1, 2)) < 1e-3 * diag);
    // a_11^{11} = a_22^{11}
    CHECK(a6(0, 0) == Approx(a6(3, 3)).epsilon(1e-10));
    CHECK(a6(1, 1) == Approx(a6(4, 4)).epsilon(1e-10));
  }
  SECTION("capacity approximates the leading asymptote") {
    const double lead = M_PI * p.mu / std::sqrt(s.geo.model.kappa * s.geo.model.eps);
    CHECK(a6(0, 0) / lead > 0.8);
    CHECK(a6(0, 0) / lead < 1.25);
  }
}

TEST_CASE("cross-path constants and the decomposition identity") {
  Setup s(0.05);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem dirichlet(*s.space, p, BCSpec::all_dirichlet());
  ElasticSystem rigid(*s.space, p, BCSpec::rigid_inclusions(false));

  auto fam = solve_v_family(dirichlet, phi_shear);
  auto full = solve_full(rigid, phi_shear);
  const Eigen::MatrixXd a6 = compute_capacity(*s.space, p, fam);
  const Eigen::MatrixXd bt = compute_btilde(*s.space, p, fam);
  const Eigen::MatrixXd C = solve_constants_from_capacity(a6, bt);

  SECTION("constants from the assembled system match the direct solve") {
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 3; ++a)
        CHECK(C(i, a) == Approx(full.C(i, a)).margin(1e-8 * (1.0 + full.C.norm())));
  }
  SECTION("reconstruction matches the direct solve nodewise") {
    Eigen::VectorXd rec = fam.v0;
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 3; ++a) rec += full.C(i, a) * fam.v[i][a];
    CHECK((rec - full.u).lpNorm<Eigen::Infinity>() < 1e-8);
  }
  SECTION("b functionals: two routes agree") {
    auto b = compute_b(*s.space, p, fam, a6, full.C.row(1).transpose());
    for (int k = 0; k < 3; ++k)
      CHECK(b.b1_duality(k) == Approx(b.b1_ub(k)).margin(1e-8 * (1.0 + b.b1_ub.norm())));
  }
  SECTION("zero data gives zero functionals") {
    auto fam0 = solve_v_family(dirichlet, phi_zero);
    auto full0 = solve_full(rigid, phi_zero);
    auto b = compute_b(*s.space, p, fam0, a6, full0.C.row(1).transpose());
    CHECK(b.b_tilde.norm() == Approx(0.0).margin(1e-12));
    CHECK(b.b1_duality.norm() == Approx(0.0).margin(1e-12));
    CHECK(full0.u.norm() == Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("limit problem with shared constants") {
  // touching approximation: eps0 = 1e-4 * diameter
  Setup s(6e-4, 0.35, 4);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem shared(*s.space, p, BCSpec::rigid_inclusions(true));

  SECTION("rigid data is reproduced with the shared constant") {
    auto sol = solve_limit(shared, [](const Vector2d& x) -> Vector2d { return {-x.y(), x.x()}; });
    REQUIRE(sol.C.rows() == 1);
    CHECK(sol.C(0, 0) == Approx(0.0).margin(1e-8));
    CHECK(sol.C(0, 1) == Approx(0.0).margin(1e-8));
    CHECK(sol.C(0, 2) == Approx(1.0).margin(1e-8));
    CHECK(max_strain(*s.space, sol.u) < 1e-8);
  }
  SECTION("odd shear data pins the first shared component") {
    auto sol = solve_limit(shared, phi_shear);
    CHECK(std::abs(sol.C(0, 0)) < 1e-10);  // symmetric mesh: exact zero
  }
}

TEST_CASE("gradient probe on a rigid solution") {
  Setup s(0.05);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem sys(*s.space, p, BCSpec::all_dirichlet());
  auto rot = sys.solve([&](int, const Vector2d& x) -> Vector2d { return {-x.y(), x.x()}; });
  Matrix2d expect;
  expect << 0, -1, 1, 0;
  for (const auto& pt : {Vector2d(0.0, 0.01), Vector2d(1.7, 0.4), Vector2d(0.2, -2.1)}) {
    CHECK((s.space->gradient(rot.u, pt) - expect).norm() < 1e-8);
  }
  CHECK_THROWS(s.space->gradient(rot.u, Vector2d(10.0, 0.0)));
}

TEST_CASE("solution and functional exports") {
  Setup s(0.08, 0.5, 4);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem sys(*s.space, p, BCSpec::all_dirichlet());
  auto sol = sys.solve([&](int, const Vector2d& x) -> Vector2d { return {x.y(), 0.0}; });
  const std::string csv = "/tmp/gapstress_sol.csv";
  write_solution_csv(*s.space, sol.u, csv);
  std::FILE* f = std::fopen(csv.c_str(), "r");
  REQUIRE(f != nullptr);
  char line[256];
  REQUIRE(std::fgets(line, sizeof line, f) != nullptr);
  CHECK(std::string(line).rfind("node,", 0) == 0);
  std::fclose(f);
  std::remove(csv.c_str());

  const std::string js = "/tmp/gapstress_fun.json";
  write_functionals_json({{0.05, "a11", {1, 1, 1, 1}, 14.2, 0.3, 12345}}, js);
  std::FILE* jf = std::fopen(js.c_str(), "r");
  REQUIRE(jf != nullptr);
  std::fclose(jf);
  std::remove(js.c_str());
}

TEST_CASE("period cell solves and has gap-dominated energy") {
  auto geo = make_cell_geometry(1.5, 1.0, 0.04);
  Mesh mesh = build_mesh(geo, MeshParams{});
  P2Space space(mesh);
  LameParams p(1.0, 1.0, 2);
  ElasticSystem sys(space, p, BCSpec::period_cell());
  // shear: top composite boundary moves by e1, bottom clamped
  auto sol = sys.solve([&](int tag, const Vector2d&) -> Vector2d {
    if (tag == kTagInc1 || tag == kTagCellTop) return {1.0, 0.0};
    return Vector2d::Zero();
  });
  const double energy = space.energy_form(p, sol.u, sol.u);
  const double lead = p.mu * M_PI / std::sqrt(geo.model.kappa * geo.model.eps);
  CHECK(energy / lead > 0.7);
  CHECK(energy / lead < 1.35);
}
