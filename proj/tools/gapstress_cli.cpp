#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gapstress/acceptance.hpp"
#include "gapstress/asymptotics.hpp"
#include "gapstress/sweep.hpp"

using namespace gapstress;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int cmd_qtab() {
  std::printf("%-4s %-4s %-14s %-14s %-14s %-14s\n", "d", "m", "Q", "Q closed", "Q~", "Q~ closed");
  for (int d : {2, 3})
    for (int m = 2; m <= 8; ++m) {
      std::printf("%-4d %-4d ", d, m);
      if (q_integral_convergent(d, m, false))
        std::printf("%-14.10f %-14.10f ", q_integral(d, m), q_integral_closed(d, m));
      else
        std::printf("%-14s %-14s ", "divergent", "divergent");
      if (q_integral_convergent(d, m, true))
        std::printf("%-14.10f %-14.10f\n", q_integral(d, m, true), q_integral_closed(d, m, true));
      else
        std::printf("%-14s %-14s\n", "divergent", "divergent");
    }
  return 0;
}

int cmd_capacity(int d, int m, double lambda, double mu, double kappa, double eps, int alpha) {
  LameParams p(lambda, mu, d);
  InclusionPairGeometry g(d, m, kappa, eps, std::max(2.0 * eps, 0.4), OuterBoundary::disk(1e6));
  std::printf("%-6s %-18s %-12s %-10s %-14s\n", "alpha", "leading value", "eps power",
              "log power", "unknown O(1)");
  for (int a = 1; a <= rigid_count(d); ++a) {
    if (alpha != 0 && a != alpha) continue;
    try {
      const auto cap = a11_leading(p, g, a);
      std::printf("%-6d %-18.8g %-12.4f %-10d %-14s\n", a, cap.value(eps), -cap.eps_power,
                  cap.log_power, cap.unknown_const ? "yes" : "no");
    } catch (const std::domain_error&) {
      std::printf("%-6d %-18s\n", a, "(no asymptote for this d, m, alpha)");
    }
  }
  return 0;
}

int cmd_field(int m, double lambda, double mu, double kappa, double eps,
              const std::string& bstar_str, const std::string& points_str) {
  LameParams p(lambda, mu, 2);
  InclusionPairGeometry g(2, m, kappa, eps, std::max(2.0 * eps, 0.4), OuterBoundary::disk(1e6));
  const auto bs = parse_list(bstar_str);
  if (static_cast<int>(bs.size()) != rigid_count(2))
    throw std::invalid_argument("field: --bstar needs 3 comma-separated values");
  Eigen::VectorXd b(3);
  for (int i = 0; i < 3; ++i) b(i) = bs[i];
  std::stringstream ss(points_str);
  std::string tok;
  std::printf("%-12s %-12s %-14s %-14s %-14s %-14s\n", "x1", "x2", "g11", "g12", "g21", "g22");
  while (std::getline(ss, tok, ';')) {
    const auto xy = parse_list(tok);
    if (xy.size() != 2) throw std::invalid_argument("field: points are x,y;x,y;...");
    const auto G = grad_u_asymptotic(p, g, b, Eigen::Vector2d(xy[0], xy[1]));
    std::printf("%-12.6g %-12.6g %-14.6g %-14.6g %-14.6g %-14.6g\n", xy[0], xy[1], G(0, 0),
                G(0, 1), G(1, 0), G(1, 1));
  }
  return 0;
}

int cmd_moduli(int m, double lambda, double mu, double L1, double L2, double kappa,
               const std::vector<double>& eps_list) {
  LameParams p(lambda, mu, 2);
  std::printf("%-10s %-16s %-16s   (E = %.6g, leading order, additive O(1) unresolved)\n", "eps",
              "mu_m*", "E_m*", p.young());
  for (double eps : eps_list) {
    const auto em = effective_moduli(p, m, L1, L2, kappa, eps);
    std::printf("%-10.5g %-16.8g %-16.8g\n", eps, em.mu_star, em.E_star);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stress-concentration asymptotics toolkit with a 2D FEM oracle"};
  app.require_subcommand(1);

  auto* qtab = app.add_subcommand("qtab", "print the Q_{d,m} profile-integral table");

  auto* capacity = app.add_subcommand("capacity", "leading capacity asymptotes a_11^{aa}");
  int cd = 2, cm = 2, calpha = 0;
  double clambda = 1.0, cmu = 1.0, ckappa = 1.0, ceps = 0.01;
  capacity->add_option("--d", cd, "dimension (2 or 3)");
  capacity->add_option("--m", cm, "convexity order");
  capacity->add_option("--lambda", clambda, "Lame lambda");
  capacity->add_option("--mu", cmu, "shear modulus");
  capacity->add_option("--kappa", ckappa, "relative convexity");
  capacity->add_option("--eps", ceps, "surface distance");
  capacity->add_option("--alpha", calpha, "single alpha (default: all)");

  auto* field = app.add_subcommand("field", "leading grad u prediction at points");
  int fm = 2;
  double flambda = 1.0, fmu = 1.0, fkappa = 1.0, feps = 0.01;
  std::string fbstar = "1,0,0", fpoints = "0,0";
  field->add_option("--m", fm, "convexity order");
  field->add_option("--lambda", flambda, "Lame lambda");
  field->add_option("--mu", fmu, "shear modulus");
  field->add_option("--kappa", fkappa, "relative convexity");
  field->add_option("--eps", feps, "surface distance");
  field->add_option("--bstar", fbstar, "blow-up factors b1,b2,b3");
  field->add_option("--points", fpoints, "points x,y;x,y;...");

  auto* sweep = app.add_subcommand("sweep", "run the FEM oracle sweep from a TOML config");
  std::string scfg, sout;
  int sjobs = 0;
  std::string seps;
  sweep->add_option("--config", scfg, "TOML config file")->required();
  sweep->add_option("--out", sout, "output directory (overrides [output].dir)");
  sweep->add_option("--jobs", sjobs, "parallel eps items");
  sweep->add_option("--eps-list", seps, "override eps ladder, comma separated");

  auto* moduli = app.add_subcommand("moduli", "extended Flaherty-Keller moduli table");
  int mm = 2;
  double mlambda = 1.0, mmu = 1.0, mL1 = 1.5, mL2 = 1.0, mkappa = 1.0;
  std::string meps = "0.08,0.04,0.02,0.01";
  moduli->add_option("--m", mm, "convexity order");
  moduli->add_option("--lambda", mlambda, "Lame lambda");
  moduli->add_option("--mu", mmu, "shear modulus");
  moduli->add_option("--L1", mL1, "cell half-length in x1");
  moduli->add_option("--L2", mL2, "cell half-length in x2");
  moduli->add_option("--kappa", mkappa, "fiber curvature at contact");
  moduli->add_option("--eps-list", meps, "eps values, comma separated");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::string vout = "acceptance_out";
  verify->add_option("--out", vout, "artifact directory");

  auto* rep = app.add_subcommand("report", "render the markdown report for a sweep directory");
  std::string rdir;
  rep->add_option("--results", rdir, "sweep output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (qtab->parsed()) return cmd_qtab();
    if (capacity->parsed()) return cmd_capacity(cd, cm, clambda, cmu, ckappa, ceps, calpha);
    if (field->parsed()) return cmd_field(fm, flambda, fmu, fkappa, feps, fbstar, fpoints);
    if (moduli->parsed())
      return cmd_moduli(mm, mlambda, mmu, mL1, mL2, mkappa, parse_list(meps));
    if (sweep->parsed()) {
      SweepConfig cfg = SweepConfig::from_toml_file(scfg);
      if (!sout.empty()) cfg.out_dir = sout;
      if (sjobs > 0) cfg.jobs = sjobs;
      if (!seps.empty()) {
        cfg.eps_list = parse_list(seps);
        cfg.validate();
      }
      const SweepResult res = run_sweep(cfg);
      write_sweep(res, cfg.out_dir);
      std::ofstream rf(cfg.out_dir + "/report.md");
      rf << report(cfg.out_dir);
      std::cout << "wrote " << res.rows.size() << " rows to " << cfg.out_dir << "\n";
      return 0;
    }
    if (verify->parsed()) {
      const auto results = run_acceptance(vout, std::cout);
      return all_passed(results) ? 0 : 1;
    }
    if (rep->parsed()) {
      std::cout << report(rdir);
      std::ofstream rf(rdir + "/report.md");
      rf << report(rdir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
