#include "gapstress/acceptance.hpp"
#include <cstdarg>
#include <fstream>
#include <functional>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "gapstress/asymptotics.hpp"
#include "gapstress/aux_fields.hpp"
#include "gapstress/fem.hpp"
#include "gapstress/fit.hpp"
#include "gapstress/meshgen.hpp"
#include "gapstress/quadrature.hpp"
#include "gapstress/sweep.hpp"

namespace gapstress {

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct Gate {
  std::vector<CriterionResult>& out;
  std::ostream& log;
  void add(int id, const std::string& name, bool pass, double seconds,
           const std::string& detail) {
    out.push_back({id, name, pass, seconds, detail});
    log << fmt("[%2d] %-4s %-38s (%7.2f s)  %s\n", id, pass ? "PASS" : "FAIL", name.c_str(),
               seconds, detail.c_str());
    log.flush();
  }
};

/// Constant-corrected power-law check of a sweep series against a leading
/// law; the additive O(1) is estimated first (least squares), as the
/// asymptotics module prescribes for unknown constants.
struct CorrectedFit {
  double exponent = 0.0;
  double ratio_raw = 0.0;        // value * law^-1 at the smallest eps
  double ratio_corrected = 0.0;  // after constant subtraction
  double constant = 0.0;
  bool trend_ok = false;
  bool fit_ok = false;
};

CorrectedFit corrected_fit(const std::vector<std::pair<double, double>>& series,
                           const std::function<double(double)>& law) {
  CorrectedFit out;
  if (series.size() < 3) return out;
  const auto cf = estimate_constants(series, law);
  out.constant = cf.constant;
  out.trend_ok = cf.residual_trend_ok;
  std::vector<std::pair<double, double>> corr;
  for (auto& [e, v] : series) corr.push_back({e, v - cf.constant});
  try {
    const auto fr = fit_rate(corr);
    out.exponent = fr.exponent;
    out.fit_ok = true;
  } catch (const std::exception&) {
    return out;
  }
  const double eps_min = series.back().first;
  out.ratio_raw = series.back().second / law(eps_min);
  out.ratio_corrected = corr.back().second / law(eps_min);
  return out;
}

SweepConfig disks_config(double lambda, double mu, const std::string& out_dir) {
  SweepConfig cfg;
  cfg.kind = "disks";
  cfg.r = 1.0;
  cfg.R_out = 3.0;
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.eps_list = {0.08, 0.04, 0.02, 0.01};
  cfg.phi = {"shear", "stretch"};
  cfg.levels = 2;
  cfg.h_target = 0.3;
  cfg.n_layers = 6;
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& out_dir, std::ostream& log) {
  std::vector<CriterionResult> results;
  Gate gate{results, log};

  // ---- 1. Q-integral closed forms ------------------------------------------
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    const std::pair<int, int> cases[] = {{2, 2}, {2, 3}, {2, 4}, {2, 6}, {3, 3}, {3, 4}, {3, 8}};
    for (auto [d, m] : cases)
      for (bool tilde : {false, true}) {
        if (!q_integral_convergent(d, m, tilde)) continue;
        worst = std::max(worst, std::abs(q_integral(d, m, tilde) - q_integral_closed(d, m, tilde)));
      }
    const double el = secs_since(t0);
    gate.add(1, "Q-integral closed forms", worst <= 1e-9 && el < 1.0, el,
             fmt("max |quadrature - closed| = %.2e", worst));
  }

  // ---- 2. corrector cancellation -------------------------------------------
  {
    const auto t0 = Clock::now();
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> uxp(-1.0, 1.0), ut(0.02, 0.98);
    const std::pair<double, double> lame[5] = {{1, 1}, {2, 0.5}, {0.3, 2.5}, {5, 1}, {-0.4, 1.2}};
    double worst = 0.0;
    for (const auto& [lam, mu] : lame) {
      LameParams p2(lam, mu, 2);
      LameParams p3(lam, mu, 3);
      InclusionPairGeometry g2(2, 2, 1.3, 0.01, 0.4, OuterBoundary::disk(3.0));
      InclusionPairGeometry g3(3, 2, 0.9, 0.01, 0.4, OuterBoundary::disk(3.0));
      VectorAuxField f2(p2, g2, 1);
      VectorAuxField f3(p3, g3, 1);
      for (int i = 0; i < 200; ++i) {
        {
          const double xp = 0.39 * uxp(rng);
          auto [lo, hi] = chart_bounds(g2, xp);
          Eigen::Vector2d x(xp, lo + ut(rng) * (hi - lo));
          const auto e = f2.eval(x);
          const double t1 = (lam + mu) * e.hess[0](0, 1);
          const double t2 = (lam + 2.0 * mu) * e.hess[1](1, 1);
          const double scale = std::max({std::abs(t1), std::abs(t2), 1e-300});
          worst = std::max(worst, std::abs(t1 + t2) / scale);
        }
        {
          const double xp = 0.39 * std::abs(uxp(rng));
          auto [lo, hi] = chart_bounds(g3, xp);
          const double th = 3.0 * uxp(rng);
          Eigen::Vector3d x(xp * std::cos(th), xp * std::sin(th), lo + ut(rng) * (hi - lo));
          const auto e = f3.eval(x);
          const double t1 = (lam + mu) * e.hess[0](2, 0);
          const double t2 = (lam + 2.0 * mu) * e.hess[2](2, 2);
          const double scale = std::max({std::abs(t1), std::abs(t2), 1e-300});
          worst = std::max(worst, std::abs(t1 + t2) / scale);
        }
      }
    }
    const double el = secs_since(t0);
    gate.add(2, "corrector cancellation identity", worst <= 1e-12 && el < 1.0, el,
             fmt("max relative residual = %.2e (2D and 3D)", worst));
  }

  // ---- 3. rigid-data exactness ----------------------------------------------
  {
    const auto t0 = Clock::now();
    auto geo = make_disks_geometry(1.0, 0.01, 3.0);
    MeshParams mp;
    mp.h_target = 0.3;
    mp.n_layers = 6;
    const Mesh mesh = build_mesh(geo, mp);
    const P2Space space(mesh);
    LameParams p(1.0, 1.0, 2);
    ElasticSystem rigid(space, p, BCSpec::rigid_inclusions(false));
    double worst_strain = 0.0, worst_c = 0.0;
    for (int alpha = 1; alpha <= 3; ++alpha) {
      auto sol = solve_full(rigid, [&](const Vector2d& x) {
        return phi_preset("rigid-" + std::to_string(alpha), x);
      });
      worst_strain = std::max(worst_strain, max_strain(space, sol.u));
      for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 3; ++a)
          worst_c = std::max(worst_c, std::abs(sol.C(i, a) - (a + 1 == alpha ? 1.0 : 0.0)));
    }
    const double el = secs_since(t0);
    gate.add(3, "rigid-data exactness", worst_strain <= 1e-8 && worst_c <= 1e-8 && el < 90.0, el,
             fmt("max |e(u)| = %.2e, max |C - unit| = %.2e", worst_strain, worst_c));
  }

  // ---- shared disk sweep (criteria 4, 5, 7, 8, 9, 11) -----------------------
  const auto sweep_t0 = Clock::now();
  SweepConfig cfgA = disks_config(1.0, 1.0, out_dir + "/disks_m2");
  SweepResult swA = run_sweep(cfgA);
  write_sweep(swA, cfgA.out_dir);
  SweepConfig cfgA2 = disks_config(2.0, 0.5, out_dir + "/disks_m2_mat2");
  SweepResult swA2 = run_sweep(cfgA2);
  write_sweep(swA2, cfgA2.out_dir);
  const double sweep_el = secs_since(sweep_t0);
  const double kappa = 1.0;

  // ---- 4. capacity rate (Prop 2.4 i) ----------------------------------------
  {
    const auto cf = corrected_fit(swA.series("a11_11"), [&](double e) {
      return M_PI * cfgA.mu / std::sqrt(kappa * e);
    });
    const bool pass = cf.fit_ok && cf.exponent >= -0.55 && cf.exponent <= -0.45 &&
                      cf.ratio_corrected >= 0.85 && cf.ratio_corrected <= 1.15 && cf.trend_ok &&
                      sweep_el < 600.0;
    gate.add(4, "capacity rate a11_11 (m=2)", pass, sweep_el,
             fmt("exponent %.4f, prefactor ratio %.4f (raw %.4f, O(1) const %.3f)", cf.exponent,
                 cf.ratio_corrected, cf.ratio_raw, cf.constant));
  }

  // ---- 5. capacity component anisotropy -------------------------------------
  {
    const auto t0 = Clock::now();
    bool pass = true;
    std::ostringstream detail;
    for (const SweepResult* sw : {&swA, &swA2}) {
      const LameParams p = sw->cfg.material();
      const auto c11 = corrected_fit(sw->series("a11_11"), [&](double e) {
        return M_PI * p.mu / std::sqrt(kappa * e);
      });
      const auto c22 = corrected_fit(sw->series("a11_22"), [&](double e) {
        return M_PI * p.lambda_2mu() / std::sqrt(kappa * e);
      });
      const double eps_min = sw->cfg.eps_list.back();
      const double a11 = sw->value_at("a11_11", eps_min) - c11.constant;
      const double a22 = sw->value_at("a11_22", eps_min) - c22.constant;
      const double target = p.lambda_2mu() / p.mu;
      const double ratio = (a22 / a11) / target;
      pass = pass && std::abs(ratio - 1.0) <= 0.10;
      detail << fmt("(l=%g,m=%g): a22/a11 vs (l+2m)/m ratio %.4f  ", p.lambda, p.mu, ratio);
    }
    gate.add(5, "capacity anisotropy a22/a11", pass, secs_since(t0) + sweep_el, detail.str());
  }

  // ---- 6. m-convex rate (superellipse, m=4) ---------------------------------
  {
    const auto t0 = Clock::now();
    SweepConfig cfgB;
    cfgB.kind = "superellipse";
    cfgB.m = 4;
    cfgB.a = 1.0;
    cfgB.b = 1.0;
    cfgB.R_out = 3.0;
    cfgB.eps_list = {0.08, 0.04, 0.02, 0.01};
    cfgB.phi = {"shear"};
    cfgB.levels = 2;
    cfgB.h_target = 0.3;
    cfgB.n_layers = 6;
    cfgB.out_dir = out_dir + "/superellipse_m4";
    SweepResult swB = run_sweep(cfgB);
    write_sweep(swB, cfgB.out_dir);
    const double kap4 = 2.0 * cfgB.b / (cfgB.m * std::pow(cfgB.a, cfgB.m));
    const double Q = q_integral_closed(2, 4);
    const auto cf = corrected_fit(swB.series("a11_11"), [&](double e) {
      return cfgB.mu * Q / (std::pow(kap4, 0.25) * std::pow(e, 0.75));
    });
    const double el = secs_since(t0);
    const bool pass = cf.fit_ok && cf.exponent >= -0.80 && cf.exponent <= -0.70 &&
                      std::abs(cf.ratio_corrected - 1.0) <= 0.20 && el < 600.0;
    gate.add(6, "m-convex capacity rate (m=4)", pass, el,
             fmt("exponent %.4f (target -0.75), prefactor ratio %.4f (raw %.4f)", cf.exponent,
                 cf.ratio_corrected, cf.ratio_raw));
  }

  // ---- 7. blow-up factor convergence ----------------------------------------
  {
    bool pass = true;
    std::ostringstream detail;
    const struct {
      const char* q;
      const char* label;
    } checks[] = {{"b1_1_shear", "beta=1 shear"}, {"b1_2_stretch", "beta=2 stretch"}};
    for (const auto& c : checks) {
      auto ser = swA.series(c.q);
      std::vector<std::pair<double, double>> cauchy;
      for (size_t i = 0; i + 1 < ser.size(); ++i)
        cauchy.push_back({ser[i].first, std::abs(ser[i].second - ser[i + 1].second)});
      double rate = 0.0;
      try {
        rate = fit_rate(cauchy).exponent;
      } catch (const std::exception&) {
        pass = false;
      }
      pass = pass && rate >= 0.4;
      detail << fmt("%s rate %.3f  ", c.label, rate);
    }
    gate.add(7, "blow-up factor Cauchy decay", pass, sweep_el, detail.str());
  }

  // ---- 8. gradient asymptotics at the gap center ----------------------------
  {
    bool pass = true;
    std::ostringstream detail;
    const struct {
      const char* preset;
      const char* entry;
    } checks[] = {{"shear", "12"}, {"stretch", "22"}};
    for (const auto& c : checks) {
      std::vector<double> rel;
      for (double eps : cfgA.eps_list) {
        const double oracle =
            swA.value_at(std::string("gradu") + c.entry + "_" + c.preset, eps);
        const double pred = swA.value_at(std::string("pred") + c.entry + "_" + c.preset, eps);
        rel.push_back(std::abs(pred - oracle) / std::max(1e-300, std::abs(oracle)));
      }
      int improving = 0;
      for (size_t i = 0; i + 1 < rel.size(); ++i)
        if (rel[i + 1] < rel[i]) ++improving;
      pass = pass && rel.back() <= 0.20 && improving >= 2;
      detail << fmt("%s(%s): rel@0.01 %.3f improving %d/3  ", c.preset, c.entry, rel.back(),
                    improving);
    }
    gate.add(8, "gradient asymptotics at x=0", pass, sweep_el, detail.str());
  }

  // ---- 9. bounded difference (Theorem 2.3) ----------------------------------
  {
    auto diff = swA.series("max_grad_diff_v11_aux");
    auto grad = swA.series("max_grad_v11");
    double diff_growth = 0.0, grad_growth = 0.0;
    for (auto& [e, v] : diff) diff_growth = std::max(diff_growth, v / diff.front().second);
    grad_growth = grad.back().second / grad.front().second;
    const bool pass = diff_growth <= 2.0 && grad_growth >= 2.5;
    gate.add(9, "bounded difference grad(v11 - u11)", pass, sweep_el,
             fmt("difference growth %.2fx, gradient growth %.2fx", diff_growth, grad_growth));
  }

  // ---- 10. effective moduli (Flaherty-Keller) --------------------------------
  {
    const auto t0 = Clock::now();
    SweepConfig cfgC;
    cfgC.kind = "cell";
    cfgC.L1 = 1.5;
    cfgC.L2 = 1.0;
    cfgC.eps_list = {0.08, 0.04, 0.02, 0.01};
    cfgC.phi = {"shear"};
    cfgC.levels = 2;
    cfgC.h_target = 0.25;
    cfgC.n_layers = 6;
    cfgC.out_dir = out_dir + "/cell_m2";
    SweepResult swC = run_sweep(cfgC);
    write_sweep(swC, cfgC.out_dir);
    auto kap = [&](double e) { return 1.0 / (cfgC.L2 - 0.5 * e); };
    const auto cf = corrected_fit(swC.series("mu_star"), [&](double e) {
      return cfgC.mu * (cfgC.L2 / cfgC.L1) * M_PI / std::sqrt(kap(e) * e);
    });
    const double el = secs_since(t0);
    const bool pass = cf.fit_ok && cf.exponent >= -0.55 && cf.exponent <= -0.45 &&
                      std::abs(cf.ratio_corrected - 1.0) <= 0.15 && el < 600.0;
    gate.add(10, "effective shear modulus rate", pass, el,
             fmt("exponent %.4f, prefactor ratio %.4f (raw %.4f)", cf.exponent,
                 cf.ratio_corrected, cf.ratio_raw));
  }

  // ---- 11. cross-path consistency of the free constants ---------------------
  {
    double worst = 0.0;
    for (const SweepResult* sw : {&swA, &swA2})
      for (const auto& r : sw->rows)
        if (r.quantity.rfind("ccross_err", 0) == 0) worst = std::max(worst, r.value);
    gate.add(11, "free constants: two code paths", worst <= 1e-8, sweep_el,
             fmt("max relative difference %.2e", worst));
  }

  // ---- 12. 3D formula consistency -------------------------------------------
  {
    const auto t0 = Clock::now();
    std::mt19937 rng(7771);
    std::uniform_real_distribution<double> ul(0.2, 3.0), uk(0.3, 2.5), ue(1e-4, 0.05);
    const int ms[] = {4, 5, 6, 8};
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const double mu = ul(rng), lam = ul(rng) - 0.5;
      LameParams p(lam, mu, 3);
      InclusionPairGeometry g(3, ms[rep % 4], uk(rng), ue(rng), 0.4, OuterBoundary::disk(3.0));
      for (int alpha = 1; alpha <= 6; ++alpha) {
        const double ta = theorem_gradient_coefficient(p, g, alpha);
        const double tb = 1.0 / a11_leading(p, g, alpha).value(g.eps);
        worst = std::max(worst, std::abs(ta - tb) / std::abs(tb));
      }
    }
    // recorded isotropic-reduction relation of the anisotropy example
    double worst_iso = 0.0;
    {
      const double r2 = anisotropy(2, 1.0, 1.0).isotropic_ratio_main() - 1.0;
      const double r3 = anisotropy(3, 1.0, 1.0).isotropic_ratio_main() -
                        3.0 * M_PI / (4.0 * beta_fn(1.0 / 3.0, 1.0 / 3.0));
      const double r4 = anisotropy(4, 1.0, 1.0).isotropic_ratio_main() -
                        2.0 * M_PI / beta_fn(0.25, 0.25);
      const double rt4 = anisotropy(4, 1.0, 1.0).isotropic_ratio_tilde() - 1.0 / std::sqrt(2.0);
      const double rt6 = anisotropy(6, 1.0, 1.0).isotropic_ratio_tilde() -
                         6.0 * M_PI / (4.0 * beta_fn(1.0 / 6.0, 0.5));
      for (double v : {r2, r3, r4, rt4, rt6}) worst_iso = std::max(worst_iso, std::abs(v));
    }
    const double el = secs_since(t0);
    gate.add(12, "3D formula consistency", worst <= 1e-12 && worst_iso <= 1e-9, el,
             fmt("coefficients %.2e, G_m relation %.2e", worst, worst_iso));
  }

  // reports for the written sweeps
  for (const std::string sub : {"/disks_m2", "/superellipse_m4", "/cell_m2"}) {
    try {
      const std::string text = report(out_dir + sub);
      std::ofstream f(out_dir + sub + "/report.md");
      f << text;
    } catch (const std::exception& e) {
      log << "report generation failed for " << sub << ": " << e.what() << "\n";
    }
  }
  return results;
}

}  // namespace gapstress
