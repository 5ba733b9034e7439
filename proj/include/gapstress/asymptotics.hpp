#pragma once

#include <Eigen/Dense>
#include <optional>

#include "gapstress/aux_fields.hpp"
#include "gapstress/core.hpp"
#include "gapstress/geometry.hpp"

namespace gapstress {

/// Profile integrals Q_{d,m} = 2 int_0^inf t^{d-2}/(1+t^m) dt and the tilde
/// variant with t^d.  Convergent iff m > d-1 (resp. m > d+1).
bool q_integral_convergent(int d, int m, bool tilde);

/// Adaptive-quadrature value, split at t=1 with the tail mapped to [0,1].
/// Absolute error <= 1e-10.  Throws on divergent parameters.
double q_integral(int d, int m, bool tilde = false);

/// Closed form 2 pi / (m sin(s pi / m)), s = d-1 (d+1 for tilde).
double q_integral_closed(int d, int m, bool tilde = false);

/// Rate functions of the asymptotic statements.  Entries that the case
/// tables do not define for the given (d, m) are NaN; entries the tables list
/// as "0" are exact zeros.
struct RateFunctions {
  double rho_d;    // sqrt(eps) for d=2, 1/|log eps| for d=3
  double rho_md;   // relative-error rate of the m-convex theorems
  double E;        // d=2 rotation-channel prefactor E(kappa, eps, m)
  double F;        // d=3 rotation-channel prefactor F(kappa, eps, m)
};

RateFunctions rate(int d, int m, double eps, double kappa);

/// Leading term of the elastic capacity a_11^{alpha alpha}:
/// value(eps) = coeff * eps^{-eps_power} * |log eps|^{log_power}.
struct CapacityAsymptote {
  int alpha = 0;
  double coeff = 0.0;
  double eps_power = 0.0;
  int log_power = 0;
  bool unknown_const = false;  // an additive O(1)/constant exists but is not known

  double value(double eps) const;
};

/// Covered cases: d=2 (m=2: alpha=1,2; m>=3: alpha=1..3) and
/// d=3 (m=2: alpha=1..3; m>=3: alpha=1..3; m>=4: alpha=1..6).
/// Throws std::domain_error for uncovered (d, m, alpha).
CapacityAsymptote a11_leading(const LameParams& p, const InclusionPairGeometry& g, int alpha);

/// True if the symmetric-case theorems force C_1^alpha = C_2^alpha instead of
/// providing an a_11 asymptote (the entry of c_diff_leading is then zero).
bool c_diff_vanishes(int d, int m, int alpha);

/// Leading values of C_1^alpha - C_2^alpha = b_1^{*alpha}/a_11^{alpha alpha}.
Eigen::VectorXd c_diff_leading(const LameParams& p, const InclusionPairGeometry& g,
                               const Eigen::VectorXd& bstar);

/// The coefficient multiplying b_1^{*alpha} grad u_1^alpha in the displayed
/// gradient theorems, written from the theorem-side prefactors.  Agrees with
/// 1/a11_leading identically.
double theorem_gradient_coefficient(const LameParams& p, const InclusionPairGeometry& g,
                                    int alpha);

/// Leading-term prediction of grad u at x: sum of c_diff entries times the
/// exact auxiliary-field gradients.
Eigen::MatrixXd grad_u_asymptotic(const LameParams& p, const InclusionPairGeometry& g,
                                  const Eigen::VectorXd& bstar, const Eigen::VectorXd& x);

/// Single-column blow-up matrix B_d[phi] assembled from the blow-up factors.
Eigen::MatrixXd blowup_matrix(const LameParams& p, int d, const Eigen::VectorXd& bstar);

/// Anisotropy integrals of the |x1|^m, |x2|^m profile example.
struct AnisotropyIntegrals {
  int m;
  double kappa;
  double kappa_prime;
  double G;        // int_0^{2pi} E_m
  double G_tilde;  // int_0^{2pi} E_m F_m

  double integrand_E(double theta) const;
  double integrand_F(double theta) const;

  /// Replacement for the main-channel geometry factor:
  /// m=2 -> sqrt(kappa kappa'); m=3 -> 3 (kappa kappa')^{1/3} / (2 G_3);
  /// m>=4 -> m (kappa kappa')^{1/m} / G_m.
  double coeff_main() const;
  /// Replacement for kappa^{4/m}/pi in the rotation channel, m >= 4.
  double coeff_tilde() const;

  /// Observed ratio of coeff_main at kappa = kappa' against the isotropic
  /// profile coefficient of the radial theorems (kappa^{2/m}/pi form); equals
  /// 1 only for m = 2.  Recorded, not asserted.
  double isotropic_ratio_main() const;
  double isotropic_ratio_tilde() const;
};

AnisotropyIntegrals anisotropy(int m, double kappa, double kappa_prime);

/// Extended Flaherty-Keller leading-order effective moduli of the period
/// cell; both carry an unresolved additive O(1).
struct EffectiveModuli {
  double mu_star;
  double E_star;
  double young;  // E = mu(3 lambda + 2 mu)/(lambda + mu)
  double L1, L2;
  bool unknown_const = true;
};

EffectiveModuli effective_moduli(const LameParams& p, int m, double L1, double L2,
                                 double kappa, double eps);

}  // namespace gapstress
