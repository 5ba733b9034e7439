#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gapstress/core.hpp"
#include "gapstress/geometry.hpp"

namespace gapstress {

/// Evaluation bundle for a vector field: value, gradient G(i,j) = d_j u^i and
/// one Hessian per component.
struct FieldEval {
  Eigen::VectorXd value;
  Eigen::MatrixXd grad;
  std::vector<Eigen::MatrixXd> hess;
};

struct ScalarEval {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// Bridge profile f(t) = (t - 1/2)^2/2 - 1/8 and its derivative.
/// f(0) = f(1) = 0, minimum -1/8 at t = 1/2.
double bridge(double t);
double bridge_deriv(double t);

/// Scalar keel ubar = (x_d + eps/2 - h2(x'))/delta(x') on the model profile:
/// 1 on the upper chart, 0 on the lower one, d_{x_d} ubar = 1/delta exactly.
/// With mirror set it evaluates the lower-inclusion analogue 1 - ubar.
class ScalarKeel {
 public:
  ScalarKeel(const InclusionPairGeometry& g, bool mirror = false);

  /// Exact value/gradient/Hessian.  Throws if x leaves Omega_{2R}.
  ScalarEval eval(const Eigen::VectorXd& x) const;

  const InclusionPairGeometry& geometry() const { return g_; }
  bool mirrored() const { return mirror_; }

 private:
  InclusionPairGeometry g_;
  bool mirror_;
};

/// Corrected vector auxiliary field u_1^alpha (u_2^alpha with mirror set):
/// keel part ubar psi_alpha plus the Lame-weighted corrector built from
/// f(ubar) and the gap-profile slope.  For alpha > d the corrector vanishes.
class VectorAuxField {
 public:
  VectorAuxField(const LameParams& p, const InclusionPairGeometry& g, int alpha,
                 bool mirror = false);

  /// Value and exact first derivatives.  Throws for x outside Omega_{2R}.
  FieldEval eval(const Eigen::VectorXd& x) const;

  /// (L_{lambda,mu} u_1^alpha)(x) from the exact second derivatives.
  /// Requires x in Omega_R.
  Eigen::VectorXd lame_residual(const Eigen::VectorXd& x) const;

  int alpha() const { return alpha_; }
  const LameParams& params() const { return p_; }
  const InclusionPairGeometry& geometry() const { return g_; }

 private:
  LameParams p_;
  InclusionPairGeometry g_;
  int alpha_;
  bool mirror_;
};

/// Applies the Lame operator L u = mu Laplacian u + (lambda+mu) grad div u to
/// an evaluated field (uses the Hessians only).
Eigen::VectorXd lame_operator(const LameParams& p, const FieldEval& f);

}  // namespace gapstress
