#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace gapstress {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

/// Isotropic Lame constants for the background material, with the spatial
/// dimension they are used in.  Construction enforces the ellipticity
/// condition mu > 0, d*lambda + 2*mu > 0.
struct LameParams {
  double lambda;
  double mu;
  int d;

  LameParams(double lambda_, double mu_, int d_);

  double lambda_2mu() const { return lambda + 2.0 * mu; }
  /// Young-type combination E = mu(3 lambda + 2 mu)/(lambda + mu).
  double young() const { return mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu); }
};

/// One element of the rigid-displacement basis: translations e_i followed by
/// the rotations x_j e_k - x_k e_j, j < k.  alpha is 1-based.
class RigidMotion {
 public:
  RigidMotion(int dim, int alpha);

  int dim() const { return dim_; }
  int alpha() const { return alpha_; }

  Eigen::VectorXd value(const Eigen::VectorXd& x) const;
  /// Constant gradient matrix, entry (i,j) = d_j psi^i.  Always skew.
  Eigen::MatrixXd gradient() const;

 private:
  int dim_;
  int alpha_;
  Eigen::VectorXd offset_;   // constant part
  Eigen::MatrixXd skew_;     // linear part
};

/// The full basis of Psi: 3 motions for d=2, 6 for d=3.
std::vector<RigidMotion> rigid_basis(int d);

inline int rigid_count(int d) { return d * (d + 1) / 2; }

/// Symmetric part of a displacement gradient.
template <typename Mat>
Mat strain(const Mat& grad_u) {
  return 0.5 * (grad_u + grad_u.transpose());
}

/// Bilinear energy density (C0 e(u), e(v)) written out as the expanded
/// scalar identity, entry convention G(i,j) = d_{x_j} u^i.
double energy_density(const LameParams& p, const Matrix2d& gu, const Matrix2d& gv);
double energy_density(const LameParams& p, const Matrix3d& gu, const Matrix3d& gv);

/// Conormal traction (C0 e(u)) n = lambda (div u) n + mu (grad u + grad u^T) n.
/// Throws if |n| deviates from 1 by more than 1e-12.
Vector2d traction(const LameParams& p, const Matrix2d& gu, const Vector2d& n);
Vector3d traction(const LameParams& p, const Matrix3d& gu, const Vector3d& n);

}  // namespace gapstress
