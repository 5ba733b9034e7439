#include "gapstress/core.hpp"

#include <cmath>

namespace gapstress {

LameParams::LameParams(double lambda_, double mu_, int d_)
    : lambda(lambda_), mu(mu_), d(d_) {
  if (d != 2 && d != 3) throw std::invalid_argument("LameParams: d must be 2 or 3");
  if (!(mu > 0.0) || !(d * lambda + 2.0 * mu > 0.0))
    throw std::invalid_argument("LameParams: ellipticity requires mu>0 and d*lambda+2*mu>0");
  if (!std::isfinite(lambda) || !std::isfinite(mu))
    throw std::invalid_argument("LameParams: non-finite constants");
}

RigidMotion::RigidMotion(int dim, int alpha) : dim_(dim), alpha_(alpha) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("RigidMotion: dim must be 2 or 3");
  if (alpha < 1 || alpha > rigid_count(dim))
    throw std::invalid_argument("RigidMotion: alpha out of range");
  offset_ = Eigen::VectorXd::Zero(dim);
  skew_ = Eigen::MatrixXd::Zero(dim, dim);
  if (alpha <= dim) {
    offset_(alpha - 1) = 1.0;
  } else {
    // rotations x_j e_k - x_k e_j in lexicographic (j,k), j < k, 1-based
    int idx = alpha - dim - 1;
    int j = -1, k = -1, c = 0;
    for (int jj = 0; jj < dim && j < 0; ++jj)
      for (int kk = jj + 1; kk < dim; ++kk)
        if (c++ == idx) { j = jj; k = kk; break; }
    // psi = x_j e_k - x_k e_j  =>  d psi^k / d x_j = 1, d psi^j / d x_k = -1
    skew_(k, j) = 1.0;
    skew_(j, k) = -1.0;
  }
}

Eigen::VectorXd RigidMotion::value(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("RigidMotion::value: dimension mismatch");
  return offset_ + skew_ * x;
}

Eigen::MatrixXd RigidMotion::gradient() const { return skew_; }

std::vector<RigidMotion> rigid_basis(int d) {
  if (d != 2 && d != 3) throw std::invalid_argument("rigid_basis: unsupported dimension");
  std::vector<RigidMotion> basis;
  for (int a = 1; a <= rigid_count(d); ++a) basis.emplace_back(d, a);
  return basis;
}

double energy_density(const LameParams& p, const Matrix2d& gu, const Matrix2d& gv) {
  if (p.d != 2) throw std::invalid_argument("energy_density: params are not 2D");
  const double du = gu(0, 0) + gu(1, 1);
  const double dv = gv(0, 0) + gv(1, 1);
  return p.lambda * du * dv +
         p.mu * (2.0 * gu(0, 0) * gv(0, 0) + 2.0 * gu(1, 1) * gv(1, 1) +
                 (gu(0, 1) + gu(1, 0)) * (gv(0, 1) + gv(1, 0)));
}

double energy_density(const LameParams& p, const Matrix3d& gu, const Matrix3d& gv) {
  if (p.d != 3) throw std::invalid_argument("energy_density: params are not 3D");
  const double du = gu(0, 0) + gu(1, 1) + gu(2, 2);
  const double dv = gv(0, 0) + gv(1, 1) + gv(2, 2);
  return p.lambda * du * dv +
         p.mu * (2.0 * gu(0, 0) * gv(0, 0) + 2.0 * gu(1, 1) * gv(1, 1) +
                 2.0 * gu(2, 2) * gv(2, 2) +
                 (gu(0, 1) + gu(1, 0)) * (gv(0, 1) + gv(1, 0)) +
                 (gu(0, 2) + gu(2, 0)) * (gv(0, 2) + gv(2, 0)) +
                 (gu(1, 2) + gu(2, 1)) * (gv(1, 2) + gv(2, 1)));
}

namespace {
template <typename Mat, typename Vec>
Vec traction_impl(const LameParams& p, const Mat& gu, const Vec& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("traction: normal is not unit length");
  return p.lambda * gu.trace() * n + p.mu * ((gu + gu.transpose()) * n);
}
}  // namespace

Vector2d traction(const LameParams& p, const Matrix2d& gu, const Vector2d& n) {
  if (p.d != 2) throw std::invalid_argument("traction: params are not 2D");
  return traction_impl(p, gu, n);
}

Vector3d traction(const LameParams& p, const Matrix3d& gu, const Vector3d& n) {
  if (p.d != 3) throw std::invalid_argument("traction: params are not 3D");
  return traction_impl(p, gu, n);
}

}  // namespace gapstress
