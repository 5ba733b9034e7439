#include "gapstress/geometry.hpp"

#include <cmath>

namespace gapstress {

InclusionPairGeometry::InclusionPairGeometry(int d_, int m_, double kappa_, double eps_,
                                             double R_, OuterBoundary outer_,
                                             double kappa_prime_, double gamma_)
    : d(d_),
      m(m_),
      kappa(kappa_),
      kappa_prime(kappa_prime_ > 0.0 ? kappa_prime_ : kappa_),
      eps(eps_),
      R(R_),
      gamma(gamma_),
      outer(outer_) {
  validate();
}

void InclusionPairGeometry::validate() const {
  if (d != 2 && d != 3) throw std::invalid_argument("geometry: d must be 2 or 3");
  if (m < 2) throw std::invalid_argument("geometry: m must be >= 2");
  if (!(kappa > 0.0) || !(kappa_prime > 0.0))
    throw std::invalid_argument("geometry: kappa must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("geometry: eps must be positive");
  if (!(eps < R)) throw std::invalid_argument("geometry: require eps < R");
  if (!(R < outer.size())) throw std::invalid_argument("geometry: require R < outer size");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("geometry: gamma in (0,1)");
}

double surface_chart(const InclusionPairGeometry& g, int inclusion, double xp) {
  if (inclusion != 1 && inclusion != 2)
    throw std::invalid_argument("surface_chart: inclusion index must be 1 or 2");
  if (std::abs(xp) > 2.0 * g.R) throw std::out_of_range("surface_chart: |x'| > 2R");
  const double h = 0.5 * g.kappa * std::pow(std::abs(xp), g.m);
  return inclusion == 1 ? h : -h;
}

double gap(const InclusionPairGeometry& g, double xp) {
  if (std::abs(xp) > 2.0 * g.R) throw std::out_of_range("gap: |x'| > 2R");
  return g.eps + g.kappa * std::pow(std::abs(xp), g.m);
}

std::pair<double, double> chart_bounds(const InclusionPairGeometry& g, double xp) {
  const double h = 0.5 * g.kappa * std::pow(std::abs(xp), g.m);
  return {-0.5 * g.eps - h, 0.5 * g.eps + h};
}

InclusionPairGeometry disks_to_model(double r1, double r2, double eps, double R_outer) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw std::invalid_argument("disks_to_model: radii must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("disks_to_model: eps must be positive");
  // centers at (0, +-(r_i + eps/2)); require clearance to the outer circle
  const double topmost = eps / 2.0 + 2.0 * std::max(r1, r2);
  if (!(R_outer > topmost + 0.05 * R_outer))
    throw std::invalid_argument("disks_to_model: inclusions do not fit in the outer disk");
  const double kappa = 0.5 / r1 + 0.5 / r2;
  const double R = 0.4 * std::min(std::min(r1, r2), 1.0);
  return InclusionPairGeometry(2, 2, kappa, eps, R, OuterBoundary::disk(R_outer));
}

std::vector<Eigen::VectorXd> narrow_region_samples(const InclusionPairGeometry& g, int n) {
  if (n < 1) throw std::invalid_argument("narrow_region_samples: n must be >= 1");
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(n);

  const double ridge = std::pow(g.eps, 1.0 / g.m);
  auto push = [&](double xp, double t, double theta) {
    if (static_cast<int>(pts.size()) >= n) return;
    auto [lo, hi] = chart_bounds(g, xp);
    const double xd = lo + t * (hi - lo);
    Eigen::VectorXd x(g.d);
    if (g.d == 2) {
      x << xp, xd;
    } else {
      x << xp * std::cos(theta), xp * std::sin(theta), xd;
    }
    pts.push_back(x);
  };

  push(0.0, 0.5, 0.0);  // gap midpoint

  // ridge coverage: |x'| around eps^{1/m}
  const int n_ridge = std::max(1, n / 10);
  for (int i = 0; i < n_ridge && static_cast<int>(pts.size()) < n; ++i) {
    const double s = n_ridge == 1 ? 1.0 : 0.6 + 1.2 * double(i) / double(n_ridge - 1);
    const double xp = std::min(s * ridge, std::min(2.0 * ridge, 0.95 * g.R));
    push(xp, 0.5, 0.3 * i);
  }

  // vertical segment x' = 0
  for (int i = 0; i < 3 && static_cast<int>(pts.size()) < n; ++i)
    push(0.0, 0.25 + 0.25 * i, 0.0);

  // fill: columns sweeping |x'| <= R at interior heights
  int k = 0;
  const double heights[3] = {0.3, 0.5, 0.7};
  while (static_cast<int>(pts.size()) < n) {
    const int cols = (n - 4) / 3 + 2;
    const double frac = double(k % cols + 1) / double(cols + 1);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    push(sign * frac * 0.95 * g.R, heights[k % 3], 0.7 * k);
    ++k;
  }
  return pts;
}

}  // namespace gapstress
