#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace gapstress {

/// Outer boundary of the matrix domain: a disk or a rectangle (half-lengths).
struct OuterBoundary {
  enum class Kind { Disk, Rect };
  Kind kind = Kind::Disk;
  double radius = 0.0;  // Disk
  double hx = 0.0;      // Rect half-length in x1
  double hy = 0.0;      // Rect half-length in x2

  static OuterBoundary disk(double r) {
    OuterBoundary b;
    b.kind = Kind::Disk;
    b.radius = r;
    return b;
  }
  static OuterBoundary rect(double hx, double hy) {
    OuterBoundary b;
    b.kind = Kind::Rect;
    b.hx = hx;
    b.hy = hy;
    return b;
  }
  double size() const { return kind == Kind::Disk ? radius : std::min(hx, hy); }
};

/// m-convex inclusion pair in near-contact position.  The model gap profile
/// is delta(x') = eps + kappa |x'|^m with kappa_1 = kappa_2 = kappa/2;
/// kappa_prime only enters the anisotropic 3D profile of the example
/// integrals.
struct InclusionPairGeometry {
  int d = 2;
  int m = 2;
  double kappa = 1.0;
  double kappa_prime = 1.0;
  double eps = 0.01;
  double R = 0.4;
  double gamma = 0.9;
  OuterBoundary outer = OuterBoundary::disk(3.0);

  InclusionPairGeometry() = default;
  InclusionPairGeometry(int d_, int m_, double kappa_, double eps_, double R_,
                        OuterBoundary outer_, double kappa_prime_ = -1.0,
                        double gamma_ = 0.9);

  void validate() const;
};

/// Model surface chart h_i: (-1)^{i+1} (kappa/2) |x'|^m, remainders zero.
/// xp is the transverse coordinate (d=2) or |x'| (d=3).
double surface_chart(const InclusionPairGeometry& g, int inclusion, double xp);

/// Model gap profile delta(x') = eps + kappa |x'|^m.
double gap(const InclusionPairGeometry& g, double xp);

/// Vertical bounds of the narrow region at x': (lower chart, upper chart),
/// i.e. -eps/2 + h2 and eps/2 + h1.
std::pair<double, double> chart_bounds(const InclusionPairGeometry& g, double xp);

/// Maps two circular inclusions of radii r1, r2 at surface distance eps inside
/// an outer disk onto the m=2 model: kappa_i = 1/(2 r_i).
InclusionPairGeometry disks_to_model(double r1, double r2, double eps, double R_outer);

/// Deterministic sample points strictly inside the narrow region Omega_R.
/// Always contains the gap midpoint, points on the vertical segment x'=0 and
/// at least max(1, n/10) points with |x'| in [eps^{1/m}/2, 2 eps^{1/m}].
/// For d=3 the transverse coordinate is distributed over directions.
std::vector<Eigen::VectorXd> narrow_region_samples(const InclusionPairGeometry& g, int n);

}  // namespace gapstress
