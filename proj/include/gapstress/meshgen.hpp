#pragma once

#include "gapstress/geometry.hpp"
#include "gapstress/mesh.hpp"

namespace gapstress {

/// Concrete inclusion shapes realizing an InclusionPairGeometry for the 2D
/// oracle.  The pair is always mirror-symmetric in both axes; the true charts
/// carry the full remainder terms (circles, superellipses).
struct OracleGeometry {
  enum class Kind { DisksInDisk, SuperellipseInDisk, PeriodCell };
  Kind kind = Kind::DisksInDisk;
  InclusionPairGeometry model;  // abstract m-convex model realized by the shapes

  double r = 1.0;             // disk radius (DisksInDisk / PeriodCell)
  double a = 1.0, b = 1.0;    // superellipse semi-axes
  double R_out = 3.0;         // outer disk radius
  double L1 = 1.5, L2 = 1.0;  // period-cell half-lengths

  double eps() const { return model.eps; }
  /// x2 of the upper inclusion boundary over the contact chart (true shape).
  double upper_chart(double x1) const;
  /// Half-width of the structured gap block.
  double chart_halfwidth() const;
  /// Domain diameter scale used for degeneracy checks.
  double diameter() const;
};

OracleGeometry make_disks_geometry(double r, double eps, double R_out);
OracleGeometry make_superellipse_geometry(int m, double a, double b, double eps, double R_out);
OracleGeometry make_cell_geometry(double L1, double L2, double eps);

/// Realizes the abstract model: disk outer with m=2 -> equal disks of radius
/// 1/kappa; disk outer with m>=3 -> superellipses; rectangular outer -> the
/// period cell (m=2).
OracleGeometry realize(const InclusionPairGeometry& g);

struct MeshParams {
  double h_target = 0.3;    // far-field element size
  int n_layers = 6;         // layers across the gap (rounded up to even)
  double col_aspect = 2.0;  // gap column width ~ aspect * delta / n_layers
  double refine = 1.0;      // >1 refines everything proportionally
};

Mesh build_mesh(const OracleGeometry& geo, const MeshParams& mp);

/// Spec-facing wrapper on the abstract geometry.
Mesh build_mesh(const InclusionPairGeometry& g, double h_target, int n_layers);

}  // namespace gapstress
