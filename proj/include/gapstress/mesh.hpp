#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace gapstress {

/// Boundary tags used by the oracle meshes.
enum BoundaryTag : int {
  kTagOuter = 1,     // outer Dirichlet boundary of the two-inclusion domain
  kTagInc1 = 2,      // upper inclusion
  kTagInc2 = 3,      // lower inclusion
  kTagCellTop = 4,   // period-cell top edge (moves with the upper row)
  kTagCellBottom = 5,
  kTagCellSide = 6,  // traction-free vertical sides
};

struct Mesh {
  std::vector<Eigen::Vector2d> nodes;
  struct Tri {
    std::array<int, 3> v;
    int region = 0;
  };
  std::vector<Tri> tris;
  struct BEdge {
    int a = 0, b = 0;
    int tag = 0;
  };
  std::vector<BEdge> edges;
  int gap_layers = 0;

  double signed_area(int t) const;
  double min_angle_deg(int t) const;
  /// Smallest angle over all triangles whose centroid satisfies the predicate.
  template <typename Pred>
  double min_angle_where(Pred&& pred) const {
    double best = 180.0;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      const Eigen::Vector2d c =
          (nodes[tris[t].v[0]] + nodes[tris[t].v[1]] + nodes[tris[t].v[2]]) / 3.0;
      if (pred(c)) best = std::min(best, min_angle_deg(t));
    }
    return best;
  }
};

/// Plain-text export: NODES/TRIS/EDGES sections, 17 significant digits.
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(const std::string& path);

/// Checks conformity: consistent orientation, positive areas, every interior
/// edge shared by exactly two triangles, boundary edges matching the edge
/// list.  Throws std::runtime_error on violation.
void check_mesh(const Mesh& mesh);

}  // namespace gapstress
