#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

namespace gapstress {

/// Incremental constrained Delaunay triangulation with conservative quality
/// refinement.  Intended for simple polygonal regions whose boundary points
/// are supplied pre-graded; constrained segments are never split.
class Delaunay {
 public:
  /// box must strictly contain every point ever inserted.
  Delaunay(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);

  /// Inserts a point, returns its index.  Coincident points (within 1e-13 of
  /// an existing vertex) return the existing index.
  int insert(const Eigen::Vector2d& p);

  /// Registers segment (a, b) as constrained, restoring it by edge flips.
  void constrain(int a, int b);

  /// Classifies triangles: everything reachable from the bounding corners or
  /// from a hole seed without crossing a constrained edge is outside.
  void classify(const std::vector<Eigen::Vector2d>& hole_seeds = {});

  /// Inserts circumcenters of interior triangles until every interior
  /// triangle satisfies both the size field and the min-angle quality bound.
  /// Points encroaching a constrained segment are skipped.
  void refine(const std::function<double(const Eigen::Vector2d&)>& size_field,
              double min_angle_deg = 25.0, int max_inserts = 400000);

  struct Extracted {
    std::vector<Eigen::Vector2d> points;  // full point set, indices preserved
    std::vector<std::array<int, 3>> tris;  // inside triangles, CCW
  };
  Extracted extract() const;

  int point_count() const { return static_cast<int>(pts_.size()); }
  const Eigen::Vector2d& point(int i) const { return pts_[i]; }

 private:
  struct Tri {
    int v[3];
    int n[3];  // neighbor across edge opposite v[i]
    bool alive = true;
    bool inside = false;
  };

  int locate(const Eigen::Vector2d& p, int hint) const;
  int new_tri(int a, int b, int c);
  void cavity_insert(int pi, int start_tri);
  bool edge_exists(int a, int b) const;
  bool is_constrained(int a, int b) const;
  int tri_with_directed_edge(int a, int b) const;

  std::vector<Eigen::Vector2d> pts_;
  std::vector<Tri> tris_;
  std::vector<std::pair<int, int>> constraints_;
  std::unordered_set<int64_t> constraint_set_;
  std::vector<int> vertex_tri_;  // one incident live triangle per vertex
  mutable int last_tri_ = 0;
  bool classified_ = false;
};

/// Robust orientation/in-circle predicates (double with double-double
/// fallback).  Positive orient2d means counter-clockwise.
double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);
double incircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                const Eigen::Vector2d& d);

}  // namespace gapstress
