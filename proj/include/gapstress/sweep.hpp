#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapstress/config.hpp"

namespace gapstress {

struct SweepRow {
  double epsilon;
  int d;
  int m;
  std::string quantity;
  double value;
  double mesh_h;
  int dofs;
};

struct SweepResult {
  SweepConfig cfg;
  std::vector<SweepRow> rows;

  /// Values of a quantity on the finest mesh per epsilon, sorted by
  /// decreasing epsilon.
  std::vector<std::pair<double, double>> series(const std::string& quantity) const;
  /// Finest-mesh value at one epsilon (throws if absent).
  double value_at(const std::string& quantity, double eps) const;
  /// All (mesh_h, value) pairs of a quantity at one epsilon (for mesh
  /// convergence checks), sorted by decreasing mesh_h.
  std::vector<std::pair<double, double>> levels_at(const std::string& quantity, double eps) const;
};

/// Runs the full oracle sweep for the configuration: touching-limit solve,
/// per-epsilon v-family/full solves, capacities, functionals and probes.
SweepResult run_sweep(const SweepConfig& cfg);

/// Writes results.csv (schema epsilon,d,m,quantity,value,mesh_h,dofs) and
/// meta.json into the directory (created if needed).
void write_sweep(const SweepResult& result, const std::string& dir);
SweepResult read_sweep(const std::string& dir);

/// Renders the markdown comparison report for a written sweep directory.
/// Throws std::runtime_error when the directory has no results.
std::string report(const std::string& results_dir);

}  // namespace gapstress
