#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gapstress/core.hpp"

namespace gapstress {

/// Minimal TOML subset: [section] headers, key = value with numbers, bools,
/// quoted strings and flat arrays, # comments.  Keys are returned as
/// "section.key".
using TomlValue = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;
std::map<std::string, TomlValue> parse_toml_string(const std::string& text);
std::map<std::string, TomlValue> parse_toml_file(const std::string& path);

/// A full oracle sweep: geometry template, material, eps ladder, boundary
/// data presets and output location.
struct SweepConfig {
  // [geometry]
  std::string kind = "disks";  // disks | superellipse | cell
  double r = 1.0;              // disk radius
  double a = 1.0, b = 1.0;     // superellipse semi-axes
  int m = 2;
  double R_out = 3.0;
  double L1 = 1.5, L2 = 1.0;
  double eps0_factor = 1e-4;  // touching approximation: eps0 = factor * diameter
  // [material]
  double lambda = 1.0, mu = 1.0;
  // [sweep]
  std::vector<double> eps_list{0.08, 0.04, 0.02, 0.01};
  std::vector<std::string> phi{"shear", "stretch"};
  int levels = 2;
  double h_target = 0.3;
  int n_layers = 6;
  int probes = 40;
  int jobs = 1;
  // [output]
  std::string out_dir = "gapstress_out";

  static SweepConfig from_toml_file(const std::string& path);
  static SweepConfig from_values(const std::map<std::string, TomlValue>& kv);
  void validate() const;
  LameParams material() const { return LameParams(lambda, mu, 2); }
};

/// Named boundary-data presets realizing the symmetry classes.
Vector2d phi_preset(const std::string& name, const Vector2d& x);

}  // namespace gapstress
