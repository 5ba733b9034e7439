#include "gapstress/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gapstress {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

TomlValue parse_scalar(const std::string& tok, int lineno) {
  if (tok == "true") return true;
  if (tok == "false") return false;
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    return tok.substr(1, tok.size() - 2);
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used == tok.size()) return v;
  } catch (...) {
  }
  throw std::invalid_argument("toml: bad value at line " + std::to_string(lineno) + ": " + tok);
}

}  // namespace

std::map<std::string, TomlValue> parse_toml_string(const std::string& text) {
  std::map<std::string, TomlValue> out;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("toml: bad section at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("toml: missing '=' at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("toml: empty key or value at line " + std::to_string(lineno));
    const std::string full = section.empty() ? key : section + "." + key;
    if (val.front() == '[') {
      if (val.back() != ']')
        throw std::invalid_argument("toml: unterminated array at line " + std::to_string(lineno));
      std::string body = val.substr(1, val.size() - 2);
      std::vector<std::string> toks;
      std::string cur;
      bool in_str = false;
      for (char c : body) {
        if (c == '"') in_str = !in_str;
        if (c == ',' && !in_str) {
          toks.push_back(trim(cur));
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!trim(cur).empty()) toks.push_back(trim(cur));
      bool strings = !toks.empty() && !toks[0].empty() && toks[0].front() == '"';
      if (strings) {
        std::vector<std::string> arr;
        for (auto& t : toks) arr.push_back(std::get<std::string>(parse_scalar(t, lineno)));
        out[full] = arr;
      } else {
        std::vector<double> arr;
        for (auto& t : toks) arr.push_back(std::get<double>(parse_scalar(t, lineno)));
        out[full] = arr;
      }
    } else {
      out[full] = parse_scalar(val, lineno);
    }
  }
  return out;
}

std::map<std::string, TomlValue> parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_toml_string(ss.str());
}

namespace {
template <typename T>
void take(const std::map<std::string, TomlValue>& kv, const std::string& key, T& dst) {
  auto it = kv.find(key);
  if (it == kv.end()) return;
  if (const T* v = std::get_if<T>(&it->second)) {
    dst = *v;
    return;
  }
  throw std::invalid_argument("config: wrong type for " + key);
}
void take_int(const std::map<std::string, TomlValue>& kv, const std::string& key, int& dst) {
  double d = dst;
  take(kv, key, d);
  dst = static_cast<int>(std::lround(d));
}
}  // namespace

SweepConfig SweepConfig::from_values(const std::map<std::string, TomlValue>& kv) {
  SweepConfig c;
  take(kv, "geometry.kind", c.kind);
  take(kv, "geometry.r", c.r);
  take(kv, "geometry.a", c.a);
  take(kv, "geometry.b", c.b);
  take_int(kv, "geometry.m", c.m);
  take(kv, "geometry.R_out", c.R_out);
  take(kv, "geometry.L1", c.L1);
  take(kv, "geometry.L2", c.L2);
  take(kv, "geometry.eps0_factor", c.eps0_factor);
  take(kv, "material.lambda", c.lambda);
  take(kv, "material.mu", c.mu);
  take(kv, "sweep.eps", c.eps_list);
  take(kv, "sweep.phi", c.phi);
  take_int(kv, "sweep.levels", c.levels);
  take(kv, "sweep.h_target", c.h_target);
  take_int(kv, "sweep.n_layers", c.n_layers);
  take_int(kv, "sweep.probes", c.probes);
  take_int(kv, "sweep.jobs", c.jobs);
  take(kv, "output.dir", c.out_dir);
  c.validate();
  return c;
}

SweepConfig SweepConfig::from_toml_file(const std::string& path) {
  return from_values(parse_toml_file(path));
}

void SweepConfig::validate() const {
  if (kind != "disks" && kind != "superellipse" && kind != "cell")
    throw std::invalid_argument("config: geometry.kind must be disks|superellipse|cell");
  if (eps_list.size() < 3) throw std::invalid_argument("config: need >= 3 eps values");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 0.5))
      throw std::invalid_argument("config: eps must be in (0, 1/2)");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("config: eps list must be strictly decreasing");
  }
  if (levels < 1 || levels > 4) throw std::invalid_argument("config: levels in 1..4");
  if (phi.empty()) throw std::invalid_argument("config: need at least one phi preset");
  for (const auto& name : phi) phi_preset(name, Vector2d(0.1, 0.2));  // validates names
  LameParams(lambda, mu, 2);
}

Vector2d phi_preset(const std::string& name, const Vector2d& x) {
  if (name == "zero") return Vector2d::Zero();
  if (name == "shear") return {x.y(), 0.0};
  if (name == "stretch") return {0.0, x.y()};
  if (name == "mixed") return {x.y(), x.y()};
  if (name == "rigid-1") return {1.0, 0.0};
  if (name == "rigid-2") return {0.0, 1.0};
  if (name == "rigid-3") return {-x.y(), x.x()};
  throw std::invalid_argument("unknown phi preset: " + name);
}

}  // namespace gapstress
