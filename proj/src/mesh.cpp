#include "gapstress/mesh.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gapstress {

double Mesh::signed_area(int t) const {
  const auto& a = nodes[tris[t].v[0]];
  const auto& b = nodes[tris[t].v[1]];
  const auto& c = nodes[tris[t].v[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

double Mesh::min_angle_deg(int t) const {
  const auto& a = nodes[tris[t].v[0]];
  const auto& b = nodes[tris[t].v[1]];
  const auto& c = nodes[tris[t].v[2]];
  auto ang = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r) {
    const Eigen::Vector2d u = q - p, v = r - p;
    return std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
  };
  const double m = std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
  return m * 180.0 / M_PI;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_mesh: cannot open " + path);
  std::fprintf(f, "NODES %zu\n", mesh.nodes.size());
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    std::fprintf(f, "%zu %.17g %.17g\n", i, mesh.nodes[i].x(), mesh.nodes[i].y());
  std::fprintf(f, "TRIS %zu REGION\n", mesh.tris.size());
  for (size_t i = 0; i < mesh.tris.size(); ++i)
    std::fprintf(f, "%zu %d %d %d %d\n", i, mesh.tris[i].v[0], mesh.tris[i].v[1],
                 mesh.tris[i].v[2], mesh.tris[i].region);
  std::fprintf(f, "EDGES %zu BOUNDARY\n", mesh.edges.size());
  for (size_t i = 0; i < mesh.edges.size(); ++i)
    std::fprintf(f, "%zu %d %d %d\n", i, mesh.edges[i].a, mesh.edges[i].b, mesh.edges[i].tag);
  std::fclose(f);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open " + path);
  Mesh mesh;
  std::string kw, extra;
  size_t n = 0;
  if (!(in >> kw >> n) || kw != "NODES") throw std::runtime_error("read_mesh: bad NODES header");
  mesh.nodes.resize(n);
  for (size_t i = 0; i < n; ++i) {
    size_t id;
    double x, y;
    in >> id >> x >> y;
    mesh.nodes[id] = Eigen::Vector2d(x, y);
  }
  if (!(in >> kw >> n >> extra) || kw != "TRIS") throw std::runtime_error("read_mesh: bad TRIS header");
  mesh.tris.resize(n);
  for (size_t i = 0; i < n; ++i) {
    size_t id;
    Mesh::Tri t;
    in >> id >> t.v[0] >> t.v[1] >> t.v[2] >> t.region;
    mesh.tris[id] = t;
  }
  if (!(in >> kw >> n >> extra) || kw != "EDGES") throw std::runtime_error("read_mesh: bad EDGES header");
  mesh.edges.resize(n);
  for (size_t i = 0; i < n; ++i) {
    size_t id;
    Mesh::BEdge e;
    in >> id >> e.a >> e.b >> e.tag;
    mesh.edges[id] = e;
  }
  if (!in) throw std::runtime_error("read_mesh: truncated file");
  return mesh;
}

void check_mesh(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> count;
  for (size_t t = 0; t < mesh.tris.size(); ++t) {
    if (mesh.signed_area(static_cast<int>(t)) <= 0.0)
      throw std::runtime_error("check_mesh: non-positive triangle area");
    for (int e = 0; e < 3; ++e) {
      int a = mesh.tris[t].v[e], b = mesh.tris[t].v[(e + 1) % 3];
      count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::map<std::pair<int, int>, int> btag;
  for (const auto& e : mesh.edges) btag[{std::min(e.a, e.b), std::max(e.a, e.b)}] = e.tag;
  for (const auto& [key, c] : count) {
    if (c > 2) throw std::runtime_error("check_mesh: edge shared by more than two triangles");
    const bool is_boundary = (c == 1);
    const bool listed = btag.count(key) > 0;
    if (is_boundary && !listed) throw std::runtime_error("check_mesh: untagged boundary edge");
    if (!is_boundary && listed) throw std::runtime_error("check_mesh: tagged interior edge");
  }
  if (btag.size() != 0 && count.empty()) throw std::runtime_error("check_mesh: empty mesh");
}

}  // namespace gapstress
