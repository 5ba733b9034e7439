#include "gapstress/meshgen.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "gapstress/delaunay.hpp"

namespace gapstress {

double OracleGeometry::upper_chart(double x1) const {
  switch (kind) {
    case Kind::DisksInDisk:
      return (r + 0.5 * eps()) - std::sqrt(r * r - x1 * x1);
    case Kind::SuperellipseInDisk: {
      const double t = std::pow(std::abs(x1) / a, static_cast<double>(model.m));
      return (b + 0.5 * eps()) - b * std::pow(1.0 - t, 1.0 / model.m);
    }
    case Kind::PeriodCell:
      return L2 - std::sqrt(r * r - x1 * x1);
  }
  throw std::logic_error("upper_chart: bad kind");
}

double OracleGeometry::chart_halfwidth() const {
  switch (kind) {
    case Kind::DisksInDisk:
      return 0.4 * r;
    case Kind::SuperellipseInDisk:
      return 0.4 * a;
    case Kind::PeriodCell:
      return 0.35 * r;
  }
  throw std::logic_error("chart_halfwidth: bad kind");
}

double OracleGeometry::diameter() const {
  return kind == Kind::PeriodCell ? 2.0 * std::max(L1, L2) : 2.0 * R_out;
}

OracleGeometry make_disks_geometry(double r, double eps, double R_out) {
  OracleGeometry g;
  g.kind = OracleGeometry::Kind::DisksInDisk;
  g.r = r;
  g.R_out = R_out;
  g.model = InclusionPairGeometry(2, 2, 1.0 / r, eps, 0.4 * r, OuterBoundary::disk(R_out));
  if (!(R_out > 2.0 * r + eps / 2.0 + 0.05 * R_out))
    throw std::invalid_argument("make_disks_geometry: inclusions do not fit");
  return g;
}

OracleGeometry make_superellipse_geometry(int m, double a, double b, double eps, double R_out) {
  if (m < 3) throw std::invalid_argument("make_superellipse_geometry: m >= 3");
  OracleGeometry g;
  g.kind = OracleGeometry::Kind::SuperellipseInDisk;
  g.a = a;
  g.b = b;
  g.R_out = R_out;
  const double kappa = 2.0 * b / (m * std::pow(a, m));
  g.model = InclusionPairGeometry(2, m, kappa, eps, 0.4 * a, OuterBoundary::disk(R_out));
  if (!(R_out > 2.0 * b + eps / 2.0 + 0.05 * R_out))
    throw std::invalid_argument("make_superellipse_geometry: inclusions do not fit");
  return g;
}

OracleGeometry make_cell_geometry(double L1, double L2, double eps) {
  OracleGeometry g;
  g.kind = OracleGeometry::Kind::PeriodCell;
  g.L1 = L1;
  g.L2 = L2;
  g.r = L2 - 0.5 * eps;
  if (!(g.r > 0.2 * L2)) throw std::invalid_argument("make_cell_geometry: eps too large");
  if (!(L1 > g.r + 0.15 * L1))
    throw std::invalid_argument("make_cell_geometry: fiber too close to the vertical sides");
  g.model = InclusionPairGeometry(2, 2, 1.0 / g.r, eps, 0.35 * g.r, OuterBoundary::rect(L1, L2));
  return g;
}

OracleGeometry realize(const InclusionPairGeometry& g) {
  if (g.d != 2) throw std::invalid_argument("realize: 2D oracle geometries only");
  if (g.outer.kind == OuterBoundary::Kind::Rect) {
    if (g.m != 2) throw std::invalid_argument("realize: period cell requires m=2");
    // kappa = 1/r with r = L2 - eps/2; the caller controls kappa through L2
    return make_cell_geometry(g.outer.hx, g.outer.hy, g.eps);
  }
  if (g.m == 2) return make_disks_geometry(1.0 / g.kappa, g.eps, g.outer.radius);
  // superellipse with a = 1: kappa = 2 b / m
  const double b = 0.5 * g.m * g.kappa;
  return make_superellipse_geometry(g.m, 1.0, b, g.eps, g.outer.radius);
}

namespace {

struct WorkMesh {
  std::vector<Eigen::Vector2d> pts;
  std::vector<std::array<int, 3>> tris;
  struct BE {
    int a, b, tag;
  };
  std::vector<BE> bedges;
};

uint64_t dbl_bits(double v) {
  v += 0.0;  // normalize -0.0
  uint64_t u;
  std::memcpy(&u, &v, sizeof(u));
  return u;
}
struct PointKey {
  uint64_t x, y;
  bool operator==(const PointKey& o) const { return x == o.x && y == o.y; }
};
struct PointKeyHash {
  size_t operator()(const PointKey& k) const {
    return std::hash<uint64_t>()(k.x * 1000003u ^ k.y);
  }
};
PointKey key_of(const Eigen::Vector2d& p) { return {dbl_bits(p.x()), dbl_bits(p.y())}; }

/// Appends the reflection of `w` across x=0 (axis=0) or y=0 (axis=1).
/// Points on the axis are shared.  tag_map rewrites boundary tags of the
/// mirrored copy.
void mirror(WorkMesh& w, int axis, const std::map<int, int>& tag_map) {
  const size_t np = w.pts.size(), nt = w.tris.size(), ne = w.bedges.size();
  std::vector<int> img(np);
  for (size_t i = 0; i < np; ++i) {
    Eigen::Vector2d p = w.pts[i];
    if (p(axis) == 0.0) {
      img[i] = static_cast<int>(i);
      continue;
    }
    p(axis) = -p(axis);
    img[i] = static_cast<int>(w.pts.size());
    w.pts.push_back(p);
  }
  for (size_t t = 0; t < nt; ++t) {
    const auto& tr = w.tris[t];
    w.tris.push_back({img[tr[0]], img[tr[2]], img[tr[1]]});  // reversed orientation
  }
  for (size_t e = 0; e < ne; ++e) {
    const auto& be = w.bedges[e];
    if (img[be.a] == be.a && img[be.b] == be.b) continue;  // edge on the axis
    int tag = be.tag;
    auto it = tag_map.find(tag);
    if (it != tag_map.end()) tag = it->second;
    w.bedges.push_back({img[be.a], img[be.b], tag});
  }
}

/// Resamples a dense polyline at spacing h(p), keeping both endpoints.
std::vector<Eigen::Vector2d> resample(const std::vector<Eigen::Vector2d>& dense,
                                      const std::function<double(const Eigen::Vector2d&)>& h) {
  std::vector<Eigen::Vector2d> out;
  out.push_back(dense.front());
  double acc = 0.0;
  double target = h(out.back());
  for (size_t i = 1; i < dense.size(); ++i) {
    double seg = (dense[i] - dense[i - 1]).norm();
    double t0 = 0.0;
    while (acc + (1.0 - t0) * seg >= target) {
      const double t = t0 + (target - acc) / seg;
      out.push_back(dense[i - 1] + t * (dense[i] - dense[i - 1]));
      acc = 0.0;
      t0 = t;
      target = h(out.back());
    }
    acc += (1.0 - t0) * seg;
  }
  // close to the far endpoint: merge the last sample if it crowds it
  if ((out.back() - dense.back()).norm() < 0.45 * target && out.size() > 1) out.pop_back();
  out.push_back(dense.back());
  return out;
}

struct Chain {
  std::vector<Eigen::Vector2d> pts;
  int tag = 0;          // boundary tag; 0 = internal stitch/axis chain
};

}  // namespace

Mesh build_mesh(const OracleGeometry& geo, const MeshParams& mp) {
  const double eps = geo.eps();
  if (eps < 1e-6 * geo.diameter())
    throw std::invalid_argument("build_mesh: degenerate geometry (eps below 1e-6 * diameter)");
  if (mp.n_layers < 4) throw std::invalid_argument("build_mesh: n_layers >= 4 required");

  const double refine = std::max(0.25, mp.refine);
  int n_layers = static_cast<int>(std::lround(mp.n_layers * std::sqrt(refine)));
  if (n_layers % 2) ++n_layers;
  n_layers = std::max(4, n_layers);
  const double h_far = mp.h_target / refine;
  const double R_st = geo.chart_halfwidth();

  // ---- structured gap block -------------------------------------------------
  // column positions on [0, R_st]; width follows the local gap thickness
  std::vector<double> xs{0.0};
  while (xs.back() < R_st) {
    const double delta = 2.0 * geo.upper_chart(xs.back()) ;
    double dx = mp.col_aspect * delta / n_layers;
    dx = std::min(dx, R_st / 6.0);
    xs.push_back(xs.back() + dx);
  }
  xs.back() = R_st;
  if (xs.size() >= 3 && (R_st - xs[xs.size() - 2]) < 0.4 * (xs[xs.size() - 2] - xs[xs.size() - 3]))
    xs.erase(xs.end() - 2);

  const int ncol_half = static_cast<int>(xs.size());
  // full symmetric column list: index c in [-(ncol_half-1), ncol_half-1]
  std::vector<double> cols;
  for (int i = ncol_half - 1; i >= 1; --i) cols.push_back(-xs[i]);
  for (int i = 0; i < ncol_half; ++i) cols.push_back(xs[i]);
  const int ncol = static_cast<int>(cols.size());

  WorkMesh w;
  std::vector<std::vector<int>> col_nodes(ncol);
  const int half = n_layers / 2;
  for (int c = 0; c < ncol; ++c) {
    const double ax = std::abs(cols[c]);
    const double yu = geo.upper_chart(ax);
    col_nodes[c].resize(n_layers + 1);
    for (int j = 0; j <= n_layers; ++j) {
      // bit-exact symmetric layer coordinates about the midline
      const double y = (j >= half) ? yu * (static_cast<double>(j - half) / half)
                                   : -(yu * (static_cast<double>(half - j) / half));
      col_nodes[c][j] = static_cast<int>(w.pts.size());
      w.pts.push_back({cols[c], y});
    }
  }
  for (int c = 0; c + 1 < ncol; ++c) {
    for (int j = 0; j < n_layers; ++j) {
      const int A = col_nodes[c][j], B = col_nodes[c + 1][j];
      const int C = col_nodes[c + 1][j + 1], D = col_nodes[c][j + 1];
      // mirror-consistent diagonal choice
      const double xm = 0.5 * (cols[c] + cols[c + 1]);
      const double ym = (j + 0.5) - 0.5 * n_layers;
      if (xm * ym > 0.0) {
        w.tris.push_back({A, B, C});
        w.tris.push_back({A, C, D});
      } else {
        w.tris.push_back({A, B, D});
        w.tris.push_back({B, C, D});
      }
    }
  }
  for (int c = 0; c + 1 < ncol; ++c) {
    w.bedges.push_back({col_nodes[c][n_layers], col_nodes[c + 1][n_layers], kTagInc1});
    w.bedges.push_back({col_nodes[c][0], col_nodes[c + 1][0], kTagInc2});
  }

  // ---- quarter outer region (x >= 0, y >= 0) --------------------------------
  const int cR = ncol - 1;  // column at +R_st
  const Eigen::Vector2d corner(w.pts[col_nodes[cR][n_layers]]);
  const double s_corner = (2.0 * geo.upper_chart(R_st)) / n_layers;  // stitch spacing

  std::vector<Chain> chains;
  {  // stitch: upper half of the +R_st column, bottom to top (internal)
    Chain st;
    for (int j = n_layers / 2; j <= n_layers; ++j) st.pts.push_back(w.pts[col_nodes[cR][j]]);
    st.tag = 0;
    chains.push_back(std::move(st));
  }

  const double h_arc = std::min(h_far, 0.45 * (geo.kind == OracleGeometry::Kind::SuperellipseInDisk
                                                   ? std::min(geo.a, geo.b)
                                                   : geo.r));
  auto arc_spacing = [&](const Eigen::Vector2d& p) {
    return std::min(h_arc, std::max(1.5 * s_corner, 0.35 * (p - corner).norm()));
  };

  if (geo.kind != OracleGeometry::Kind::PeriodCell) {
    // inclusion arc from the stitch corner to the top pole
    std::vector<Eigen::Vector2d> dense;
    const int M = 6000;
    if (geo.kind == OracleGeometry::Kind::DisksInDisk) {
      const double cy = geo.r + 0.5 * eps;
      const double phi0 = std::asin(R_st / geo.r);
      for (int i = 0; i <= M; ++i) {
        const double phi = phi0 + (M_PI - phi0) * i / M;
        dense.push_back({geo.r * std::sin(phi), cy - geo.r * std::cos(phi)});
      }
    } else {
      const double c = geo.b + 0.5 * eps;
      const double m = geo.model.m;
      const double u0 = std::asin(std::pow(R_st / geo.a, 0.5 * m));
      for (int i = 0; i <= M; ++i) {
        const double u = u0 + (M_PI - u0) * i / M;
        const double su = std::sin(u), cu = std::cos(u);
        const double x = geo.a * std::pow(std::max(su, 0.0), 2.0 / m);
        const double y = c - geo.b * (cu >= 0.0 ? std::pow(cu, 2.0 / m)
                                                : -std::pow(-cu, 2.0 / m));
        dense.push_back({x, y});
      }
    }
    dense.front() = corner;
    const Eigen::Vector2d pole(0.0, eps / 2.0 + 2.0 * (geo.kind == OracleGeometry::Kind::DisksInDisk
                                                           ? geo.r
                                                           : geo.b));
    dense.back() = pole;
    // superellipse corner region needs a curvature cap on the spacing
    std::function<double(const Eigen::Vector2d&)> sp = arc_spacing;
    if (geo.kind == OracleGeometry::Kind::SuperellipseInDisk) {
      sp = [&, arc_spacing](const Eigen::Vector2d& p) {
        const double near_corner = std::hypot(p.x() - geo.a, p.y() - (geo.b + 0.5 * eps));
        return std::min(arc_spacing(p), std::max(0.02 * geo.a, 0.5 * near_corner));
      };
    }
    Chain arc;
    arc.pts = resample(dense, sp);
    arc.tag = kTagInc1;
    chains.push_back(std::move(arc));

    // axis segment pole -> outer circle
    {
      Chain ax;
      std::vector<Eigen::Vector2d> d2{{0.0, pole.y()}, {0.0, geo.R_out}};
      ax.pts = resample(d2, [&](const Eigen::Vector2d& p) {
        return std::min(h_far, std::max(0.5 * h_arc, 0.4 * (p - pole).norm() + 0.5 * h_arc));
      });
      ax.pts.front() = pole;
      ax.pts.back() = Eigen::Vector2d(0.0, geo.R_out);
      ax.tag = 0;
      chains.push_back(std::move(ax));
    }
    // outer quarter arc (0,R) -> (R,0)
    {
      Chain oc;
      std::vector<Eigen::Vector2d> d2;
      const int K = 4000;
      for (int i = 0; i <= K; ++i) {
        const double t = M_PI_2 * i / K;
        d2.push_back({geo.R_out * std::sin(t), geo.R_out * std::cos(t)});
      }
      d2.front() = Eigen::Vector2d(0.0, geo.R_out);
      d2.back() = Eigen::Vector2d(geo.R_out, 0.0);
      oc.pts = resample(d2, [&](const Eigen::Vector2d&) { return h_far; });
      oc.tag = kTagOuter;
      chains.push_back(std::move(oc));
    }
    // axis segment (R_out, 0) -> (R_st, 0)
    {
      Chain ax;
      std::vector<Eigen::Vector2d> d2{{geo.R_out, 0.0}, {R_st, 0.0}};
      ax.pts = resample(d2, [&](const Eigen::Vector2d& p) {
        return std::min(h_far, std::max(1.5 * s_corner, 0.35 * std::abs(p.x() - R_st) + 2.0 * s_corner));
      });
      ax.pts.front() = Eigen::Vector2d(geo.R_out, 0.0);
      ax.pts.back() = Eigen::Vector2d(R_st, 0.0);
      ax.tag = 0;
      chains.push_back(std::move(ax));
    }
  } else {
    // period cell: arc to the top edge, then top edge, side wall, bottom axis
    std::vector<Eigen::Vector2d> dense;
    const int M = 6000;
    const double phi0 = std::asin(R_st / geo.r);
    for (int i = 0; i <= M; ++i) {
      const double phi = phi0 + (M_PI_2 - phi0) * i / M;
      dense.push_back({geo.r * std::sin(phi), geo.L2 - geo.r * std::cos(phi)});
    }
    dense.front() = corner;
    dense.back() = Eigen::Vector2d(geo.r, geo.L2);
    Chain arc;
    arc.pts = resample(dense, arc_spacing);
    arc.tag = kTagInc1;
    chains.push_back(std::move(arc));
    {
      Chain top;
      std::vector<Eigen::Vector2d> d2{{geo.r, geo.L2}, {geo.L1, geo.L2}};
      top.pts = resample(d2, [&](const Eigen::Vector2d&) { return std::min(h_far, 0.5 * (geo.L1 - geo.r)); });
      top.pts.front() = Eigen::Vector2d(geo.r, geo.L2);
      top.pts.back() = Eigen::Vector2d(geo.L1, geo.L2);
      top.tag = kTagCellTop;
      chains.push_back(std::move(top));
    }
    {
      Chain side;
      std::vector<Eigen::Vector2d> d2{{geo.L1, geo.L2}, {geo.L1, 0.0}};
      side.pts = resample(d2, [&](const Eigen::Vector2d&) { return h_far; });
      side.pts.front() = Eigen::Vector2d(geo.L1, geo.L2);
      side.pts.back() = Eigen::Vector2d(geo.L1, 0.0);
      side.tag = kTagCellSide;
      chains.push_back(std::move(side));
    }
    {
      Chain ax;
      std::vector<Eigen::Vector2d> d2{{geo.L1, 0.0}, {R_st, 0.0}};
      ax.pts = resample(d2, [&](const Eigen::Vector2d& p) {
        return std::min(h_far, std::max(1.5 * s_corner, 0.35 * std::abs(p.x() - R_st) + 2.0 * s_corner));
      });
      ax.pts.front() = Eigen::Vector2d(geo.L1, 0.0);
      ax.pts.back() = Eigen::Vector2d(R_st, 0.0);
      ax.tag = 0;
      chains.push_back(std::move(ax));
    }
  }

  // triangulate the quarter region
  const double bb = geo.kind == OracleGeometry::Kind::PeriodCell
                        ? std::max(geo.L1, geo.L2)
                        : geo.R_out;
  Delaunay dt(Eigen::Vector2d(-0.1 * bb - eps, -0.1 * bb - eps),
              Eigen::Vector2d(1.1 * bb + eps, 1.1 * bb + eps));
  std::vector<std::vector<int>> chain_ids(chains.size());
  for (size_t ci = 0; ci < chains.size(); ++ci) {
    chain_ids[ci].reserve(chains[ci].pts.size());
    for (const auto& p : chains[ci].pts) chain_ids[ci].push_back(dt.insert(p));
  }
  for (size_t ci = 0; ci < chains.size(); ++ci)
    for (size_t k = 0; k + 1 < chain_ids[ci].size(); ++k)
      if (chain_ids[ci][k] != chain_ids[ci][k + 1])
        dt.constrain(chain_ids[ci][k], chain_ids[ci][k + 1]);
  dt.classify();

  // size field: inclusion-distance and stitch-corner graded
  auto inc_dist = [&](const Eigen::Vector2d& p) {
    if (geo.kind == OracleGeometry::Kind::SuperellipseInDisk) {
      const Eigen::Vector2d c(0.0, geo.b + 0.5 * eps);
      const Eigen::Vector2d d = p - c;
      const double nd = d.norm();
      if (nd < 1e-12) return geo.b;
      const double m = geo.model.m;
      // radial scale factor t: c + t*d lies on the superellipse
      const double t = 1.0 / std::pow(std::pow(std::abs(d.x()) / geo.a, m) +
                                          std::pow(std::abs(d.y()) / geo.b, m),
                                      1.0 / m);
      return nd * std::abs(1.0 - t);
    }
    const Eigen::Vector2d c =
        geo.kind == OracleGeometry::Kind::PeriodCell
            ? Eigen::Vector2d(0.0, geo.L2)
            : Eigen::Vector2d(0.0, geo.r + 0.5 * eps);
    return std::abs((p - c).norm() - geo.r);
  };
  auto size_field = [&](const Eigen::Vector2d& p) {
    double h = h_far;
    h = std::min(h, h_arc + 0.55 * inc_dist(p));
    h = std::min(h, 2.5 * s_corner + 0.6 * (p - corner).norm());
    return h;
  };
  dt.refine(size_field, 25.0);

  const auto ext = dt.extract();

  // append the quarter triangulation to the work mesh (dedupe on coordinates)
  std::unordered_map<PointKey, int, PointKeyHash> node_of;
  for (size_t i = 0; i < w.pts.size(); ++i) node_of[key_of(w.pts[i])] = static_cast<int>(i);
  std::vector<int> remap(ext.points.size(), -1);
  auto map_pt = [&](int i) {
    if (remap[i] >= 0) return remap[i];
    const auto k = key_of(ext.points[i]);
    auto it = node_of.find(k);
    int id;
    if (it != node_of.end()) {
      id = it->second;
    } else {
      id = static_cast<int>(w.pts.size());
      w.pts.push_back(ext.points[i]);
      node_of[k] = id;
    }
    remap[i] = id;
    return id;
  };
  for (const auto& t : ext.tris) w.tris.push_back({map_pt(t[0]), map_pt(t[1]), map_pt(t[2])});
  for (size_t ci = 0; ci < chains.size(); ++ci) {
    if (chains[ci].tag == 0) continue;
    for (size_t k = 0; k + 1 < chain_ids[ci].size(); ++k)
      w.bedges.push_back({map_pt(chain_ids[ci][k]), map_pt(chain_ids[ci][k + 1]), chains[ci].tag});
  }

  // ---- mirror the quarter over both axes ------------------------------------
  // Note the gap block is already full; we must mirror only the outer part.
  // Rebuild: mirror everything EXCEPT the block by assembling the block last
  // would double it.  Instead mirror the whole mesh and drop duplicates:
  // block triangles map onto themselves only if symmetric, which they are not
  // triangle-by-triangle.  So: keep the block out, mirror the quarter, then
  // merge the block.
  WorkMesh quarter;
  {
    // separate the quarter (everything appended after the block) into its own
    // mesh for mirroring
    quarter.pts = w.pts;
    quarter.tris.assign(w.tris.begin() + (2 * (ncol - 1) * n_layers), w.tris.end());
    quarter.bedges.assign(w.bedges.begin() + 2 * (ncol - 1), w.bedges.end());
    w.tris.resize(2 * (ncol - 1) * n_layers);
    w.bedges.resize(2 * (ncol - 1));
  }
  mirror(quarter, 0, {});  // across x = 0
  mirror(quarter, 1, {{kTagInc1, kTagInc2}, {kTagCellTop, kTagCellBottom}});  // across y = 0

  // merge mirrored quarter into the block mesh
  {
    std::unordered_map<PointKey, int, PointKeyHash> node_of2;
    for (size_t i = 0; i < w.pts.size(); ++i) node_of2[key_of(w.pts[i])] = static_cast<int>(i);
    std::vector<int> rm(quarter.pts.size(), -1);
    auto mp2 = [&](int i) {
      if (rm[i] >= 0) return rm[i];
      const auto k = key_of(quarter.pts[i]);
      auto it = node_of2.find(k);
      int id;
      if (it != node_of2.end()) {
        id = it->second;
      } else {
        id = static_cast<int>(w.pts.size());
        w.pts.push_back(quarter.pts[i]);
        node_of2[k] = id;
      }
      rm[i] = id;
      return id;
    };
    for (const auto& t : quarter.tris) w.tris.push_back({mp2(t[0]), mp2(t[1]), mp2(t[2])});
    for (const auto& e : quarter.bedges) w.bedges.push_back({mp2(e.a), mp2(e.b), e.tag});
  }

  // ---- compact to used nodes and emit ---------------------------------------
  Mesh mesh;
  std::vector<int> used(w.pts.size(), -1);
  auto use = [&](int i) {
    if (used[i] < 0) {
      used[i] = static_cast<int>(mesh.nodes.size());
      mesh.nodes.push_back(w.pts[i]);
    }
    return used[i];
  };
  for (const auto& t : w.tris) {
    Mesh::Tri mt;
    mt.v = {use(t[0]), use(t[1]), use(t[2])};
    mt.region = 0;
    mesh.tris.push_back(mt);
  }
  for (const auto& e : w.bedges) mesh.edges.push_back({use(e.a), use(e.b), e.tag});
  mesh.gap_layers = n_layers;

  // orientation fix: make all triangles CCW
  for (size_t t = 0; t < mesh.tris.size(); ++t)
    if (mesh.signed_area(static_cast<int>(t)) < 0.0)
      std::swap(mesh.tris[t].v[1], mesh.tris[t].v[2]);

  check_mesh(mesh);
  return mesh;
}

Mesh build_mesh(const InclusionPairGeometry& g, double h_target, int n_layers) {
  MeshParams mp;
  mp.h_target = h_target;
  mp.n_layers = n_layers;
  return build_mesh(realize(g), mp);
}

}  // namespace gapstress
