#include "gapstress/delaunay.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace gapstress {

namespace {

// ---- double-double helpers for the predicate fallback ----------------------
struct DD {
  double hi, lo;
};
inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}
inline DD two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}
inline DD dd_norm(double hi, double lo) { return two_sum(hi, lo); }
inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  return dd_norm(s.hi, s.lo + a.lo + b.lo);
}
inline DD dd_sub(DD a, DD b) { return dd_add(a, {-b.hi, -b.lo}); }
inline DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  return dd_norm(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline int64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<int64_t>(a) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const double detl = (a.x() - c.x()) * (b.y() - c.y());
  const double detr = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detl - detr;
  const double detsum = std::abs(detl) + std::abs(detr);
  if (std::abs(det) > 3.4e-16 * detsum) return det;
  DD ax = two_sum(a.x(), -c.x()), ay = two_sum(a.y(), -c.y());
  DD bx = two_sum(b.x(), -c.x()), by = two_sum(b.y(), -c.y());
  DD d = dd_sub(dd_mul(ax, by), dd_mul(ay, bx));
  return d.hi;
}

double incircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                const Eigen::Vector2d& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                     clift * (adx * bdy - bdx * ady);
  const double permanent = alift * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) +
                           blift * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                           clift * (std::abs(adx * bdy) + std::abs(bdx * ady));
  if (std::abs(det) > 1.2e-15 * permanent) return det;
  DD Adx = two_sum(a.x(), -d.x()), Ady = two_sum(a.y(), -d.y());
  DD Bdx = two_sum(b.x(), -d.x()), Bdy = two_sum(b.y(), -d.y());
  DD Cdx = two_sum(c.x(), -d.x()), Cdy = two_sum(c.y(), -d.y());
  DD Al = dd_add(dd_mul(Adx, Adx), dd_mul(Ady, Ady));
  DD Bl = dd_add(dd_mul(Bdx, Bdx), dd_mul(Bdy, Bdy));
  DD Cl = dd_add(dd_mul(Cdx, Cdx), dd_mul(Cdy, Cdy));
  DD t1 = dd_mul(Al, dd_sub(dd_mul(Bdx, Cdy), dd_mul(Cdx, Bdy)));
  DD t2 = dd_mul(Bl, dd_sub(dd_mul(Cdx, Ady), dd_mul(Adx, Cdy)));
  DD t3 = dd_mul(Cl, dd_sub(dd_mul(Adx, Bdy), dd_mul(Bdx, Ady)));
  DD r = dd_add(dd_add(t1, t2), t3);
  return r.hi;
}

Delaunay::Delaunay(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  const Eigen::Vector2d c = 0.5 * (lo + hi);
  const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  const double s = 40.0 * std::max(span, 1e-9);
  pts_.push_back(c + Eigen::Vector2d(0.0, s));
  pts_.push_back(c + Eigen::Vector2d(-s, -s));
  pts_.push_back(c + Eigen::Vector2d(s, -s));
  tris_.push_back(Tri{{0, 1, 2}, {-1, -1, -1}, true, false});
  vertex_tri_.assign(3, 0);
}

int Delaunay::new_tri(int a, int b, int c) {
  tris_.push_back(Tri{{a, b, c}, {-1, -1, -1}, true, classified_});
  const int id = static_cast<int>(tris_.size()) - 1;
  vertex_tri_[a] = id;
  vertex_tri_[b] = id;
  vertex_tri_[c] = id;
  return id;
}

int Delaunay::locate(const Eigen::Vector2d& p, int hint) const {
  int t = (hint >= 0 && hint < static_cast<int>(tris_.size()) && tris_[hint].alive)
              ? hint
              : last_tri_;
  if (t < 0 || t >= static_cast<int>(tris_.size()) || !tris_[t].alive) {
    t = -1;
    for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i)
      if (tris_[i].alive) { t = i; break; }
    if (t < 0) throw std::runtime_error("delaunay: no live triangles");
  }
  for (int step = 0; step < (1 << 22); ++step) {
    bool moved = false;
    for (int e = 0; e < 3; ++e) {
      const int va = tris_[t].v[(e + 1) % 3];
      const int vb = tris_[t].v[(e + 2) % 3];
      if (orient2d(pts_[va], pts_[vb], p) < 0.0) {
        const int nxt = tris_[t].n[e];
        if (nxt < 0) return t;  // outside hull (never happens for interior points)
        t = nxt;
        moved = true;
        break;
      }
    }
    if (!moved) return t;
  }
  for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
    if (!tris_[i].alive) continue;
    bool ok = true;
    for (int e = 0; e < 3 && ok; ++e)
      ok = orient2d(pts_[tris_[i].v[(e + 1) % 3]], pts_[tris_[i].v[(e + 2) % 3]], p) >= 0.0;
    if (ok) return i;
  }
  throw std::runtime_error("delaunay: point location failed");
}

bool Delaunay::is_constrained(int a, int b) const {
  return constraint_set_.count(edge_key(a, b)) > 0;
}

void Delaunay::cavity_insert(int pi, int start_tri) {
  const Eigen::Vector2d& p = pts_[pi];
  std::vector<int> cavity;
  std::unordered_set<int> in_cavity;
  std::deque<int> work{start_tri};
  in_cavity.insert(start_tri);
  while (!work.empty()) {
    const int t = work.front();
    work.pop_front();
    cavity.push_back(t);
    for (int e = 0; e < 3; ++e) {
      const int nb = tris_[t].n[e];
      if (nb < 0 || in_cavity.count(nb)) continue;
      const int va = tris_[t].v[(e + 1) % 3];
      const int vb = tris_[t].v[(e + 2) % 3];
      if (is_constrained(va, vb)) continue;
      const auto& tv = tris_[nb].v;
      if (incircle(pts_[tv[0]], pts_[tv[1]], pts_[tv[2]], p) > 0.0) {
        in_cavity.insert(nb);
        work.push_back(nb);
      }
    }
  }
  struct CavityEdge {
    int a, b, outer;
  };
  std::vector<CavityEdge> boundary;
  for (int t : cavity) {
    for (int e = 0; e < 3; ++e) {
      const int nb = tris_[t].n[e];
      if (nb >= 0 && in_cavity.count(nb)) continue;
      boundary.push_back({tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3], nb});
    }
  }
  for (int t : cavity) tris_[t].alive = false;

  std::unordered_map<int64_t, std::pair<int, int>> spokes;  // undirected key -> (tri, edge)
  int last = -1;
  for (const auto& be : boundary) {
    const int nt = new_tri(pi, be.a, be.b);
    last = nt;
    tris_[nt].n[0] = be.outer;
    if (be.outer >= 0) {
      for (int e = 0; e < 3; ++e) {
        const int wa = tris_[be.outer].v[(e + 1) % 3];
        const int wb = tris_[be.outer].v[(e + 2) % 3];
        if (wa == be.b && wb == be.a) tris_[be.outer].n[e] = nt;
      }
    }
    for (int e = 1; e < 3; ++e) {
      const int wa = tris_[nt].v[(e + 1) % 3];
      const int wb = tris_[nt].v[(e + 2) % 3];
      const int64_t k = edge_key(wa, wb);
      auto it = spokes.find(k);
      if (it == spokes.end()) {
        spokes[k] = {nt, e};
      } else {
        tris_[nt].n[e] = it->second.first;
        tris_[it->second.first].n[it->second.second] = nt;
      }
    }
  }
  if (last >= 0) last_tri_ = last;
}

int Delaunay::insert(const Eigen::Vector2d& p) {
  const int t = locate(p, last_tri_);
  for (int e = 0; e < 3; ++e) {
    const int v = tris_[t].v[e];
    if ((pts_[v] - p).norm() < 1e-13) return v;
  }
  pts_.push_back(p);
  vertex_tri_.push_back(0);
  const int pi = static_cast<int>(pts_.size()) - 1;
  cavity_insert(pi, t);
  return pi;
}

int Delaunay::tri_with_directed_edge(int a, int b) const {
  const int t0 = vertex_tri_[a];
  auto scan = [&]() {
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (!tris_[i].alive) continue;
      for (int e = 0; e < 3; ++e)
        if (tris_[i].v[e] == a && tris_[i].v[(e + 1) % 3] == b) return i;
    }
    return -1;
  };
  if (t0 < 0 || t0 >= static_cast<int>(tris_.size()) || !tris_[t0].alive) return scan();
  int t = t0;
  for (int guard = 0; guard < (1 << 20); ++guard) {
    int ia = -1;
    for (int e = 0; e < 3; ++e)
      if (tris_[t].v[e] == a) ia = e;
    if (ia < 0) return scan();
    if (tris_[t].v[(ia + 1) % 3] == b) return t;
    const int nxt = tris_[t].n[(ia + 1) % 3];
    if (nxt < 0) break;
    t = nxt;
    if (t == t0) return -1;
  }
  t = t0;
  for (int guard = 0; guard < (1 << 20); ++guard) {
    int ia = -1;
    for (int e = 0; e < 3; ++e)
      if (tris_[t].v[e] == a) ia = e;
    if (ia < 0) return scan();
    if (tris_[t].v[(ia + 1) % 3] == b) return t;
    const int nxt = tris_[t].n[(ia + 2) % 3];
    if (nxt < 0) return -1;
    t = nxt;
    if (t == t0) return -1;
  }
  return -1;
}

bool Delaunay::edge_exists(int a, int b) const {
  return tri_with_directed_edge(a, b) >= 0 || tri_with_directed_edge(b, a) >= 0;
}

void Delaunay::constrain(int a, int b) {
  if (a == b) throw std::invalid_argument("delaunay: degenerate constraint");
  constraints_.push_back({a, b});
  constraint_set_.insert(edge_key(a, b));
  if (edge_exists(a, b)) return;

  const Eigen::Vector2d& pa = pts_[a];
  const Eigen::Vector2d& pb = pts_[b];
  for (int guard = 0; guard < (1 << 14); ++guard) {
    if (edge_exists(a, b)) return;
    // find the triangle at a crossed by the segment
    int cross_t = -1, cross_e = -1;
    for (int i = 0; i < static_cast<int>(tris_.size()) && cross_t < 0; ++i) {
      if (!tris_[i].alive) continue;
      int ia = -1;
      for (int e = 0; e < 3; ++e)
        if (tris_[i].v[e] == a) ia = e;
      if (ia < 0) continue;
      const int c = tris_[i].v[(ia + 1) % 3];
      const int d = tris_[i].v[(ia + 2) % 3];
      if (orient2d(pa, pb, pts_[c]) > 0.0 && orient2d(pa, pb, pts_[d]) < 0.0 &&
          orient2d(pts_[c], pts_[d], pa) > 0.0 && orient2d(pts_[c], pts_[d], pb) < 0.0) {
        cross_t = i;
        cross_e = ia;
      }
    }
    if (cross_t < 0) throw std::runtime_error("delaunay: constraint recovery failed to start");

    int t = cross_t, e = cross_e;
    for (int inner = 0; inner < (1 << 14); ++inner) {
      const int c = tris_[t].v[(e + 1) % 3];
      const int d = tris_[t].v[(e + 2) % 3];
      if (is_constrained(c, d)) throw std::runtime_error("delaunay: crossing constrained edges");
      const int t2 = tris_[t].n[e];
      if (t2 < 0) throw std::runtime_error("delaunay: constraint leaves hull");
      int e2 = -1;
      for (int k = 0; k < 3; ++k)
        if (tris_[t2].n[k] == t) e2 = k;
      const int q = tris_[t2].v[e2];
      const int p = tris_[t].v[e];
      if (orient2d(pts_[p], pts_[c], pts_[q]) > 0.0 &&
          orient2d(pts_[p], pts_[q], pts_[d]) > 0.0) {
        // flip (p,c,d)+(q,d,c) -> (p,c,q)+(p,q,d)
        const int nA = tris_[t].n[(e + 2) % 3];  // across (p,c)
        const int nB = tris_[t].n[(e + 1) % 3];  // across (d,p)
        int ecq = -1, eqd = -1;
        for (int k = 0; k < 3; ++k) {
          const int wa = tris_[t2].v[(k + 1) % 3], wb = tris_[t2].v[(k + 2) % 3];
          if (wa == c && wb == q) ecq = k;
          if (wa == q && wb == d) eqd = k;
        }
        const int nC = tris_[t2].n[ecq];
        const int nD = tris_[t2].n[eqd];
        const bool ins1 = tris_[t].inside, ins2 = tris_[t2].inside;
        tris_[t] = Tri{{p, c, q}, {nC, t2, nA}, true, ins1};
        tris_[t2] = Tri{{p, q, d}, {nD, nB, t}, true, ins2};
        auto fix_nb = [&](int nb, int oldt, int newt) {
          if (nb < 0) return;
          for (int k = 0; k < 3; ++k)
            if (tris_[nb].n[k] == oldt) tris_[nb].n[k] = newt;
        };
        fix_nb(nC, t2, t);
        fix_nb(nB, t, t2);
        for (int vv : {p, c, q}) vertex_tri_[vv] = t;
        for (int vv : {p, q, d}) vertex_tri_[vv] = t2;
        break;  // restart the pipe search
      }
      // not flippable: advance along the pipe
      int ne = -1;
      for (int k = 0; k < 3; ++k) {
        if (k == e2) continue;
        const int wa = tris_[t2].v[(k + 1) % 3], wb = tris_[t2].v[(k + 2) % 3];
        if (orient2d(pa, pb, pts_[wa]) > 0.0 && orient2d(pa, pb, pts_[wb]) < 0.0 &&
            orient2d(pts_[wa], pts_[wb], pa) > 0.0 && orient2d(pts_[wa], pts_[wb], pb) < 0.0) {
          ne = k;
          break;
        }
      }
      if (ne < 0) break;  // pipe ended at b; restart, an earlier edge must flip
      t = t2;
      e = ne;
    }
  }
  if (!edge_exists(a, b)) throw std::runtime_error("delaunay: constraint recovery failed");
}

void Delaunay::classify(const std::vector<Eigen::Vector2d>& hole_seeds) {
  classified_ = true;
  for (auto& t : tris_) t.inside = t.alive;
  std::deque<int> work;
  std::vector<char> seen(tris_.size(), 0);
  for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
    if (!tris_[i].alive) continue;
    for (int e = 0; e < 3; ++e)
      if (tris_[i].v[e] < 3) {
        work.push_back(i);
        seen[i] = 1;
        break;
      }
  }
  for (const auto& s : hole_seeds) {
    const int t = locate(s, -1);
    if (!seen[t]) {
      work.push_back(t);
      seen[t] = 1;
    }
  }
  while (!work.empty()) {
    const int t = work.front();
    work.pop_front();
    tris_[t].inside = false;
    for (int e = 0; e < 3; ++e) {
      const int nb = tris_[t].n[e];
      if (nb < 0 || seen[nb] || !tris_[nb].alive) continue;
      const int va = tris_[t].v[(e + 1) % 3];
      const int vb = tris_[t].v[(e + 2) % 3];
      if (is_constrained(va, vb)) continue;
      seen[nb] = 1;
      work.push_back(nb);
    }
  }
}

void Delaunay::refine(const std::function<double(const Eigen::Vector2d&)>& size_field,
                      double min_angle_deg, int max_inserts) {
  if (!classified_) classify();
  const double quality_bound = 1.0 / (2.0 * std::sin(min_angle_deg * M_PI / 180.0));

  struct Seg {
    Eigen::Vector2d u, v, mid;
    double half;
  };
  std::vector<Seg> segs;
  segs.reserve(constraints_.size());
  double max_half = 0.0;
  Eigen::Vector2d lo(1e300, 1e300), hi(-1e300, -1e300);
  for (const auto& c : constraints_) {
    Seg s{pts_[c.first], pts_[c.second], 0.5 * (pts_[c.first] + pts_[c.second]), 0.0};
    s.half = 0.5 * (s.u - s.v).norm();
    max_half = std::max(max_half, s.half);
    lo = lo.cwiseMin(s.mid);
    hi = hi.cwiseMax(s.mid);
    segs.push_back(s);
  }
  const double cell = std::max(2.0 * max_half, 1e-9);
  const int nx = segs.empty() ? 1 : std::max(1, static_cast<int>((hi.x() - lo.x()) / cell) + 1);
  const int ny = segs.empty() ? 1 : std::max(1, static_cast<int>((hi.y() - lo.y()) / cell) + 1);
  std::vector<std::vector<int>> grid(static_cast<size_t>(nx) * ny);
  auto cell_of = [&](const Eigen::Vector2d& p, int& ix, int& iy) {
    ix = std::clamp(static_cast<int>((p.x() - lo.x()) / cell), 0, nx - 1);
    iy = std::clamp(static_cast<int>((p.y() - lo.y()) / cell), 0, ny - 1);
  };
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    int ix, iy;
    cell_of(segs[i].mid, ix, iy);
    grid[static_cast<size_t>(iy) * nx + ix].push_back(i);
  }
  auto encroaches = [&](const Eigen::Vector2d& p) {
    if (segs.empty()) return false;
    int ix, iy;
    cell_of(p, ix, iy);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
        for (int i : grid[static_cast<size_t>(jy) * nx + jx]) {
          if ((segs[i].mid - p).norm() > segs[i].half) continue;
          if ((segs[i].u - p).dot(segs[i].v - p) < 0.0) return true;
        }
      }
    return false;
  };

  auto circum = [&](int t, Eigen::Vector2d& cc, double& r2) {
    const Eigen::Vector2d& A = pts_[tris_[t].v[0]];
    const Eigen::Vector2d& B = pts_[tris_[t].v[1]];
    const Eigen::Vector2d& C = pts_[tris_[t].v[2]];
    const Eigen::Vector2d ab = B - A, ac = C - A;
    const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
    if (d == 0.0) {
      r2 = 0.0;
      cc = A;
      return;
    }
    const double al = ab.squaredNorm(), cl = ac.squaredNorm();
    cc = A + Eigen::Vector2d(ac.y() * al - ab.y() * cl, ab.x() * cl - ac.x() * al) / d;
    r2 = (cc - A).squaredNorm();
  };
  auto is_bad = [&](int t) {
    if (!tris_[t].alive || !tris_[t].inside) return false;
    const Eigen::Vector2d& A = pts_[tris_[t].v[0]];
    const Eigen::Vector2d& B = pts_[tris_[t].v[1]];
    const Eigen::Vector2d& C = pts_[tris_[t].v[2]];
    const double lab = (A - B).norm(), lbc = (B - C).norm(), lca = (C - A).norm();
    const double lmin = std::min({lab, lbc, lca});
    const double lmax = std::max({lab, lbc, lca});
    const Eigen::Vector2d cen = (A + B + C) / 3.0;
    if (lmax > size_field(cen)) return true;
    Eigen::Vector2d cc;
    double r2;
    circum(t, cc, r2);
    return std::sqrt(r2) > quality_bound * lmin;
  };

  std::deque<int> queue;
  for (int i = 0; i < static_cast<int>(tris_.size()); ++i)
    if (is_bad(i)) queue.push_back(i);

  int inserts = 0;
  while (!queue.empty() && inserts < max_inserts) {
    const int t = queue.front();
    queue.pop_front();
    if (!is_bad(t)) continue;
    Eigen::Vector2d cc;
    double r2;
    circum(t, cc, r2);
    if (!std::isfinite(cc.x()) || !std::isfinite(cc.y())) continue;
    if (encroaches(cc)) continue;  // constrained segments are never split
    int loc;
    try {
      loc = locate(cc, t);
    } catch (const std::runtime_error&) {
      continue;
    }
    if (!tris_[loc].alive || !tris_[loc].inside) continue;
    bool coincident = false;
    for (int e = 0; e < 3; ++e)
      if ((pts_[tris_[loc].v[e]] - cc).norm() < 1e-13) coincident = true;
    if (coincident) continue;
    pts_.push_back(cc);
    vertex_tri_.push_back(0);
    const int pi = static_cast<int>(pts_.size()) - 1;
    const size_t before = tris_.size();
    cavity_insert(pi, loc);
    for (size_t i = before; i < tris_.size(); ++i)
      if (is_bad(static_cast<int>(i))) queue.push_back(static_cast<int>(i));
    ++inserts;
  }
}

Delaunay::Extracted Delaunay::extract() const {
  Extracted out;
  out.points = pts_;
  for (const auto& t : tris_) {
    if (!t.alive || !t.inside) continue;
    out.tris.push_back({t.v[0], t.v[1], t.v[2]});
  }
  return out;
}

}  // namespace gapstress
