#include "gapstress/fem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace gapstress {

namespace {

// degree-4 symmetric triangle rule (6 points, weights sum to 1)
struct QPoint {
  double l0, l1, l2, w;
};
const QPoint kQuad[6] = {
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
};

inline Vector2d perp(const Vector2d& v) { return Vector2d(-v.y(), v.x()); }

// P2 shape gradients at a quadrature point given the barycentric gradients.
inline void shape_gradients(const QPoint& q, const Vector2d gL[3], Vector2d gN[6]) {
  const double L[3] = {q.l0, q.l1, q.l2};
  for (int i = 0; i < 3; ++i) gN[i] = (4.0 * L[i] - 1.0) * gL[i];
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    gN[3 + i] = 4.0 * (L[a] * gL[b] + L[b] * gL[a]);
  }
}

inline void shape_values(const QPoint& q, double N[6]) {
  const double L[3] = {q.l0, q.l1, q.l2};
  for (int i = 0; i < 3; ++i) N[i] = L[i] * (2.0 * L[i] - 1.0);
  for (int i = 0; i < 3; ++i) N[3 + i] = 4.0 * L[(i + 1) % 3] * L[(i + 2) % 3];
}

inline int64_t ekey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<int64_t>(a) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

P2Space::P2Space(const Mesh& mesh) : mesh_(mesh) {
  const int nv = static_cast<int>(mesh_.nodes.size());
  nodes_.assign(mesh_.nodes.begin(), mesh_.nodes.end());
  std::unordered_map<int64_t, int> edge_node;
  tri_nodes_.resize(mesh_.tris.size());
  for (size_t t = 0; t < mesh_.tris.size(); ++t) {
    const auto& v = mesh_.tris[t].v;
    for (int i = 0; i < 3; ++i) tri_nodes_[t][i] = v[i];
    for (int i = 0; i < 3; ++i) {
      const int a = v[(i + 1) % 3], b = v[(i + 2) % 3];
      auto [it, inserted] = edge_node.try_emplace(ekey(a, b), static_cast<int>(nodes_.size()));
      if (inserted) nodes_.push_back(0.5 * (nodes_[a] + nodes_[b]));
      tri_nodes_[t][3 + i] = it->second;
    }
  }

  node_tag_.assign(nodes_.size(), 0);
  auto put_tag = [&](int node, int tag) {
    int& cur = node_tag_[node];
    if (cur == 0 || cur == kTagCellSide) cur = tag;  // Dirichlet-type tags win corners
  };
  for (const auto& e : mesh_.edges) {
    put_tag(e.a, e.tag);
    put_tag(e.b, e.tag);
    auto it = edge_node.find(ekey(e.a, e.b));
    if (it == edge_node.end()) throw std::runtime_error("P2Space: boundary edge not in mesh");
    put_tag(it->second, e.tag);
  }

  // locate grid over triangles
  Eigen::Vector2d lo(1e300, 1e300), hi(-1e300, -1e300);
  for (int i = 0; i < nv; ++i) {
    lo = lo.cwiseMin(mesh_.nodes[i]);
    hi = hi.cwiseMax(mesh_.nodes[i]);
  }
  grid_lo_ = lo - Eigen::Vector2d(1e-9, 1e-9);
  const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y()) + 2e-9;
  const int n = std::max(8, static_cast<int>(std::sqrt(double(mesh_.tris.size()))));
  grid_cell_ = span / n;
  grid_nx_ = grid_ny_ = n;
  grid_.assign(static_cast<size_t>(n) * n, {});
  for (size_t t = 0; t < mesh_.tris.size(); ++t) {
    Eigen::Vector2d tlo(1e300, 1e300), thi(-1e300, -1e300);
    for (int k = 0; k < 3; ++k) {
      tlo = tlo.cwiseMin(mesh_.nodes[mesh_.tris[t].v[k]]);
      thi = thi.cwiseMax(mesh_.nodes[mesh_.tris[t].v[k]]);
    }
    const int x0 = std::clamp(int((tlo.x() - grid_lo_.x()) / grid_cell_), 0, grid_nx_ - 1);
    const int x1 = std::clamp(int((thi.x() - grid_lo_.x()) / grid_cell_), 0, grid_nx_ - 1);
    const int y0 = std::clamp(int((tlo.y() - grid_lo_.y()) / grid_cell_), 0, grid_ny_ - 1);
    const int y1 = std::clamp(int((thi.y() - grid_lo_.y()) / grid_cell_), 0, grid_ny_ - 1);
    for (int gy = y0; gy <= y1; ++gy)
      for (int gx = x0; gx <= x1; ++gx)
        grid_[static_cast<size_t>(gy) * grid_nx_ + gx].push_back(static_cast<int>(t));
    for (int k = 0; k < 3; ++k)
      h_max_ = std::max(h_max_, (mesh_.nodes[mesh_.tris[t].v[k]] -
                                 mesh_.nodes[mesh_.tris[t].v[(k + 1) % 3]])
                                    .norm());
  }
}

std::vector<int> P2Space::containing_tris(const Vector2d& p) const {
  std::vector<int> out;
  const int gx = std::clamp(int((p.x() - grid_lo_.x()) / grid_cell_), 0, grid_nx_ - 1);
  const int gy = std::clamp(int((p.y() - grid_lo_.y()) / grid_cell_), 0, grid_ny_ - 1);
  for (int t : grid_[static_cast<size_t>(gy) * grid_nx_ + gx]) {
    const auto& v = mesh_.tris[t].v;
    const Vector2d &A = mesh_.nodes[v[0]], &B = mesh_.nodes[v[1]], &C = mesh_.nodes[v[2]];
    const double den = (B - A).x() * (C - A).y() - (B - A).y() * (C - A).x();
    const double l1 = ((p - A).x() * (C - A).y() - (p - A).y() * (C - A).x()) / den;
    const double l2 = ((B - A).x() * (p - A).y() - (B - A).y() * (p - A).x()) / den;
    const double l0 = 1.0 - l1 - l2;
    const double tol = -1e-10;
    if (l0 >= tol && l1 >= tol && l2 >= tol) out.push_back(t);
  }
  return out;
}

Matrix2d P2Space::gradient(const Eigen::VectorXd& u, const Vector2d& p) const {
  const auto tris = containing_tris(p);
  if (tris.empty()) throw std::out_of_range("P2Space::gradient: point outside mesh");
  Matrix2d acc = Matrix2d::Zero();
  for (int t : tris) {
    const auto& v = mesh_.tris[t].v;
    const Vector2d &A = mesh_.nodes[v[0]], &B = mesh_.nodes[v[1]], &C = mesh_.nodes[v[2]];
    const double twoA = (B - A).x() * (C - A).y() - (B - A).y() * (C - A).x();
    const Vector2d gL[3] = {perp(C - B) / twoA, perp(A - C) / twoA, perp(B - A) / twoA};
    const double l1 = ((p - A).x() * (C - A).y() - (p - A).y() * (C - A).x()) / twoA;
    const double l2 = ((B - A).x() * (p - A).y() - (B - A).y() * (p - A).x()) / twoA;
    QPoint q{1.0 - l1 - l2, l1, l2, 0.0};
    Vector2d gN[6];
    shape_gradients(q, gL, gN);
    Matrix2d g = Matrix2d::Zero();
    for (int k = 0; k < 6; ++k) {
      const int node = tri_nodes_[t][k];
      g.row(0) += u(2 * node) * gN[k].transpose();
      g.row(1) += u(2 * node + 1) * gN[k].transpose();
    }
    acc += g;
  }
  return acc / double(tris.size());
}

double P2Space::energy_form(const LameParams& p, const Eigen::VectorXd& uA,
                            const Eigen::VectorXd& uB) const {
  std::vector<const Eigen::VectorXd*> f{&uA, &uB};
  // simple pairwise evaluation through the batched loop below
  double acc = 0.0;
  for (size_t t = 0; t < tri_nodes_.size(); ++t) {
    const auto& v = mesh_.tris[t].v;
    const Vector2d &A = mesh_.nodes[v[0]], &B = mesh_.nodes[v[1]], &C = mesh_.nodes[v[2]];
    const double twoA = (B - A).x() * (C - A).y() - (B - A).y() * (C - A).x();
    const Vector2d gL[3] = {perp(C - B) / twoA, perp(A - C) / twoA, perp(B - A) / twoA};
    const double area = 0.5 * twoA;
    for (const auto& q : kQuad) {
      Vector2d gN[6];
      shape_gradients(q, gL, gN);
      Matrix2d ga = Matrix2d::Zero(), gb = Matrix2d::Zero();
      for (int k = 0; k < 6; ++k) {
        const int node = tri_nodes_[t][k];
        ga.row(0) += uA(2 * node) * gN[k].transpose();
        ga.row(1) += uA(2 * node + 1) * gN[k].transpose();
        gb.row(0) += uB(2 * node) * gN[k].transpose();
        gb.row(1) += uB(2 * node + 1) * gN[k].transpose();
      }
      acc += q.w * area * energy_density(p, ga, gb);
    }
  }
  return acc;
}

BCSpec BCSpec::all_dirichlet() {
  BCSpec bc;
  for (int tag : {kTagOuter, kTagInc1, kTagInc2, kTagCellTop, kTagCellBottom})
    bc.kind[tag] = Kind::Dirichlet;
  return bc;
}

BCSpec BCSpec::rigid_inclusions(bool shared) {
  BCSpec bc;
  bc.kind[kTagOuter] = Kind::Dirichlet;
  bc.kind[kTagInc1] = Kind::Rigid;
  bc.kind[kTagInc2] = Kind::Rigid;
  bc.rigid_group[kTagInc1] = 0;
  bc.rigid_group[kTagInc2] = shared ? 0 : 1;
  return bc;
}

BCSpec BCSpec::period_cell() {
  BCSpec bc;
  for (int tag : {kTagInc1, kTagInc2, kTagCellTop, kTagCellBottom})
    bc.kind[tag] = Kind::Dirichlet;
  // sides stay natural (traction free)
  return bc;
}

ElasticSystem::ElasticSystem(const P2Space& space, const LameParams& p, const BCSpec& bc)
    : space_(space), p_(p), bc_(bc) {
  if (p_.d != 2) throw std::invalid_argument("ElasticSystem: 2D oracle only");
  const int nn = space_.n_nodes();
  node_kind_.assign(nn, NodeKind::Free);
  node_index_.assign(nn, -1);

  int max_group = -1;
  for (auto& [tag, g] : bc_.rigid_group) max_group = std::max(max_group, g);

  int n_free_nodes = 0;
  n_constrained_ = 0;
  for (int i = 0; i < nn; ++i) {
    const int tag = space_.node_tag(i);
    auto it = bc_.kind.find(tag);
    const BCSpec::Kind k = (it == bc_.kind.end()) ? BCSpec::Kind::Natural : it->second;
    if (k == BCSpec::Kind::Dirichlet) {
      node_kind_[i] = NodeKind::Dirichlet;
      node_index_[i] = n_constrained_++;
    } else if (k == BCSpec::Kind::Rigid) {
      node_kind_[i] = NodeKind::Rigid;
      node_index_[i] = bc_.rigid_group.at(tag);
    } else {
      node_kind_[i] = NodeKind::Free;
      node_index_[i] = n_free_nodes++;
    }
  }
  n_groups_ = max_group + 1;
  n_free_ = 2 * n_free_nodes + 3 * n_groups_;

  // scatter targets per (node, component): list of (dof, weight)
  const int rigid_base = 2 * n_free_nodes;
  auto targets = [&](int node, int comp, std::pair<int, double> out[2]) -> int {
    switch (node_kind_[node]) {
      case NodeKind::Free:
        out[0] = {2 * node_index_[node] + comp, 1.0};
        return 1;
      case NodeKind::Rigid: {
        const int g = node_index_[node];
        const Vector2d& x = space_.node(node);
        out[0] = {rigid_base + 3 * g + comp, 1.0};
        out[1] = {rigid_base + 3 * g + 2, comp == 0 ? -x.y() : x.x()};
        return 2;
      }
      case NodeKind::Dirichlet:
        out[0] = {2 * node_index_[node] + comp, 1.0};
        return 1;
    }
    return 0;
  };

  std::vector<Eigen::Triplet<double>> tff, tfc, tcf, tcc;
  const auto& mesh = space_.mesh();
  Eigen::Matrix<double, 12, 12> Ke;
  for (size_t t = 0; t < mesh.tris.size(); ++t) {
    const auto& v = mesh.tris[t].v;
    const Vector2d &A = mesh.nodes[v[0]], &B = mesh.nodes[v[1]], &C = mesh.nodes[v[2]];
    const double twoA = (B - A).x() * (C - A).y() - (B - A).y() * (C - A).x();
    const Vector2d gL[3] = {perp(C - B) / twoA, perp(A - C) / twoA, perp(B - A) / twoA};
    const double area = 0.5 * twoA;
    Ke.setZero();
    for (const auto& q : kQuad) {
      Vector2d gN[6];
      shape_gradients(q, gL, gN);
      const double w = q.w * area;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
          const double dot = gN[a].dot(gN[b]);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              const double val = p_.lambda * gN[a](i) * gN[b](j) +
                                 p_.mu * ((i == j ? dot : 0.0) + gN[a](j) * gN[b](i));
              Ke(2 * a + i, 2 * b + j) += w * val;
            }
        }
    }
    for (int a = 0; a < 6; ++a) {
      const int na = space_.tri_node(static_cast<int>(t), a);
      for (int i = 0; i < 2; ++i) {
        std::pair<int, double> ra[2];
        const int nra = targets(na, i, ra);
        const bool row_cons = node_kind_[na] == NodeKind::Dirichlet;
        for (int b = 0; b < 6; ++b) {
          const int nb = space_.tri_node(static_cast<int>(t), b);
          for (int j = 0; j < 2; ++j) {
            std::pair<int, double> rb[2];
            const int nrb = targets(nb, j, rb);
            const bool col_cons = node_kind_[nb] == NodeKind::Dirichlet;
            const double kij = Ke(2 * a + i, 2 * b + j);
            if (kij == 0.0) continue;
            for (int ia = 0; ia < nra; ++ia)
              for (int ib = 0; ib < nrb; ++ib) {
                const double val = kij * ra[ia].second * rb[ib].second;
                if (!row_cons && !col_cons)
                  tff.emplace_back(ra[ia].first, rb[ib].first, val);
                else if (!row_cons && col_cons)
                  tfc.emplace_back(ra[ia].first, rb[ib].first, val);
                else if (row_cons && !col_cons)
                  tcf.emplace_back(ra[ia].first, rb[ib].first, val);
                else
                  tcc.emplace_back(ra[ia].first, rb[ib].first, val);
              }
          }
        }
      }
    }
  }
  K_ff_.resize(n_free_, n_free_);
  K_ff_.setFromTriplets(tff.begin(), tff.end());
  K_fc_.resize(n_free_, 2 * n_constrained_);
  K_fc_.setFromTriplets(tfc.begin(), tfc.end());
  K_cf_.resize(2 * n_constrained_, n_free_);
  K_cf_.setFromTriplets(tcf.begin(), tcf.end());
  K_cc_.resize(2 * n_constrained_, 2 * n_constrained_);
  K_cc_.setFromTriplets(tcc.begin(), tcc.end());

  solver_.compute(K_ff_);
  if (solver_.info() != Eigen::Success)
    throw std::runtime_error("ElasticSystem: singular system (bad mesh or Dirichlet mask)");
}

ElasticSystem::Solution ElasticSystem::solve(const BoundaryData& data) const {
  const int nn = space_.n_nodes();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n_constrained_);
  for (int i = 0; i < nn; ++i) {
    if (node_kind_[i] != NodeKind::Dirichlet) continue;
    const Vector2d val = data(space_.node_tag(i), space_.node(i));
    g(2 * node_index_[i]) = val.x();
    g(2 * node_index_[i] + 1) = val.y();
  }
  const Eigen::VectorXd rhs = -(K_fc_ * g);
  Eigen::VectorXd x = solver_.solve(rhs);
  const double rhs_norm = std::max(1e-300, rhs.norm());
  double res = (K_ff_ * x - rhs).norm() / rhs_norm;
  for (int it = 0; it < 2 && res > 1e-13; ++it) {  // iterative refinement
    x += solver_.solve(rhs - K_ff_ * x);
    res = (K_ff_ * x - rhs).norm() / rhs_norm;
  }
  Solution sol;
  sol.residual = res;
  sol.u = Eigen::VectorXd::Zero(2 * nn);
  const int rigid_base = n_free_ - 3 * n_groups_;
  for (int gi = 0; gi < n_groups_; ++gi)
    sol.rigid.push_back(x.segment<3>(rigid_base + 3 * gi));
  for (int i = 0; i < nn; ++i) {
    switch (node_kind_[i]) {
      case NodeKind::Free:
        sol.u(2 * i) = x(2 * node_index_[i]);
        sol.u(2 * i + 1) = x(2 * node_index_[i] + 1);
        break;
      case NodeKind::Dirichlet:
        sol.u(2 * i) = g(2 * node_index_[i]);
        sol.u(2 * i + 1) = g(2 * node_index_[i] + 1);
        break;
      case NodeKind::Rigid: {
        const auto& c = sol.rigid[node_index_[i]];
        const Vector2d& xp = space_.node(i);
        sol.u(2 * i) = c(0) - c(2) * xp.y();
        sol.u(2 * i + 1) = c(1) + c(2) * xp.x();
        break;
      }
    }
  }
  return sol;
}

double ElasticSystem::reaction_pairing(const Eigen::VectorXd& full_u, int tag,
                                       const std::function<Vector2d(const Vector2d&)>& w) const {
  if (n_groups_ > 0)
    throw std::runtime_error("reaction_pairing: use the all-Dirichlet system");
  // rebuild the packed free/constrained vectors from the full field
  Eigen::VectorXd xf = Eigen::VectorXd::Zero(n_free_);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n_constrained_);
  const int nn = space_.n_nodes();
  for (int i = 0; i < nn; ++i) {
    if (node_kind_[i] == NodeKind::Free) {
      xf(2 * node_index_[i]) = full_u(2 * i);
      xf(2 * node_index_[i] + 1) = full_u(2 * i + 1);
    } else {
      g(2 * node_index_[i]) = full_u(2 * i);
      g(2 * node_index_[i] + 1) = full_u(2 * i + 1);
    }
  }
  const Eigen::VectorXd R = K_cf_ * xf + K_cc_ * g;
  double acc = 0.0;
  for (int i = 0; i < nn; ++i) {
    if (node_kind_[i] != NodeKind::Dirichlet || space_.node_tag(i) != tag) continue;
    const Vector2d wv = w(space_.node(i));
    acc += R(2 * node_index_[i]) * wv.x() + R(2 * node_index_[i] + 1) * wv.y();
  }
  return -acc;  // outward conormal flux of the domain seen from the inclusion
}

// ---------------------------------------------------------------------------

namespace {
Vector2d psi_val(int alpha, const Vector2d& x) {
  switch (alpha) {
    case 1: return {1.0, 0.0};
    case 2: return {0.0, 1.0};
    case 3: return {-x.y(), x.x()};
  }
  throw std::invalid_argument("psi_val: alpha");
}
}  // namespace

VFamily solve_v_family(const ElasticSystem& sys,
                       const std::function<Vector2d(const Vector2d&)>& phi) {
  VFamily fam;
  for (int i = 0; i < 2; ++i) {
    const int inc_tag = i == 0 ? kTagInc1 : kTagInc2;
    for (int alpha = 1; alpha <= 3; ++alpha) {
      auto sol = sys.solve([&](int tag, const Vector2d& x) -> Vector2d {
        if (tag == inc_tag) return psi_val(alpha, x);
        return Vector2d::Zero();
      });
      if (sol.residual > 1e-10)
        throw std::runtime_error("solve_v_family: linear solver residual too large");
      fam.v[i][alpha - 1] = std::move(sol.u);
    }
  }
  auto sol = sys.solve([&](int tag, const Vector2d& x) -> Vector2d {
    if (tag == kTagOuter) return phi(x);
    return Vector2d::Zero();
  });
  if (sol.residual > 1e-10)
    throw std::runtime_error("solve_v_family: linear solver residual too large");
  fam.v0 = std::move(sol.u);
  return fam;
}

OracleSolution solve_full(const ElasticSystem& rigid_sys,
                          const std::function<Vector2d(const Vector2d&)>& phi) {
  auto sol = rigid_sys.solve([&](int tag, const Vector2d& x) -> Vector2d {
    if (tag == kTagOuter) return phi(x);
    return Vector2d::Zero();
  });
  OracleSolution out;
  out.u = std::move(sol.u);
  out.residual = sol.residual;
  out.C.resize(static_cast<int>(sol.rigid.size()), 3);
  for (size_t gi = 0; gi < sol.rigid.size(); ++gi) out.C.row(gi) = sol.rigid[gi].transpose();
  return out;
}

OracleSolution solve_limit(const ElasticSystem& shared_sys,
                           const std::function<Vector2d(const Vector2d&)>& phi) {
  if (shared_sys.n_rigid_groups() != 1)
    throw std::invalid_argument("solve_limit: expected one shared rigid group");
  return solve_full(shared_sys, phi);
}

Eigen::MatrixXd gram_energy(const P2Space& space, const LameParams& p,
                            const std::vector<const Eigen::VectorXd*>& fields) {
  const int nf = static_cast<int>(fields.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nf, nf);
  const auto& mesh = space.mesh();
  std::vector<Matrix2d> grads(nf);
  for (size_t t = 0; t < mesh.tris.size(); ++t) {
    const auto& v = mesh.tris[t].v;
    const Vector2d &A = mesh.nodes[v[0]], &B = mesh.nodes[v[1]], &C = mesh.nodes[v[2]];
    const double twoA = (B - A).x() * (C - A).y() - (B - A).y() * (C - A).x();
    const Vector2d gL[3] = {perp(C - B) / twoA, perp(A - C) / twoA, perp(B - A) / twoA};
    const double area = 0.5 * twoA;
    for (const auto& q : kQuad) {
      Vector2d gN[6];
      shape_gradients(q, gL, gN);
      for (int f = 0; f < nf; ++f) {
        Matrix2d g = Matrix2d::Zero();
        for (int k = 0; k < 6; ++k) {
          const int node = space.tri_node(static_cast<int>(t), k);
          g.row(0) += (*fields[f])(2 * node) * gN[k].transpose();
          g.row(1) += (*fields[f])(2 * node + 1) * gN[k].transpose();
        }
        grads[f] = g;
      }
      const double w = q.w * area;
      for (int f = 0; f < nf; ++f)
        for (int h = f; h < nf; ++h) {
          const double e = w * energy_density(p, grads[f], grads[h]);
          G(f, h) += e;
          if (h != f) G(h, f) += e;
        }
    }
  }
  return G;
}

Eigen::MatrixXd compute_capacity(const P2Space& space, const LameParams& p, const VFamily& fam) {
  std::vector<const Eigen::VectorXd*> f;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) f.push_back(&fam.v[i][a]);
  return gram_energy(space, p, f);
}

Eigen::MatrixXd compute_btilde(const P2Space& space, const LameParams& p, const VFamily& fam) {
  std::vector<const Eigen::VectorXd*> f;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) f.push_back(&fam.v[i][a]);
  f.push_back(&fam.v0);
  const Eigen::MatrixXd G = gram_energy(space, p, f);
  Eigen::MatrixXd bt(2, 3);
  for (int j = 0; j < 2; ++j)
    for (int b = 0; b < 3; ++b) bt(j, b) = -G(6, 3 * j + b);
  return bt;
}

Eigen::MatrixXd solve_constants_from_capacity(const Eigen::MatrixXd& a6,
                                              const Eigen::MatrixXd& btilde) {
  Eigen::VectorXd rhs(6);
  for (int j = 0; j < 2; ++j)
    for (int b = 0; b < 3; ++b) rhs(3 * j + b) = btilde(j, b);
  const Eigen::VectorXd c = a6.ldlt().solve(rhs);
  Eigen::MatrixXd C(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) C(i, a) = c(3 * i + a);
  return C;
}

BFunctionals compute_b(const P2Space& space, const LameParams& p, const VFamily& fam,
                       const Eigen::MatrixXd& a6, const Eigen::Vector3d& C2) {
  BFunctionals out;
  const Eigen::MatrixXd bt = compute_btilde(space, p, fam);
  out.b_tilde = bt.row(0).transpose();
  for (int b = 0; b < 3; ++b) {
    double s = bt(0, b);
    for (int a = 0; a < 3; ++a) s -= C2(a) * (a6(a, b) + a6(3 + a, b));
    out.b1_duality(b) = s;
  }
  // assembled u_b route
  Eigen::VectorXd ub = fam.v0;
  for (int a = 0; a < 3; ++a) ub += C2(a) * (fam.v[0][a] + fam.v[1][a]);
  for (int b = 0; b < 3; ++b)
    out.b1_ub(b) = -space.energy_form(p, ub, fam.v[0][b]);
  return out;
}

Eigen::Vector3d compute_bstar(const P2Space& space, const LameParams& p, const VFamily& fam,
                              const OracleSolution& ustar) {
  Eigen::Vector3d b;
  for (int beta = 0; beta < 3; ++beta)
    b(beta) = -space.energy_form(p, ustar.u, fam.v[0][beta]);
  return b;
}

std::vector<Matrix2d> gradient_probe(const P2Space& space, const Eigen::VectorXd& u,
                                     const std::vector<Vector2d>& points) {
  std::vector<Matrix2d> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(space.gradient(u, p));
  return out;
}

double max_strain(const P2Space& space, const Eigen::VectorXd& u) {
  double worst = 0.0;
  const auto& mesh = space.mesh();
  for (size_t t = 0; t < mesh.tris.size(); ++t) {
    const auto& v = mesh.tris[t].v;
    const Vector2d &A = mesh.nodes[v[0]], &B = mesh.nodes[v[1]], &C = mesh.nodes[v[2]];
    const double twoA = (B - A).x() * (C - A).y() - (B - A).y() * (C - A).x();
    const Vector2d gL[3] = {perp(C - B) / twoA, perp(A - C) / twoA, perp(B - A) / twoA};
    for (const auto& q : kQuad) {
      Vector2d gN[6];
      shape_gradients(q, gL, gN);
      Matrix2d g = Matrix2d::Zero();
      for (int k = 0; k < 6; ++k) {
        const int node = space.tri_node(static_cast<int>(t), k);
        g.row(0) += u(2 * node) * gN[k].transpose();
        g.row(1) += u(2 * node + 1) * gN[k].transpose();
      }
      worst = std::max(worst, strain(g).norm());
    }
  }
  return worst;
}

void write_solution_csv(const P2Space& space, const Eigen::VectorXd& u, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_solution_csv: cannot open " + path);
  std::fprintf(f, "node,x,y,u1,u2\n");
  for (int i = 0; i < space.n_nodes(); ++i)
    std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g\n", i, space.node(i).x(), space.node(i).y(),
                 u(2 * i), u(2 * i + 1));
  std::fclose(f);
}

void write_functionals_json(const std::vector<FunctionalRecord>& records,
                            const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"epsilon", r.epsilon},
                   {"quantity", r.quantity},
                   {"indices", r.indices},
                   {"value", r.value},
                   {"mesh_h", r.mesh_h},
                   {"dofs", r.dofs}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_functionals_json: cannot open " + path);
  out << arr.dump(1) << "\n";
}

}  // namespace gapstress
