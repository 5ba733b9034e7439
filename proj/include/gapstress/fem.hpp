#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gapstress/core.hpp"
#include "gapstress/mesh.hpp"

namespace gapstress {

/// Boundary data callback: tag and node position to displacement.
using BoundaryData = std::function<Vector2d(int tag, const Vector2d&)>;

/// Quadratic (P2) triangle space over a Mesh: vertex nodes then one node per
/// unique edge.  Straight-sided elements.
class P2Space {
 public:
  explicit P2Space(const Mesh& mesh);

  const Mesh& mesh() const { return mesh_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  const Vector2d& node(int i) const { return nodes_[i]; }
  /// k in 0..5: vertices 0..2, then midside nodes opposite them.
  int tri_node(int t, int k) const { return tri_nodes_[t][k]; }
  /// 0 for interior nodes, else the BoundaryTag of the touching edge.
  int node_tag(int i) const { return node_tag_[i]; }
  double mesh_h() const { return h_max_; }

  /// All triangles whose closure contains p (within tolerance).
  std::vector<int> containing_tris(const Vector2d& p) const;

  /// Per-element P2 gradient of a nodal field (2 dofs per node), averaged
  /// over all elements containing p (patch average on edges/nodes).
  Matrix2d gradient(const Eigen::VectorXd& u, const Vector2d& p) const;

  /// Volume energy form int (C0 e(uA), e(uB)) by the assembly quadrature.
  double energy_form(const LameParams& p, const Eigen::VectorXd& uA,
                     const Eigen::VectorXd& uB) const;

 private:
  friend class ElasticSystem;
  Mesh mesh_;
  std::vector<Vector2d> nodes_;
  std::vector<std::array<int, 6>> tri_nodes_;
  std::vector<int> node_tag_;
  double h_max_ = 0.0;
  // uniform bin grid for point location
  Eigen::Vector2d grid_lo_;
  double grid_cell_ = 1.0;
  int grid_nx_ = 1, grid_ny_ = 1;
  std::vector<std::vector<int>> grid_;
};

/// What happens on each boundary tag.
struct BCSpec {
  enum class Kind { Natural, Dirichlet, Rigid };
  std::map<int, Kind> kind;
  std::map<int, int> rigid_group;  // tag -> group id; groups may be shared

  static BCSpec all_dirichlet();                 // v-family problems
  static BCSpec rigid_inclusions(bool shared);   // full / limit problems
  static BCSpec period_cell();                   // moduli problem
};

/// Assembled and factorized linear elasticity operator for one BC pattern.
/// Inclusion boundary nodes in Rigid mode are condensed onto d(d+1)/2 master
/// unknowns per group; no Lagrange multipliers.
class ElasticSystem {
 public:
  ElasticSystem(const P2Space& space, const LameParams& p, const BCSpec& bc);

  struct Solution {
    Eigen::VectorXd u;                      // full nodal field, 2 per node
    std::vector<Eigen::Vector3d> rigid;     // per rigid group (c1, c2, c3)
    double residual = 0.0;                  // relative linear-solver residual
  };

  Solution solve(const BoundaryData& data) const;

  /// Reaction pairing sum over Dirichlet nodes of `tag`: the discrete
  /// conormal flux integral int_{tag} (du/dnu) . w for a solved field.
  double reaction_pairing(const Eigen::VectorXd& full_u, int tag,
                          const std::function<Vector2d(const Vector2d&)>& w) const;

  int n_free_dofs() const { return n_free_; }
  int n_rigid_groups() const { return n_groups_; }

 private:
  const P2Space& space_;
  LameParams p_;
  BCSpec bc_;
  int n_free_ = 0;
  int n_groups_ = 0;
  // per node: Natural -> 2 plain dofs; Dirichlet -> packed constrained slot;
  // Rigid -> its group's 3 masters through T(x) = [[1,0,-y],[0,1,x]]
  enum class NodeKind : char { Free, Dirichlet, Rigid };
  std::vector<NodeKind> node_kind_;
  std::vector<int> node_index_;  // free dof base / constrained slot / group id
  int n_constrained_ = 0;
  Eigen::SparseMatrix<double> K_ff_, K_fc_, K_cf_, K_cc_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

// ---------------------------------------------------------------------------
// Oracle-level operations
// ---------------------------------------------------------------------------

struct OracleSolution {
  Eigen::VectorXd u;
  Eigen::MatrixXd C;  // one row of rigid constants per inclusion (or one shared row)
  double residual = 0.0;
};

/// The 2 x 3 family v_i^alpha plus v_0(phi); all on one factorization.
struct VFamily {
  std::array<std::array<Eigen::VectorXd, 3>, 2> v;
  Eigen::VectorXd v0;
};

/// Dirichlet data for the fields: psi_alpha on one inclusion, phi on the
/// outer boundary for v0.  phi is given as a plain position callback.
VFamily solve_v_family(const ElasticSystem& sys,
                       const std::function<Vector2d(const Vector2d&)>& phi);

OracleSolution solve_full(const ElasticSystem& rigid_sys,
                          const std::function<Vector2d(const Vector2d&)>& phi);
OracleSolution solve_limit(const ElasticSystem& shared_sys,
                           const std::function<Vector2d(const Vector2d&)>& phi);

/// Capacity matrix a_{ij}^{alpha beta} as the 6x6 Gram matrix of the family
/// in the energy form (volume quadrature).
Eigen::MatrixXd compute_capacity(const P2Space& space, const LameParams& p, const VFamily& fam);

/// Load functionals b~_j^beta = -int (C0 e(v0), e(v_j^beta)).
Eigen::MatrixXd compute_btilde(const P2Space& space, const LameParams& p, const VFamily& fam);

/// Solves the 6x6 free-constant system  sum_{i,alpha} C_i^alpha a_{ij}^{ab}
/// = b~_j^beta  assembled from the v-family (the cross path for solve_full).
Eigen::MatrixXd solve_constants_from_capacity(const Eigen::MatrixXd& a6,
                                              const Eigen::MatrixXd& btilde);

struct BFunctionals {
  Eigen::Vector3d b_tilde;      // b~_1^beta
  Eigen::Vector3d b1_duality;   // b_1^beta via b~ and the capacity sums
  Eigen::Vector3d b1_ub;        // b_1^beta via the assembled u_b field
};

/// Composite functionals of phi on the finite-eps mesh; C2 is the second
/// inclusion's rigid constants from solve_full.
BFunctionals compute_b(const P2Space& space, const LameParams& p, const VFamily& fam,
                       const Eigen::MatrixXd& a6, const Eigen::Vector3d& C2);

/// Blow-up factors on the touching-approximation mesh:
/// b_1^{*beta} = -int (C0 e(u*), e(v_1^{*beta})).
Eigen::Vector3d compute_bstar(const P2Space& space, const LameParams& p, const VFamily& fam,
                              const OracleSolution& ustar);

/// grad u at a list of points (patch-averaged P2 gradients).
std::vector<Matrix2d> gradient_probe(const P2Space& space, const Eigen::VectorXd& u,
                                     const std::vector<Vector2d>& points);

/// Maximum strain magnitude over all element quadrature points.
double max_strain(const P2Space& space, const Eigen::VectorXd& u);

/// CSV export of a displacement field: node id, x, y, u1, u2.
void write_solution_csv(const P2Space& space, const Eigen::VectorXd& u, const std::string& path);

/// JSON export of functional records {epsilon, quantity, indices, value,
/// mesh_h, dofs}.
struct FunctionalRecord {
  double epsilon;
  std::string quantity;
  std::vector<int> indices;
  double value;
  double mesh_h;
  int dofs;
};
void write_functionals_json(const std::vector<FunctionalRecord>& records, const std::string& path);

}  // namespace gapstress
