#pragma once

// Piecewise Lagrange functions on a tet mesh, the nonconforming basis
// functions attached to cells and interior facets, jump moments, and the
// assembled basis of the weakly continuous space.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cr3d/lagrange.hpp"
#include "cr3d/mesh.hpp"
#include "cr3d/ortho_tri.hpp"

namespace cr3d {

struct TetPiece {
  int tet;
  Eigen::VectorXd coeffs;  // Lagrange nodal values in the tet's local node order
};

/// Broken degree-p function; zero on tets without a piece. Pieces sorted by tet.
struct NodalFunction {
  int degree = 0;
  std::vector<TetPiece> pieces;
  const Eigen::VectorXd* on(int tet) const;
};

/// f = f + s * g.
void axpy(double s, const NodalFunction& g, NodalFunction& f);

/// Throws DomainError if x is not in tet K (tolerance 1e-12 in barycentrics).
double lagrange_eval(const SimplicialMesh3D& mesh, int K, const NodalFunction& f, const Vec3& x);
Vec3 lagrange_grad(const SimplicialMesh3D& mesh, int K, const NodalFunction& f, const Vec3& x);

/// Barycentric coordinates of x with respect to tet t (local vertex order).
Eigen::Vector4d tet_barycentric(const SimplicialMesh3D& mesh, int t, const Vec3& x);
/// Rows are grad lambda_j, j = 0..3.
Eigen::Matrix<double, 4, 3> bary_grads(const SimplicialMesh3D& mesh, int t);

/// Restriction of the piece on tet t to facet f at reference facet point (x1, x2)
/// of the given facet map.
double trace_eval(const SimplicialMesh3D& mesh, const NodalFunction& u, int t, const FacetMap& map,
                  double x1, double x2);

/// Conforming Lagrange basis function of a global node.
NodalFunction lagrange_node_function(const SimplicialMesh3D& mesh, const NodalSet& ns, int node);

/// Cell function: totally symmetric trace sym_basis(p)[k] on each facet of K, zero at interior nodes.
NodalFunction build_sym_nc(const SimplicialMesh3D& mesh, int K, int p, int k);

/// Interior-facet function: on each facet of K_i through the vertex V_i opposite T,
/// refl_basis(p)[k].base pulled back with origin V_i; zero at the remaining nodes.
NodalFunction build_refl_nc(const SimplicialMesh3D& mesh, int T, int p, int k);

/// Moments of the jump (interior) or trace (boundary) of u on facet T against
/// x1^a x2^b, a + b <= p - 1, in the coordinates of facet_pullback(mesh, T).
Eigen::VectorXd jump_moments(const SimplicialMesh3D& mesh, const NodalFunction& u, int T, int p);

/// Largest |moment| over all facets of the mesh.
double max_jump_moment(const SimplicialMesh3D& mesh, const NodalFunction& u, int p);

enum class DofKind { VertexLagrange, EdgeLagrange, FacetLagrange, CellLagrange, SymNc, ReflNc };

struct DofInfo {
  DofKind kind;
  int entity;  // vertex, edge, facet or tet index
  int index;   // global node for Lagrange kinds, k for nonconforming kinds
};

struct DofSystem {
  const SimplicialMesh3D* mesh = nullptr;
  int degree = 0;
  NodalSet nodes;
  std::vector<DofInfo> dofs;
  std::vector<NodalFunction> basis;
  /// tet_dofs[t]: (dof, piece index in basis[dof]) for every dof supported on t.
  std::vector<std::vector<std::pair<int, int>>> tet_dofs;
  int size() const { return static_cast<int>(dofs.size()); }
};

/// Basis of the weakly continuous space: interior non-vertex Lagrange nodes
/// (edges, facets, cells in that order), then d_triv(p) cell functions per tet,
/// then one facet function per interior facet.
DofSystem assemble_dof_system(const SimplicialMesh3D& mesh, int p);

/// Standard conforming Lagrange space with zero boundary values.
DofSystem assemble_conforming_system(const SimplicialMesh3D& mesh, int p);

/// Expected size of assemble_dof_system from entity counts.
int expected_dof_count(const SimplicialMesh3D& mesh, int p);

/// Lagrange mass and stiffness (with diffusion tensor A) on tet t.
void element_matrices(const SimplicialMesh3D& mesh, int t, int p, const Eigen::Matrix3d& A,
                      Eigen::MatrixXd& mass, Eigen::MatrixXd& stiff);

/// Dense Gram matrix of a list of broken functions: mw * L2 + sw * broken H1 seminorm.
Eigen::MatrixXd broken_gram(const SimplicialMesh3D& mesh, const std::vector<NodalFunction>& fs,
                            double mw, double sw);

/// Inner products of the same kind between each fs[i] and g.
Eigen::VectorXd broken_inner(const SimplicialMesh3D& mesh, const std::vector<NodalFunction>& fs,
                             const NodalFunction& g, double mw, double sw);

struct VertexDecomposition {
  int vertex = -1;
  int num_facets = 0;  // interior facets through the vertex
  double c_p = 0.0;
  NodalFunction b_v;      // conforming vertex hat
  NodalFunction u_tilde;  // sum of facet functions through the vertex
  /// u_tilde / (3 c_p): inside each tet of the patch only its three facets
  /// through the vertex contribute, so u_tilde(V) = 3 c_p.
  NodalFunction u_v;
  /// max deviation of b_v - u_v from the span of interior non-vertex Lagrange functions
  double residual = 0.0;
  /// max |u_tilde| over nodes on the boundary of the vertex patch
  double patch_boundary_max = 0.0;
  /// |u_tilde(V) - 3 c_p| over all tets of the patch
  double vertex_value_error = 0.0;
};

VertexDecomposition vertex_function_decomposition(const SimplicialMesh3D& mesh, int V, int p);

struct QkiCheck {
  Eigen::MatrixXd values;  // boundary nodal values, one column per Q_k^{(i)}
  double min_singular = 0.0;
  bool pass = false;
  /// max deviation of the ray values from the q / q-hat / q-tilde table
  double ray_table_error = 0.0;
};

/// Q_k^{(i)} on tet K: reflection trace on the three facets through vertex i,
/// totally symmetric closure (zero interior nodes) on the opposite facet.
QkiCheck qki_independence_check(const SimplicialMesh3D& mesh, int K, int p);

struct OctahedronObstruction {
  NodalFunction lift;
  double continuity_defect = 0.0;   // disagreement of boundary node values between facets
  double max_moment = 0.0;          // all facets
  double projection_residual = 0.0; // relative L2 distance to the assembled span plus all facet functions
};

/// Boundary lift of the degree-p sign polynomial on the octahedron with zero interior nodes.
OctahedronObstruction octahedron_obstruction(int p);

}  // namespace cr3d
