#pragma once

// Conforming tetrahedral meshes with facet adjacency, plus the degree-p
// Lagrange nodal set and facet pullbacks used by the finite element space.

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace cr3d {

using Vec3 = Eigen::Vector3d;
using Tet = std::array<int, 4>;
using Tri = std::array<int, 3>;  // ascending global vertex indices
using Seg = std::array<int, 2>;

struct AffineMap3 {
  Vec3 origin;
  Eigen::Matrix3d A;
  Vec3 operator()(const Vec3& x) const { return origin + A * x; }
};

/// Maps the unit triangle into R^3: (0,0) -> P, (1,0) -> Q, (0,1) -> S.
struct FacetMap {
  std::array<int, 3> verts;  // global indices of P, Q, S
  Vec3 origin;
  Vec3 e1, e2;
  Vec3 operator()(double x1, double x2) const { return origin + x1 * e1 + x2 * e2; }
};

class SimplicialMesh3D {
 public:
  /// Builds adjacency and runs validate(); throws MeshValidationError.
  SimplicialMesh3D(std::vector<Vec3> vertices, std::vector<Tet> tets);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_tets() const { return static_cast<int>(tets_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Vec3& vertex(int i) const { return vertices_[i]; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const Tet& tet(int t) const { return tets_[t]; }
  const std::vector<Tet>& tets() const { return tets_; }
  const Tri& facet(int f) const { return facets_[f]; }
  const Seg& edge(int e) const { return edges_[e]; }

  /// Lower tet index first; second is -1 on the boundary.
  const std::array<int, 2>& facet_tets(int f) const { return facet_tets_[f]; }
  bool facet_is_boundary(int f) const { return facet_tets_[f][1] < 0; }
  /// Unit normal: outward on the boundary, from facet_tets[0] into facet_tets[1] inside.
  const Vec3& facet_normal(int f) const { return facet_normals_[f]; }
  double facet_area(int f) const;

  /// Facet of tet t opposite its local vertex i.
  int tet_facet(int t, int i) const { return tet_facets_[t][i]; }
  int tet_edge(int t, int i) const { return tet_edges_[t][i]; }
  /// Local edge i joins local vertices kTetEdges[i].
  static constexpr std::array<std::array<int, 2>, 6> kTetEdges{
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  int find_facet(Tri sorted) const;  // -1 if absent
  int find_edge(Seg sorted) const;

  bool vertex_is_boundary(int v) const { return vertex_boundary_[v]; }
  bool edge_is_boundary(int e) const { return edge_boundary_[e]; }
  const std::vector<int>& vertex_tets(int v) const { return vertex_tets_[v]; }

  AffineMap3 tet_map(int t) const;
  double tet_volume(int t) const;
  double tet_diameter(int t) const;
  double max_diameter() const;
  /// max over tets of circumradius / inradius.
  double shape_regularity() const;

  /// Local index (0..3) of global vertex v in tet t, or -1.
  int local_vertex(int t, int v) const;

 private:
  void build();
  void validate() const;

  std::vector<Vec3> vertices_;
  std::vector<Tet> tets_;
  std::vector<Tri> facets_;
  std::vector<Seg> edges_;
  std::vector<std::array<int, 2>> facet_tets_;
  std::vector<Vec3> facet_normals_;
  std::vector<std::array<int, 4>> tet_facets_;
  std::vector<std::array<int, 6>> tet_edges_;
  std::vector<char> vertex_boundary_;
  std::vector<char> edge_boundary_;
  std::vector<std::vector<int>> vertex_tets_;
};

/// Kuhn subdivision of [0,1]^3 into 6 n^3 tets.
SimplicialMesh3D generate_cube_mesh(int n);

/// Origin, A+ = (0,0,1), A- = (0,0,-1), A1..A4 = (1,0,0), (0,1,0), (-1,0,0), (0,-1,0).
/// Vertex order: [origin, A+, A-, A1, A2, A3, A4]; 8 tets (origin, A±, A_i, A_{i+1}).
SimplicialMesh3D generate_octahedron_mesh();

/// Unit reference tet and its mirror image through the plane z = 0.
SimplicialMesh3D generate_two_tet_mesh();

/// Barycentric split of the unit reference tet into 4 tets around its centroid.
SimplicialMesh3D generate_split_tet_mesh();

/// Text format: first line "cr3dmesh 1", then "v x y z" and "t i0 i1 i2 i3" lines.
SimplicialMesh3D load_mesh(std::istream& in);
SimplicialMesh3D load_mesh_file(const std::string& path);
void save_mesh(const SimplicialMesh3D& mesh, std::ostream& out);
void save_mesh_file(const SimplicialMesh3D& mesh, const std::string& path);

/// Pullback of facet f with (0,0) -> P and the other two vertices in ascending order.
FacetMap facet_pullback(const SimplicialMesh3D& mesh, int f, int P);
/// Same, with the lowest facet vertex as P.
FacetMap facet_pullback(const SimplicialMesh3D& mesh, int f);

enum class EntityKind { Vertex = 0, Edge = 1, Facet = 2, Cell = 3 };

struct NodeInfo {
  Vec3 x;
  EntityKind kind;
  int entity;  // vertex, edge, facet or tet index
  bool boundary;
};

/// Degree-p Lagrange nodes, shared across tets.
struct NodalSet {
  int degree = 0;
  std::vector<NodeInfo> nodes;
  std::vector<std::vector<int>> tet_nodes;  // local index -> global node
};

NodalSet nodal_points(const SimplicialMesh3D& mesh, int p);

}  // namespace cr3d
