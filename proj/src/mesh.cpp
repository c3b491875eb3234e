#include "cr3d/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "cr3d/errors.hpp"
#include "cr3d/lagrange.hpp"

namespace cr3d {

namespace {

Tri sorted_tri(int a, int b, int c) {
  Tri t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

Seg sorted_seg(int a, int b) { return a < b ? Seg{a, b} : Seg{b, a}; }

std::string tri_str(const Tri& t) {
  return "(" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " + std::to_string(t[2]) + ")";
}

}  // namespace

SimplicialMesh3D::SimplicialMesh3D(std::vector<Vec3> vertices, std::vector<Tet> tets)
    : vertices_(std::move(vertices)), tets_(std::move(tets)) {
  build();
  validate();
}

void SimplicialMesh3D::build() {
  if (tets_.empty()) throw MeshValidationError("mesh has no tetrahedra");
  const int nv = num_vertices();
  std::vector<char> used(nv, 0);
  for (int t = 0; t < num_tets(); ++t) {
    const auto& k = tets_[t];
    for (int i = 0; i < 4; ++i) {
      if (k[i] < 0 || k[i] >= nv)
        throw MeshValidationError("tet " + std::to_string(t) + " references missing vertex " +
                                  std::to_string(k[i]));
      for (int j = 0; j < i; ++j)
        if (k[i] == k[j]) throw MeshValidationError("tet " + std::to_string(t) + " repeats a vertex");
      used[k[i]] = 1;
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw MeshValidationError("vertex " + std::to_string(v) + " belongs to no tet");

  std::map<Tri, int> fmap;
  std::map<Seg, int> emap;
  tet_facets_.resize(num_tets());
  tet_edges_.resize(num_tets());
  vertex_tets_.assign(nv, {});
  for (int t = 0; t < num_tets(); ++t) {
    const auto& k = tets_[t];
    for (int i = 0; i < 4; ++i) vertex_tets_[k[i]].push_back(t);
    for (int i = 0; i < 4; ++i) {
      const Tri f = sorted_tri(k[(i + 1) % 4], k[(i + 2) % 4], k[(i + 3) % 4]);
      auto [it, fresh] = fmap.emplace(f, static_cast<int>(facets_.size()));
      if (fresh) {
        facets_.push_back(f);
        facet_tets_.push_back({t, -1});
      } else {
        auto& adj = facet_tets_[it->second];
        if (adj[1] >= 0)
          throw MeshValidationError("facet " + tri_str(f) + " is shared by more than two tets");
        adj[1] = t;
      }
      tet_facets_[t][i] = it->second;
    }
    for (int i = 0; i < 6; ++i) {
      const Seg e = sorted_seg(k[kTetEdges[i][0]], k[kTetEdges[i][1]]);
      auto [it, fresh] = emap.emplace(e, static_cast<int>(edges_.size()));
      if (fresh) edges_.push_back(e);
      tet_edges_[t][i] = it->second;
    }
  }

  facet_normals_.resize(num_facets());
  vertex_boundary_.assign(nv, 0);
  edge_boundary_.assign(num_edges(), 0);
  for (int f = 0; f < num_facets(); ++f) {
    const Tri& tri = facets_[f];
    Vec3 n = (vertices_[tri[1]] - vertices_[tri[0]]).cross(vertices_[tri[2]] - vertices_[tri[0]]);
    const int k1 = facet_tets_[f][0];
    int opp = -1;
    for (int v : tets_[k1])
      if (v != tri[0] && v != tri[1] && v != tri[2]) opp = v;
    if (n.dot(vertices_[opp] - vertices_[tri[0]]) > 0) n = -n;
    facet_normals_[f] = n.normalized();
    if (facet_tets_[f][1] < 0) {
      for (int v : tri) vertex_boundary_[v] = 1;
      for (int a = 0; a < 3; ++a)
        edge_boundary_[emap.at(sorted_seg(tri[a], tri[(a + 1) % 3]))] = 1;
    }
  }
}

void SimplicialMesh3D::validate() const {
  for (int t = 0; t < num_tets(); ++t) {
    const double vol = tet_volume(t), d = tet_diameter(t);
    if (!(vol > 1e-12 * d * d * d))
      throw MeshValidationError("tet " + std::to_string(t) + " is degenerate");
  }
  // a vertex in the closed hull of a tet it does not belong to signals a
  // hanging node or overlapping cells
  for (int t = 0; t < num_tets(); ++t) {
    const auto& k = tets_[t];
    Vec3 lo = vertices_[k[0]], hi = lo;
    for (int i = 1; i < 4; ++i) {
      lo = lo.cwiseMin(vertices_[k[i]]);
      hi = hi.cwiseMax(vertices_[k[i]]);
    }
    const double tol = 1e-10 * tet_diameter(t);
    const auto map = tet_map(t);
    const Eigen::Matrix3d inv = map.A.inverse();
    for (int v = 0; v < num_vertices(); ++v) {
      if (v == k[0] || v == k[1] || v == k[2] || v == k[3]) continue;
      const Vec3& x = vertices_[v];
      if ((x.array() < lo.array() - tol).any() || (x.array() > hi.array() + tol).any()) continue;
      const Vec3 xi = inv * (x - map.origin);
      const double l[4] = {1.0 - xi.sum(), xi(0), xi(1), xi(2)};
      if (*std::min_element(l, l + 4) < -1e-10) continue;
      for (int i = 0; i < 4; ++i)
        if (std::abs(l[i]) <= 1e-10)
          throw MeshValidationError("non-conforming facet " + tri_str(facets_[tet_facets_[t][i]]) +
                                    ": vertex " + std::to_string(v) + " lies on it");
      throw MeshValidationError("vertex " + std::to_string(v) + " lies inside tet " + std::to_string(t));
    }
  }
}

double SimplicialMesh3D::facet_area(int f) const {
  const Tri& t = facets_[f];
  return 0.5 * (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]).norm();
}

int SimplicialMesh3D::find_facet(Tri s) const {
  std::sort(s.begin(), s.end());
  for (int t : vertex_tets_.at(s[0]))
    for (int i = 0; i < 4; ++i)
      if (facets_[tet_facets_[t][i]] == s) return tet_facets_[t][i];
  return -1;
}

int SimplicialMesh3D::find_edge(Seg s) const {
  if (s[0] > s[1]) std::swap(s[0], s[1]);
  for (int t : vertex_tets_.at(s[0]))
    for (int i = 0; i < 6; ++i)
      if (edges_[tet_edges_[t][i]] == s) return tet_edges_[t][i];
  return -1;
}

AffineMap3 SimplicialMesh3D::tet_map(int t) const {
  const auto& k = tets_[t];
  AffineMap3 m;
  m.origin = vertices_[k[0]];
  for (int i = 0; i < 3; ++i) m.A.col(i) = vertices_[k[i + 1]] - m.origin;
  return m;
}

double SimplicialMesh3D::tet_volume(int t) const { return std::abs(tet_map(t).A.determinant()) / 6.0; }

double SimplicialMesh3D::tet_diameter(int t) const {
  const auto& k = tets_[t];
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) d = std::max(d, (vertices_[k[i]] - vertices_[k[j]]).norm());
  return d;
}

double SimplicialMesh3D::max_diameter() const {
  double d = 0.0;
  for (int t = 0; t < num_tets(); ++t) d = std::max(d, tet_diameter(t));
  return d;
}

double SimplicialMesh3D::shape_regularity() const {
  double worst = 0.0;
  for (int t = 0; t < num_tets(); ++t) {
    const auto map = tet_map(t);
    // circumcentre c solves 2 A^T (c - origin) = |A_i|^2
    Vec3 rhs;
    for (int i = 0; i < 3; ++i) rhs(i) = map.A.col(i).squaredNorm();
    const Vec3 c = (2.0 * map.A.transpose()).lu().solve(rhs);
    const double R = c.norm();
    double area = 0.0;
    for (int i = 0; i < 4; ++i) area += facet_area(tet_facets_[t][i]);
    const double r = 3.0 * tet_volume(t) / area;
    worst = std::max(worst, R / r);
  }
  return worst;
}

int SimplicialMesh3D::local_vertex(int t, int v) const {
  for (int i = 0; i < 4; ++i)
    if (tets_[t][i] == v) return i;
  return -1;
}

SimplicialMesh3D generate_cube_mesh(int n) {
  if (n < 1) throw ParameterError("generate_cube_mesh: n must be >= 1");
  const int m = n + 1;
  auto id = [m](int i, int j, int k) { return i + m * (j + m * k); };
  std::vector<Vec3> v;
  v.reserve(m * m * m);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        v.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n);
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<Tet> tets;
  tets.reserve(6 * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& s : perms) {
          int c[3] = {i, j, k};
          Tet t;
          t[0] = id(c[0], c[1], c[2]);
          for (int step = 0; step < 3; ++step) {
            ++c[s[step]];
            t[step + 1] = id(c[0], c[1], c[2]);
          }
          tets.push_back(t);
        }
  return SimplicialMesh3D(std::move(v), std::move(tets));
}

SimplicialMesh3D generate_octahedron_mesh() {
  std::vector<Vec3> v = {Vec3(0, 0, 0),  Vec3(0, 0, 1),  Vec3(0, 0, -1), Vec3(1, 0, 0),
                         Vec3(0, 1, 0),  Vec3(-1, 0, 0), Vec3(0, -1, 0)};
  std::vector<Tet> tets;
  for (int pole : {1, 2})
    for (int i = 0; i < 4; ++i) tets.push_back({0, pole, 3 + i, 3 + (i + 1) % 4});
  return SimplicialMesh3D(std::move(v), std::move(tets));
}

SimplicialMesh3D generate_two_tet_mesh() {
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
  return SimplicialMesh3D(std::move(v), {{0, 1, 2, 3}, {0, 1, 2, 4}});
}

SimplicialMesh3D generate_split_tet_mesh() {
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1),
                         Vec3(0.25, 0.25, 0.25)};
  return SimplicialMesh3D(std::move(v), {{4, 1, 2, 3}, {0, 4, 2, 3}, {0, 1, 4, 3}, {0, 1, 2, 4}});
}

SimplicialMesh3D load_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool header = false;
  std::vector<Vec3> v;
  std::vector<Tet> tets;
  while (std::getline(in, line)) {
    ++lineno;
    // '#' starts a comment anywhere on the line
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (!header) {
      int version = 0;
      if (tag != "cr3dmesh" || !(ss >> version) || version != 1)
        throw MeshParseError(lineno, "expected header 'cr3dmesh 1'");
      header = true;
      continue;
    }
    std::string rest;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z) || (ss >> rest)) throw MeshParseError(lineno, "malformed vertex line");
      v.emplace_back(x, y, z);
    } else if (tag == "t") {
      Tet t;
      if (!(ss >> t[0] >> t[1] >> t[2] >> t[3]) || (ss >> rest))
        throw MeshParseError(lineno, "malformed tet line");
      for (int i : t)
        if (i < 0 || i >= static_cast<int>(v.size()))
          throw MeshParseError(lineno, "tet references undefined vertex " + std::to_string(i));
      tets.push_back(t);
    } else {
      throw MeshParseError(lineno, "unknown record '" + tag + "'");
    }
  }
  if (!header) throw MeshParseError(lineno, "missing header 'cr3dmesh 1'");
  return SimplicialMesh3D(std::move(v), std::move(tets));
}

SimplicialMesh3D load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);
  return load_mesh(in);
}

void save_mesh(const SimplicialMesh3D& mesh, std::ostream& out) {
  out << "cr3dmesh 1\n" << std::setprecision(17);
  for (const auto& x : mesh.vertices()) out << "v " << x(0) << ' ' << x(1) << ' ' << x(2) << '\n';
  for (const auto& t : mesh.tets()) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

void save_mesh_file(const SimplicialMesh3D& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path);
  save_mesh(mesh, out);
}

FacetMap facet_pullback(const SimplicialMesh3D& mesh, int f, int P) {
  if (f < 0 || f >= mesh.num_facets()) throw std::out_of_range("facet_pullback: facet index");
  const Tri& t = mesh.facet(f);
  FacetMap m;
  int rest[2], r = 0;
  bool found = false;
  for (int v : t) {
    if (v == P) found = true;
    else if (r < 2) rest[r++] = v;
  }
  if (!found) throw ParameterError("facet_pullback: P is not a vertex of the facet");
  m.verts = {P, rest[0], rest[1]};
  m.origin = mesh.vertex(P);
  m.e1 = mesh.vertex(rest[0]) - m.origin;
  m.e2 = mesh.vertex(rest[1]) - m.origin;
  return m;
}

FacetMap facet_pullback(const SimplicialMesh3D& mesh, int f) {
  if (f < 0 || f >= mesh.num_facets()) throw std::out_of_range("facet_pullback: facet index");
  return facet_pullback(mesh, f, mesh.facet(f)[0]);
}

NodalSet nodal_points(const SimplicialMesh3D& mesh, int p) {
  const auto& basis = lagrange_basis(p);
  NodalSet ns;
  ns.degree = p;
  ns.tet_nodes.resize(mesh.num_tets());
  std::map<std::vector<std::pair<int, int>>, int> keys;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tet(t);
    ns.tet_nodes[t].resize(basis.size());
    for (int i = 0; i < basis.size(); ++i) {
      const auto& a = basis.nodes()[i];
      std::vector<std::pair<int, int>> key;
      for (int j = 0; j < 4; ++j)
        if (a[j] > 0) key.emplace_back(k[j], a[j]);
      std::sort(key.begin(), key.end());
      auto [it, fresh] = keys.emplace(key, static_cast<int>(ns.nodes.size()));
      if (fresh) {
        NodeInfo info;
        info.x = Vec3::Zero();
        for (int j = 0; j < 4; ++j) info.x += (static_cast<double>(a[j]) / p) * mesh.vertex(k[j]);
        switch (key.size()) {
          case 1:
            info.kind = EntityKind::Vertex;
            info.entity = key[0].first;
            info.boundary = mesh.vertex_is_boundary(info.entity);
            break;
          case 2:
            info.kind = EntityKind::Edge;
            info.entity = mesh.find_edge({key[0].first, key[1].first});
            info.boundary = mesh.edge_is_boundary(info.entity);
            break;
          case 3:
            info.kind = EntityKind::Facet;
            info.entity = mesh.find_facet({key[0].first, key[1].first, key[2].first});
            info.boundary = mesh.facet_is_boundary(info.entity);
            break;
          default:
            info.kind = EntityKind::Cell;
            info.entity = t;
            info.boundary = false;
        }
        ns.nodes.push_back(info);
      }
      ns.tet_nodes[t][i] = it->second;
    }
  }
  return ns;
}

}  // namespace cr3d
