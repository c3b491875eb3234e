#include "cr3d/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cr3d/errors.hpp"
#include "cr3d/quadrature.hpp"
#include "cr3d/s3_decomp.hpp"

namespace cr3d {

const Eigen::VectorXd* NodalFunction::on(int tet) const {
  auto it = std::lower_bound(pieces.begin(), pieces.end(), tet,
                             [](const TetPiece& p, int t) { return p.tet < t; });
  if (it == pieces.end() || it->tet != tet) return nullptr;
  return &it->coeffs;
}

void axpy(double s, const NodalFunction& g, NodalFunction& f) {
  if (f.pieces.empty()) f.degree = g.degree;
  if (f.degree != g.degree) throw ParameterError("axpy: degree mismatch");
  for (const auto& gp : g.pieces) {
    auto it = std::lower_bound(f.pieces.begin(), f.pieces.end(), gp.tet,
                               [](const TetPiece& p, int t) { return p.tet < t; });
    if (it != f.pieces.end() && it->tet == gp.tet) it->coeffs += s * gp.coeffs;
    else f.pieces.insert(it, TetPiece{gp.tet, s * gp.coeffs});
  }
}

Eigen::Vector4d tet_barycentric(const SimplicialMesh3D& mesh, int t, const Vec3& x) {
  const auto map = mesh.tet_map(t);
  return bary_from_ref(map.A.lu().solve(x - map.origin));
}

Eigen::Matrix<double, 4, 3> bary_grads(const SimplicialMesh3D& mesh, int t) {
  const Eigen::Matrix3d inv = mesh.tet_map(t).A.inverse();
  Eigen::Matrix<double, 4, 3> g;
  g.row(0) = -inv.colwise().sum();
  g.bottomRows<3>() = inv;
  return g;
}

namespace {

void check_point_in(const Eigen::Vector4d& lam, int K) {
  if (lam.minCoeff() < -1e-12) throw DomainError("point outside tet " + std::to_string(K));
}

}  // namespace

double lagrange_eval(const SimplicialMesh3D& mesh, int K, const NodalFunction& f, const Vec3& x) {
  const Eigen::Vector4d lam = tet_barycentric(mesh, K, x);
  check_point_in(lam, K);
  const auto* c = f.on(K);
  if (!c) return 0.0;
  return lagrange_basis(f.degree).values(lam).dot(*c);
}

Vec3 lagrange_grad(const SimplicialMesh3D& mesh, int K, const NodalFunction& f, const Vec3& x) {
  const Eigen::Vector4d lam = tet_barycentric(mesh, K, x);
  check_point_in(lam, K);
  const auto* c = f.on(K);
  if (!c) return Vec3::Zero();
  const Eigen::MatrixXd dl = lagrange_basis(f.degree).bary_gradients(lam);
  return (bary_grads(mesh, K).transpose() * (dl.transpose() * *c));
}

double trace_eval(const SimplicialMesh3D& mesh, const NodalFunction& u, int t, const FacetMap& map,
                  double x1, double x2) {
  const auto* c = u.on(t);
  if (!c) return 0.0;
  Eigen::Vector4d lam = Eigen::Vector4d::Zero();
  const int lp = mesh.local_vertex(t, map.verts[0]), lq = mesh.local_vertex(t, map.verts[1]),
            ls = mesh.local_vertex(t, map.verts[2]);
  if (lp < 0 || lq < 0 || ls < 0) throw ParameterError("trace_eval: facet is not part of the tet");
  lam(lp) = 1.0 - x1 - x2;
  lam(lq) = x1;
  lam(ls) = x2;
  return lagrange_basis(u.degree).values(lam).dot(*c);
}

namespace {

std::vector<std::vector<std::pair<int, int>>> node_tets(const NodalSet& ns) {
  std::vector<std::vector<std::pair<int, int>>> out(ns.nodes.size());
  for (int t = 0; t < static_cast<int>(ns.tet_nodes.size()); ++t)
    for (int i = 0; i < static_cast<int>(ns.tet_nodes[t].size()); ++i)
      out[ns.tet_nodes[t][i]].emplace_back(t, i);
  return out;
}

NodalFunction node_function(int p, int nloc, const std::vector<std::pair<int, int>>& incidence) {
  NodalFunction f;
  f.degree = p;
  for (auto [t, i] : incidence) f.pieces.push_back({t, Eigen::VectorXd::Unit(nloc, i)});
  std::sort(f.pieces.begin(), f.pieces.end(),
            [](const TetPiece& a, const TetPiece& b) { return a.tet < b.tet; });
  return f;
}

// Reference coordinates on the facet of tet t opposite local vertex `skip`,
// with origin at local vertex `origin` and the other two in ascending global order.
RefTrianglePoint facet_coords(const SimplicialMesh3D& mesh, int t, const MultiIndex4& a, int p,
                              int skip, int origin) {
  int rest[2], r = 0;
  for (int j = 0; j < 4; ++j)
    if (j != skip && j != origin) rest[r++] = j;
  if (mesh.tet(t)[rest[0]] > mesh.tet(t)[rest[1]]) std::swap(rest[0], rest[1]);
  return RefTrianglePoint::unchecked(static_cast<double>(a[rest[0]]) / p,
                                     static_cast<double>(a[rest[1]]) / p);
}

}  // namespace

NodalFunction lagrange_node_function(const SimplicialMesh3D& mesh, const NodalSet& ns, int node) {
  if (node < 0 || node >= static_cast<int>(ns.nodes.size()))
    throw std::out_of_range("lagrange_node_function: node index");
  std::vector<std::pair<int, int>> inc;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (int i = 0; i < static_cast<int>(ns.tet_nodes[t].size()); ++i)
      if (ns.tet_nodes[t][i] == node) inc.emplace_back(t, i);
  return node_function(ns.degree, lagrange_basis(ns.degree).size(), inc);
}

NodalFunction build_sym_nc(const SimplicialMesh3D& mesh, int K, int p, int k) {
  if (K < 0 || K >= mesh.num_tets()) throw std::out_of_range("build_sym_nc: tet index");
  const auto sym = sym_basis(p);
  if (k < 0 || k >= static_cast<int>(sym.size())) throw ParameterError("build_sym_nc: k >= d_triv(p)");
  const auto& lb = lagrange_basis(p);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(lb.size());
  for (int i = 0; i < lb.size(); ++i) {
    const auto& a = lb.nodes()[i];
    int j = -1;
    for (int l = 0; l < 4 && j < 0; ++l)
      if (a[l] == 0) j = l;
    if (j < 0) continue;
    int origin = (j == 0) ? 1 : 0;
    for (int l = 0; l < 4; ++l)
      if (l != j && mesh.tet(K)[l] < mesh.tet(K)[origin]) origin = l;
    c(i) = ortho_eval(sym[k], facet_coords(mesh, K, a, p, j, origin));
  }
  NodalFunction f;
  f.degree = p;
  f.pieces.push_back({K, c});
  return f;
}

NodalFunction build_refl_nc(const SimplicialMesh3D& mesh, int T, int p, int k) {
  if (T < 0 || T >= mesh.num_facets()) throw std::out_of_range("build_refl_nc: facet index");
  if (mesh.facet_is_boundary(T)) throw ParameterError("build_refl_nc: facet is on the boundary");
  const auto refl = refl_basis(p);
  if (k < 0 || k >= static_cast<int>(refl.size())) throw ParameterError("build_refl_nc: k >= d_refl(p)");
  const auto& lb = lagrange_basis(p);
  NodalFunction f;
  f.degree = p;
  for (int K : mesh.facet_tets(T)) {
    int iv = -1;
    for (int l = 0; l < 4; ++l)
      if (mesh.tet_facet(K, l) == T) iv = l;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(lb.size());
    for (int i = 0; i < lb.size(); ++i) {
      const auto& a = lb.nodes()[i];
      int j = -1;
      for (int l = 0; l < 4 && j < 0; ++l)
        if (l != iv && a[l] == 0) j = l;
      if (j < 0) continue;
      c(i) = ortho_eval(refl[k].base, facet_coords(mesh, K, a, p, j, iv));
    }
    f.pieces.push_back({K, c});
  }
  return f;
}

Eigen::VectorXd jump_moments(const SimplicialMesh3D& mesh, const NodalFunction& u, int T, int p) {
  if (T < 0 || T >= mesh.num_facets()) throw std::out_of_range("jump_moments: facet index");
  if (p < 1) throw ParameterError("jump_moments: p must be >= 1");
  const FacetMap map = facet_pullback(mesh, T);
  const auto& quad = simplex_quadrature(2, std::max(2 * p, u.degree + p - 1));
  const auto& adj = mesh.facet_tets(T);
  std::vector<double> jump(quad.points.size());
  for (size_t q = 0; q < quad.points.size(); ++q) {
    const double x1 = quad.points[q](0), x2 = quad.points[q](1);
    const double v1 = trace_eval(mesh, u, adj[0], map, x1, x2);
    jump[q] = (adj[1] < 0) ? v1 : trace_eval(mesh, u, adj[1], map, x1, x2) - v1;
  }
  const double scale = 2.0 * mesh.facet_area(T);
  std::vector<double> out;
  for (int a = 0; a <= p - 1; ++a)
    for (int b = 0; a + b <= p - 1; ++b) {
      double s = 0.0;
      for (size_t q = 0; q < quad.points.size(); ++q)
        s += quad.weights[q] * jump[q] * std::pow(quad.points[q](0), a) * std::pow(quad.points[q](1), b);
      out.push_back(scale * s);
    }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

double max_jump_moment(const SimplicialMesh3D& mesh, const NodalFunction& u, int p) {
  std::set<int> facets;
  for (const auto& pc : u.pieces)
    for (int i = 0; i < 4; ++i) facets.insert(mesh.tet_facet(pc.tet, i));
  double worst = 0.0;
  for (int f : facets) worst = std::max(worst, jump_moments(mesh, u, f, p).cwiseAbs().maxCoeff());
  return worst;
}

namespace {

void finish_tet_dofs(DofSystem& sys) {
  sys.tet_dofs.assign(sys.mesh->num_tets(), {});
  for (int d = 0; d < sys.size(); ++d)
    for (int i = 0; i < static_cast<int>(sys.basis[d].pieces.size()); ++i)
      sys.tet_dofs[sys.basis[d].pieces[i].tet].emplace_back(d, i);
}

void add_lagrange_dofs(DofSystem& sys, bool with_vertices) {
  const auto inc = node_tets(sys.nodes);
  const int nloc = lagrange_basis(sys.degree).size();
  std::vector<int> order;
  for (int n = 0; n < static_cast<int>(sys.nodes.nodes.size()); ++n) {
    const auto& info = sys.nodes.nodes[n];
    if (info.boundary) continue;
    if (info.kind == EntityKind::Vertex && !with_vertices) continue;
    order.push_back(n);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &na = sys.nodes.nodes[a], &nb = sys.nodes.nodes[b];
    if (na.kind != nb.kind) return na.kind < nb.kind;
    if (na.entity != nb.entity) return na.entity < nb.entity;
    return a < b;
  });
  static constexpr DofKind kinds[4] = {DofKind::VertexLagrange, DofKind::EdgeLagrange,
                                       DofKind::FacetLagrange, DofKind::CellLagrange};
  for (int n : order) {
    const auto& info = sys.nodes.nodes[n];
    sys.dofs.push_back({kinds[static_cast<int>(info.kind)], info.entity, n});
    sys.basis.push_back(node_function(sys.degree, nloc, inc[n]));
  }
}

int binom(int n, int k) {
  if (k < 0 || n < k) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

DofSystem assemble_dof_system(const SimplicialMesh3D& mesh, int p) {
  DofSystem sys;
  sys.mesh = &mesh;
  sys.degree = p;
  sys.nodes = nodal_points(mesh, p);
  add_lagrange_dofs(sys, false);
  const int dt = multiplicities(p).triv;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (int k = 0; k < dt; ++k) {
      sys.dofs.push_back({DofKind::SymNc, t, k});
      sys.basis.push_back(build_sym_nc(mesh, t, p, k));
    }
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (mesh.facet_is_boundary(f)) continue;
    sys.dofs.push_back({DofKind::ReflNc, f, 0});
    sys.basis.push_back(build_refl_nc(mesh, f, p, 0));
  }
  finish_tet_dofs(sys);
  return sys;
}

DofSystem assemble_conforming_system(const SimplicialMesh3D& mesh, int p) {
  DofSystem sys;
  sys.mesh = &mesh;
  sys.degree = p;
  sys.nodes = nodal_points(mesh, p);
  add_lagrange_dofs(sys, true);
  finish_tet_dofs(sys);
  return sys;
}

int expected_dof_count(const SimplicialMesh3D& mesh, int p) {
  int ie = 0, ifc = 0;
  for (int e = 0; e < mesh.num_edges(); ++e) ie += !mesh.edge_is_boundary(e);
  for (int f = 0; f < mesh.num_facets(); ++f) ifc += !mesh.facet_is_boundary(f);
  return ie * (p - 1) + ifc * binom(p - 1, 2) + mesh.num_tets() * binom(p - 1, 3) +
         mesh.num_tets() * multiplicities(p).triv + ifc;
}

void element_matrices(const SimplicialMesh3D& mesh, int t, int p, const Eigen::Matrix3d& A,
                      Eigen::MatrixXd& mass, Eigen::MatrixXd& stiff) {
  const auto& lb = lagrange_basis(p);
  const auto& quad = simplex_quadrature(3, 2 * p);
  const double J = std::abs(mesh.tet_map(t).A.determinant());
  const Eigen::Matrix<double, 4, 3> G = bary_grads(mesh, t);
  const int n = lb.size();
  mass.setZero(n, n);
  stiff.setZero(n, n);
  for (size_t q = 0; q < quad.points.size(); ++q) {
    const Eigen::Vector4d lam = bary_from_ref(quad.points[q]);
    const Eigen::VectorXd v = lb.values(lam);
    const Eigen::MatrixXd g = lb.bary_gradients(lam) * G;  // n x 3
    const double w = quad.weights[q] * J;
    mass.noalias() += w * v * v.transpose();
    stiff.noalias() += w * g * A * g.transpose();
  }
}

namespace {

std::vector<std::vector<std::pair<int, const Eigen::VectorXd*>>> by_tet(
    const SimplicialMesh3D& mesh, const std::vector<NodalFunction>& fs) {
  std::vector<std::vector<std::pair<int, const Eigen::VectorXd*>>> out(mesh.num_tets());
  for (int i = 0; i < static_cast<int>(fs.size()); ++i)
    for (const auto& pc : fs[i].pieces) out[pc.tet].emplace_back(i, &pc.coeffs);
  return out;
}

}  // namespace

Eigen::MatrixXd broken_gram(const SimplicialMesh3D& mesh, const std::vector<NodalFunction>& fs,
                            double mw, double sw) {
  const int n = static_cast<int>(fs.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return G;
  const int p = fs[0].degree;
  const auto inc = by_tet(mesh, fs);
  Eigen::MatrixXd M, S;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    if (inc[t].empty()) continue;
    element_matrices(mesh, t, p, Eigen::Matrix3d::Identity(), M, S);
    const Eigen::MatrixXd L = mw * M + sw * S;
    for (const auto& [i, ci] : inc[t]) {
      const Eigen::VectorXd Li = L * *ci;
      for (const auto& [j, cj] : inc[t]) G(i, j) += cj->dot(Li);
    }
  }
  return G;
}

Eigen::VectorXd broken_inner(const SimplicialMesh3D& mesh, const std::vector<NodalFunction>& fs,
                             const NodalFunction& g, double mw, double sw) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fs.size()));
  const auto inc = by_tet(mesh, fs);
  Eigen::MatrixXd M, S;
  for (const auto& pc : g.pieces) {
    if (inc[pc.tet].empty()) continue;
    element_matrices(mesh, pc.tet, g.degree, Eigen::Matrix3d::Identity(), M, S);
    const Eigen::VectorXd Lg = (mw * M + sw * S) * pc.coeffs;
    for (const auto& [i, ci] : inc[pc.tet]) out(i) += ci->dot(Lg);
  }
  return out;
}

VertexDecomposition vertex_function_decomposition(const SimplicialMesh3D& mesh, int V, int p) {
  if (V < 0 || V >= mesh.num_vertices()) throw std::out_of_range("vertex_function_decomposition: vertex");
  if (mesh.vertex_is_boundary(V)) throw ParameterError("vertex_function_decomposition: boundary vertex");
  VertexDecomposition out;
  out.vertex = V;
  out.c_p = vertex_constant(p);
  const NodalSet ns = nodal_points(mesh, p);
  const auto inc = node_tets(ns);
  const int nloc = lagrange_basis(p).size();
  int vnode = -1;
  for (int n = 0; n < static_cast<int>(ns.nodes.size()); ++n)
    if (ns.nodes[n].kind == EntityKind::Vertex && ns.nodes[n].entity == V) vnode = n;
  out.b_v = node_function(p, nloc, inc[vnode]);

  std::set<int> facets;
  for (int t : mesh.vertex_tets(V))
    for (int i = 0; i < 4; ++i) {
      const int f = mesh.tet_facet(t, i);
      const Tri& tri = mesh.facet(f);
      if (std::find(tri.begin(), tri.end(), V) != tri.end()) facets.insert(f);
    }
  out.num_facets = static_cast<int>(facets.size());
  out.u_tilde.degree = p;
  for (int f : facets) axpy(1.0, build_refl_nc(mesh, f, p, 0), out.u_tilde);
  out.u_v.degree = p;
  axpy(1.0 / (3.0 * out.c_p), out.u_tilde, out.u_v);

  NodalFunction w = out.b_v;
  axpy(-1.0, out.u_v, w);
  for (int n = 0; n < static_cast<int>(ns.nodes.size()); ++n) {
    std::vector<double> vals;
    for (auto [t, i] : inc[n]) {
      const auto* c = w.on(t);
      vals.push_back(c ? (*c)(i) : 0.0);
    }
    const auto& info = ns.nodes[n];
    const bool free = !info.boundary && info.kind != EntityKind::Vertex;
    double mean = 0.0;
    if (free) {
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
    }
    for (double v : vals) out.residual = std::max(out.residual, std::abs(v - mean));
  }

  const auto& lb = lagrange_basis(p);
  for (int t : mesh.vertex_tets(V)) {
    const int lv = mesh.local_vertex(t, V);
    const auto* c = out.u_tilde.on(t);
    for (int i = 0; i < lb.size(); ++i) {
      const double v = c ? (*c)(i) : 0.0;
      if (lb.nodes()[i][lv] == 0) out.patch_boundary_max = std::max(out.patch_boundary_max, std::abs(v));
      if (lb.nodes()[i][lv] == p)
        out.vertex_value_error =
            std::max(out.vertex_value_error, std::abs(v - 3.0 * out.c_p));
    }
  }
  // u_tilde must not leak outside the patch
  for (const auto& pc : out.u_tilde.pieces)
    if (mesh.local_vertex(pc.tet, V) < 0)
      out.patch_boundary_max = std::max(out.patch_boundary_max, pc.coeffs.cwiseAbs().maxCoeff());
  return out;
}

QkiCheck qki_independence_check(const SimplicialMesh3D& mesh, int K, int p) {
  if (K < 0 || K >= mesh.num_tets()) throw std::out_of_range("qki_independence_check: tet index");
  const auto refl = refl_basis(p);
  const int d = static_cast<int>(refl.size());
  const auto& lb = lagrange_basis(p);
  std::vector<int> bnodes;
  for (int i = 0; i < lb.size(); ++i) {
    const auto& a = lb.nodes()[i];
    if (a[0] == 0 || a[1] == 0 || a[2] == 0 || a[3] == 0) bnodes.push_back(i);
  }
  QkiCheck out;
  out.values.setZero(static_cast<Eigen::Index>(bnodes.size()), 4 * d);
  for (int c = 0; c < 4; ++c)
    for (int k = 0; k < d; ++k)
      for (size_t r = 0; r < bnodes.size(); ++r) {
        const auto& a = lb.nodes()[bnodes[r]];
        int j = -1;
        for (int l = 0; l < 4 && j < 0; ++l)
          if (l != c && a[l] == 0) j = l;
        // nodes interior to the facet opposite the centre keep the zero closure
        if (j < 0) continue;
        out.values(static_cast<Eigen::Index>(r), 4 * k + c) =
            ortho_eval(refl[k].base, facet_coords(mesh, K, a, p, j, c));
      }

  // ray A0 -> Aj: centre 0 gives q(t), centre j gives q(1-t), others b(t, 1-t)
  for (int k = 0; k < d; ++k)
    for (size_t r = 0; r < bnodes.size(); ++r) {
      const auto& a = lb.nodes()[bnodes[r]];
      for (int j = 1; j < 4; ++j) {
        if (a[0] + a[j] != p) continue;
        const double t = static_cast<double>(a[j]) / p;
        for (int c = 0; c < 4; ++c) {
          double expect;
          if (c == 0) expect = ortho_eval(refl[k].base, RefTrianglePoint::unchecked(t, 0.0));
          else if (c == j) expect = ortho_eval(refl[k].base, RefTrianglePoint::unchecked(1.0 - t, 0.0));
          else expect = ortho_eval(refl[k].base, RefTrianglePoint::unchecked(t, 1.0 - t));
          out.ray_table_error =
              std::max(out.ray_table_error,
                       std::abs(out.values(static_cast<Eigen::Index>(r), 4 * k + c) - expect));
        }
      }
    }

  Eigen::MatrixXd N = out.values;
  for (int c = 0; c < N.cols(); ++c) N.col(c).normalize();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(N);
  out.min_singular = svd.singularValues().minCoeff();
  out.pass = out.min_singular > 1e-9;
  return out;
}

OctahedronObstruction octahedron_obstruction(int p) {
  const auto sign = sign_basis(p);
  if (sign.empty()) throw ParameterError("octahedron_obstruction: no sign polynomial of this degree");
  static const SimplicialMesh3D mesh = generate_octahedron_mesh();
  const NodalSet ns = nodal_points(mesh, p);
  const auto& lb = lagrange_basis(p);
  std::vector<double> val(ns.nodes.size(), 0.0);
  std::vector<char> seen(ns.nodes.size(), 0);
  OctahedronObstruction out;
  // tet (origin, pole, A_i, A_{i+1}); odd i runs the first axis to A_i, even i to A_{i+1}
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const int i = t % 4 + 1;
    for (int n = 0; n < lb.size(); ++n) {
      const auto& a = lb.nodes()[n];
      if (a[0] != 0) continue;
      const double s2 = static_cast<double>(a[2]) / p, s3 = static_cast<double>(a[3]) / p;
      const auto pt = (i % 2 == 1) ? RefTrianglePoint::unchecked(s2, s3) : RefTrianglePoint::unchecked(s3, s2);
      const double v = ortho_eval(sign[0], pt);
      const int g = ns.tet_nodes[t][n];
      if (seen[g]) out.continuity_defect = std::max(out.continuity_defect, std::abs(v - val[g]));
      else {
        val[g] = v;
        seen[g] = 1;
      }
    }
  }
  out.lift.degree = p;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    Eigen::VectorXd c(lb.size());
    for (int n = 0; n < lb.size(); ++n) c(n) = val[ns.tet_nodes[t][n]];
    out.lift.pieces.push_back({t, c});
  }
  out.max_moment = max_jump_moment(mesh, out.lift, p);

  DofSystem sys = assemble_dof_system(mesh, p);
  std::vector<NodalFunction> span = sys.basis;
  const int dr = multiplicities(p).refl;
  for (int f = 0; f < mesh.num_facets(); ++f)
    if (!mesh.facet_is_boundary(f))
      for (int k = 1; k < dr; ++k) span.push_back(build_refl_nc(mesh, f, p, k));
  const Eigen::MatrixXd G = broken_gram(mesh, span, 1.0, 0.0);
  const Eigen::VectorXd b = broken_inner(mesh, span, out.lift, 1.0, 0.0);
  const double qq = broken_gram(mesh, {out.lift}, 1.0, 0.0)(0, 0);
  const Eigen::VectorXd D = G.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd Gn = D.asDiagonal() * G * D.asDiagonal();
  const Eigen::VectorXd bn = D.asDiagonal() * b;
  const Eigen::VectorXd y = Gn.completeOrthogonalDecomposition().solve(bn);
  out.projection_residual = std::sqrt(std::max(0.0, 1.0 - bn.dot(y) / qq));
  return out;
}

}  // namespace cr3d
