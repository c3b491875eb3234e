#include "cr3d/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cr3d/errors.hpp"
#include "cr3d/quadrature.hpp"

namespace cr3d {

namespace {

Eigen::Matrix3d diffusion_of(const PoissonProblem& prob, int t) {
  return prob.diffusion.empty() ? Eigen::Matrix3d::Identity() : prob.diffusion[t];
}

Eigen::MatrixXd coupling(const DofSystem& sys, int t, int nloc) {
  const auto& td = sys.tet_dofs[t];
  Eigen::MatrixXd C(nloc, static_cast<Eigen::Index>(td.size()));
  for (size_t j = 0; j < td.size(); ++j) C.col(static_cast<Eigen::Index>(j)) = sys.basis[td[j].first].pieces[td[j].second].coeffs;
  return C;
}

}  // namespace

AssembledSystem assemble(const PoissonProblem& prob, const DofSystem& sys, const SolveOptions& opt) {
  const auto& mesh = *sys.mesh;
  if (prob.mesh != sys.mesh) throw ParameterError("assemble: problem and dof system use different meshes");
  if (prob.degree != sys.degree) throw ParameterError("assemble: degree mismatch");
  if (!prob.diffusion.empty() && static_cast<int>(prob.diffusion.size()) != mesh.num_tets())
    throw ParameterError("assemble: diffusion must have one tensor per tet");
  const int p = sys.degree;
  const auto& lb = lagrange_basis(p);
  const int ex = opt.quad_exactness >= 0 ? opt.quad_exactness : 2 * p + 2;
  // stiffness integrands have degree 2p - 2
  if (ex < 2 * p - 2) throw ParameterError("assemble: quadrature exactness below 2p - 2");
  const auto& quad = simplex_quadrature(3, ex);
  std::vector<Eigen::Triplet<double>> trip;
  AssembledSystem out;
  out.load = Eigen::VectorXd::Zero(sys.size());
  std::vector<Eigen::VectorXd> phi;
  std::vector<Eigen::MatrixXd> dphi;
  for (const auto& x : quad.points) {
    const Eigen::Vector4d lam = bary_from_ref(x);
    phi.push_back(lb.values(lam));
    dphi.push_back(lb.bary_gradients(lam));
  }
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& td = sys.tet_dofs[t];
    if (td.empty()) continue;
    const auto map = mesh.tet_map(t);
    const double J = std::abs(map.A.determinant());
    const Eigen::Matrix<double, 4, 3> G = bary_grads(mesh, t);
    const Eigen::Matrix3d A = diffusion_of(prob, t);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(lb.size(), lb.size());
    Eigen::VectorXd F = Eigen::VectorXd::Zero(lb.size());
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const double w = quad.weights[q] * J;
      const Eigen::MatrixXd g = dphi[q] * G;
      S.noalias() += w * g * A * g.transpose();
      F += (w * prob.source(map(quad.points[q]))) * phi[q];
    }
    const Eigen::MatrixXd C = coupling(sys, t, lb.size());
    const Eigen::MatrixXd K = C.transpose() * S * C;
    const Eigen::VectorXd b = C.transpose() * F;
    for (size_t i = 0; i < td.size(); ++i) {
      out.load(td[i].first) += b(static_cast<Eigen::Index>(i));
      for (size_t j = 0; j < td.size(); ++j)
        trip.emplace_back(td[i].first, td[j].first, K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  out.stiffness.resize(sys.size(), sys.size());
  out.stiffness.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Solution solve(const PoissonProblem& prob, const DofSystem& sys, const SolveOptions& opt) {
  const AssembledSystem as = assemble(prob, sys, opt);
  Solution sol;
  const int n = sys.size();
  if (n == 0) {
    sol.coeffs = Eigen::VectorXd::Zero(0);
  } else if (n < opt.dense_threshold) {
    const Eigen::MatrixXd K(as.stiffness);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw SolverError("dense factorisation failed: stiffness not positive definite");
    sol.coeffs = ldlt.solve(as.load);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(opt.tol);
    cg.setMaxIterations(10 * n);
    cg.compute(as.stiffness);
    sol.coeffs = cg.solve(as.load);
    sol.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw SolverError("CG did not converge: relative residual " + std::to_string(cg.error()));
  }
  const double bn = as.load.norm();
  sol.residual = (n == 0 || bn == 0.0) ? 0.0 : (as.stiffness * sol.coeffs - as.load).norm() / bn;
  if (sol.residual > std::max(opt.tol, 1e-8) * 10)
    throw SolverError("linear solve residual " + std::to_string(sol.residual) + " above tolerance");

  const auto& mesh = *sys.mesh;
  const int nloc = lagrange_basis(sys.degree).size();
  sol.u.degree = sys.degree;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nloc);
    for (auto [d, i] : sys.tet_dofs[t]) c += sol.coeffs(d) * sys.basis[d].pieces[i].coeffs;
    sol.u.pieces.push_back({t, c});
  }
  return sol;
}

double broken_h1_error(const SimplicialMesh3D& mesh, const NodalFunction& u, const VectorField& grad,
                       int exactness) {
  const int p = u.degree;
  const auto& lb = lagrange_basis(p);
  const auto& quad = simplex_quadrature(3, exactness >= 0 ? exactness : 2 * p + 4);
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto map = mesh.tet_map(t);
    const double J = std::abs(map.A.determinant());
    const Eigen::Matrix<double, 4, 3> G = bary_grads(mesh, t);
    const auto* c = u.on(t);
    for (size_t q = 0; q < quad.points.size(); ++q) {
      Vec3 gh = Vec3::Zero();
      if (c) gh = G.transpose() * (lb.bary_gradients(bary_from_ref(quad.points[q])).transpose() * *c);
      s += quad.weights[q] * J * (gh - grad(map(quad.points[q]))).squaredNorm();
    }
  }
  return std::sqrt(s);
}

double l2_error(const SimplicialMesh3D& mesh, const NodalFunction& u, const ScalarField& exact,
                int exactness) {
  const int p = u.degree;
  const auto& lb = lagrange_basis(p);
  const auto& quad = simplex_quadrature(3, exactness >= 0 ? exactness : 2 * p + 4);
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto map = mesh.tet_map(t);
    const double J = std::abs(map.A.determinant());
    const auto* c = u.on(t);
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const double uh = c ? lb.values(bary_from_ref(quad.points[q])).dot(*c) : 0.0;
      const double d = uh - exact(map(quad.points[q]));
      s += quad.weights[q] * J * d * d;
    }
  }
  return std::sqrt(s);
}

PoissonProblem sine_problem(const SimplicialMesh3D& mesh, int p) {
  constexpr double pi = std::numbers::pi;
  PoissonProblem pr;
  pr.mesh = &mesh;
  pr.degree = p;
  pr.exact = [](const Vec3& x) { return std::sin(pi * x(0)) * std::sin(pi * x(1)) * std::sin(pi * x(2)); };
  pr.source = [](const Vec3& x) {
    return 3.0 * pi * pi * std::sin(pi * x(0)) * std::sin(pi * x(1)) * std::sin(pi * x(2));
  };
  pr.exact_grad = [](const Vec3& x) {
    const double sx = std::sin(pi * x(0)), sy = std::sin(pi * x(1)), sz = std::sin(pi * x(2));
    return Vec3(pi * std::cos(pi * x(0)) * sy * sz, pi * sx * std::cos(pi * x(1)) * sz,
                pi * sx * sy * std::cos(pi * x(2)));
  };
  return pr;
}

PoissonProblem bubble_problem(const SimplicialMesh3D& mesh, int p) {
  PoissonProblem pr;
  pr.mesh = &mesh;
  pr.degree = p;
  auto b = [](double s) { return s * (1.0 - s); };
  auto db = [](double s) { return 1.0 - 2.0 * s; };
  pr.exact = [b](const Vec3& x) { return 64.0 * b(x(0)) * b(x(1)) * b(x(2)); };
  pr.exact_grad = [b, db](const Vec3& x) {
    return Vec3(64.0 * db(x(0)) * b(x(1)) * b(x(2)), 64.0 * b(x(0)) * db(x(1)) * b(x(2)),
                64.0 * b(x(0)) * b(x(1)) * db(x(2)));
  };
  // -Laplace with b'' = -2
  pr.source = [b](const Vec3& x) {
    return 128.0 * (b(x(1)) * b(x(2)) + b(x(0)) * b(x(2)) + b(x(0)) * b(x(1)));
  };
  return pr;
}

std::vector<ConvergenceRow> convergence_study(int p, int levels, const SolveOptions& opt) {
  if (levels < 2) throw ParameterError("convergence_study: levels must be >= 2");
  std::vector<ConvergenceRow> rows;
  for (int l = 1; l <= levels; ++l) {
    const SimplicialMesh3D mesh = generate_cube_mesh(1 << l);
    const DofSystem sys = assemble_dof_system(mesh, p);
    const PoissonProblem pr = sine_problem(mesh, p);
    const Solution sol = solve(pr, sys, opt);
    ConvergenceRow r{l, mesh.max_diameter(), sys.size(), broken_h1_error(mesh, sol.u, pr.exact_grad),
                     l2_error(mesh, sol.u, pr.exact), std::nullopt, std::nullopt};
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double lh = std::log(prev.h / r.h);
      r.h1_rate = std::log(prev.h1_error / r.h1_error) / lh;
      r.l2_rate = std::log(prev.l2_error / r.l2_error) / lh;
    }
    rows.push_back(r);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "level,h,dofs,h1_error,l2_error,h1_rate,l2_rate\n";
  os.precision(10);
  for (const auto& r : rows) {
    os << r.level << ',' << r.h << ',' << r.dofs << ',' << r.h1_error << ',' << r.l2_error << ',';
    if (r.h1_rate) os << *r.h1_rate;
    os << ',';
    if (r.l2_rate) os << *r.l2_rate;
    os << '\n';
  }
  return os.str();
}

}  // namespace cr3d
