#pragma once

// Broken Galerkin discretisation of -div(A grad u) = f with homogeneous
// Dirichlet data in the weakly continuous space.

#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cr3d/fe_space.hpp"

namespace cr3d {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

struct PoissonProblem {
  const SimplicialMesh3D* mesh = nullptr;
  int degree = 1;
  /// Piecewise constant diffusion tensor per tet; empty means identity.
  std::vector<Eigen::Matrix3d> diffusion;
  ScalarField source;
  ScalarField exact;       // optional
  VectorField exact_grad;  // optional
};

struct AssembledSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;
};

struct SolveOptions {
  double tol = 1e-10;
  int dense_threshold = 2000;
  int quad_exactness = -1;  // -1: 2p + 2
};

AssembledSystem assemble(const PoissonProblem& prob, const DofSystem& sys, const SolveOptions& opt = {});

struct Solution {
  Eigen::VectorXd coeffs;
  NodalFunction u;  // broken Lagrange representation over all tets
  int iterations = 0;
  double residual = 0.0;
};

/// Throws SolverError when the iteration does not reach opt.tol.
Solution solve(const PoissonProblem& prob, const DofSystem& sys, const SolveOptions& opt = {});

/// Broken H1 seminorm and L2 norm of the error; exactness -1 means 2p + 4.
double broken_h1_error(const SimplicialMesh3D& mesh, const NodalFunction& u, const VectorField& grad,
                       int exactness = -1);
double l2_error(const SimplicialMesh3D& mesh, const NodalFunction& u, const ScalarField& exact,
                int exactness = -1);

/// u = sin(pi x) sin(pi y) sin(pi z) on the unit cube.
PoissonProblem sine_problem(const SimplicialMesh3D& mesh, int p);
/// u = 64 x(1-x) y(1-y) z(1-z) on the unit cube.
PoissonProblem bubble_problem(const SimplicialMesh3D& mesh, int p);

struct ConvergenceRow {
  int level;
  double h;
  int dofs;
  double h1_error;
  double l2_error;
  std::optional<double> h1_rate;
  std::optional<double> l2_rate;
};

/// Solves the sine problem on cube meshes with n = 2^l, l = 1..levels.
std::vector<ConvergenceRow> convergence_study(int p, int levels, const SolveOptions& opt = {});

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace cr3d
