#include "cr3d/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "cr3d/errors.hpp"

namespace cr3d {

void gauss_jacobi(int npts, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  if (npts < 1) throw ParameterError("gauss_jacobi: need at least one point");
  // Golub-Welsch on the symmetric Jacobi matrix
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(npts, npts);
  const double ab = alpha + beta;
  for (int n = 0; n < npts; ++n) {
    const double s = 2.0 * n + ab;
    J(n, n) = (n == 0) ? (beta - alpha) / (ab + 2.0)
                       : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (n + 1 < npts) {
      const int m = n + 1;
      const double t = 2.0 * m + ab;
      double b2 = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
      J(n, m) = J(m, n) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);
  nodes.resize(npts);
  weights.resize(npts);
  for (int i = 0; i < npts; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    weights[i] = mu0 * v * v;
  }
}

namespace {

QuadratureRule build_rule(int dim, int exactness) {
  const int n = exactness / 2 + 1;
  QuadratureRule q;
  q.dim = dim;
  q.exactness = exactness;
  std::vector<double> xu, wu, xv, wv, xw, ww;
  gauss_jacobi(n, 0.0, 0.0, xu, wu);
  gauss_jacobi(n, 1.0, 0.0, xv, wv);
  if (dim == 2) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double x2 = 0.5 * (1.0 + xv[j]);
        const double x1 = 0.5 * (1.0 + xu[i]) * 0.5 * (1.0 - xv[j]);
        q.points.emplace_back(x1, x2, 0.0);
        q.weights.push_back(wu[i] * wv[j] / 8.0);
      }
  } else {
    gauss_jacobi(n, 2.0, 0.0, xw, ww);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double x3 = 0.5 * (1.0 + xw[k]);
          const double x2 = 0.5 * (1.0 + xv[j]) * 0.5 * (1.0 - xw[k]);
          const double x1 = 0.5 * (1.0 + xu[i]) * 0.5 * (1.0 - xv[j]) * 0.5 * (1.0 - xw[k]);
          q.points.emplace_back(x1, x2, x3);
          q.weights.push_back(wu[i] * wv[j] * ww[k] / 64.0);
        }
  }
  for (double w : q.weights)
    if (!(w > 0.0)) throw InternalError("simplex_quadrature: non-positive weight");
  return q;
}

}  // namespace

const QuadratureRule& simplex_quadrature(int dim, int exactness) {
  if (dim != 2 && dim != 3) throw ParameterError("simplex_quadrature: dim must be 2 or 3");
  if (exactness < 0 || exactness > kMaxQuadratureExactness)
    throw ParameterError("simplex_quadrature: exactness outside [0, 40]");
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{dim, exactness}];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_rule(dim, exactness));
  return *slot;
}

}  // namespace cr3d
