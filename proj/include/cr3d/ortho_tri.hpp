#pragma once

// Proriol orthogonal polynomials b_{n,k} on the unit triangle, their edge
// traces, and the inverse map from an edge trace back to a coefficient vector.

#include <Eigen/Dense>
#include <vector>

#include "cr3d/quadrature.hpp"

namespace cr3d {

/// Point of the closed unit triangle {x1, x2 >= 0, x1 + x2 <= 1}.
struct RefTrianglePoint {
  double x1 = 0.0;
  double x2 = 0.0;
  RefTrianglePoint() = default;
  RefTrianglePoint(double a, double b);  // throws DomainError outside (tol 1e-14)
  static RefTrianglePoint unchecked(double a, double b);
};

/// Coefficients in the degree-n Proriol basis: f = sum_k coeffs[k] b_{n,k}.
struct OrthoCoeffs {
  int degree = 0;
  Eigen::VectorXd coeffs;
  OrthoCoeffs() = default;
  OrthoCoeffs(int n, Eigen::VectorXd c);
  static OrthoCoeffs unit(int n, int k);
};

/// Monomial coefficients c[i] of x^i on [0, 1].
struct Poly1D {
  std::vector<double> c;
  double operator()(double x) const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

enum class TriEdge { I, II, III };

double proriol_eval(int n, int k, const RefTrianglePoint& pt);

/// All b_{n,0..n} at pt.
Eigen::VectorXd proriol_eval_all(int n, const RefTrianglePoint& pt);

double ortho_eval(const OrthoCoeffs& f, const RefTrianglePoint& pt);

/// Trace of b_{n,k} on an edge, parametrised over [0, 1]:
/// I: (x, 0), II: (0, x), III: (1 - x, x).
Poly1D edge_trace(int n, int k, TriEdge edge);

/// Trace of f on an edge, same parametrisation.
Poly1D ortho_edge_trace(const OrthoCoeffs& f, TriEdge edge);

/// Unique f of degree n whose trace on `edge` equals v; v must have degree <= n.
OrthoCoeffs extend_from_edge(const Poly1D& v, TriEdge edge, int n);

/// max over a + b <= n - 1 of |int b_{n,k} x1^a x2^b|. Rule exactness must be >= 2n.
double ortho_check(int n, int k, const QuadratureRule& quad);

/// Squared L2 norm of b_{n,k} on the unit triangle.
double proriol_norm_sq(int n, int k);

}  // namespace cr3d
