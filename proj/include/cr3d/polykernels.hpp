#pragma once

// Scalar special-function kernels: shifted factorials, Jacobi and Legendre
// polynomials, and the exact entries of the triangle-flip matrix M.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace cr3d {

using Rational = boost::multiprecision::cpp_rational;

/// Largest polynomial degree accepted by every kernel in the library.
inline constexpr int kMaxDegree = 20;

/// (a)_n = a (a+1) ... (a+n-1); (a)_0 = 1.
double shifted_factorial(double a, int n);
Rational shifted_factorial(const Rational& a, int n);

struct JacobiParams {
  int n;
  double alpha;
  double beta;
};

/// P_n^{(alpha,beta)}(x) by the three-term recurrence.
/// Requires alpha, beta > -1 and 0 <= n <= kMaxDegree.
double jacobi_eval(const JacobiParams& jp, double x);

/// P_k(x), Legendre normalisation P_k(1) = 1.
double legendre_eval(int k, double x);

/// Entry (i, j) of M for degree p, with M b_{p,k} = sum_j b_{p,j} M_{j,k}.
/// Finite hypergeometric sum evaluated in exact rational arithmetic.
Rational m_coeff_exact(int p, int i, int j);
double m_coeff(int p, int i, int j);

/// Dense (p+1)x(p+1) matrix of m_coeff.
Eigen::MatrixXd m_matrix(int p);

/// diag((-1)^i); the swap (x1,x2) -> (x2,x1) in the Proriol basis.
Eigen::MatrixXd r_matrix(int p);

void check_degree(int n, const char* who);

}  // namespace cr3d
