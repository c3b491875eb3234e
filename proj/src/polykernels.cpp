#include "cr3d/polykernels.hpp"

#include <map>
#include <mutex>
#include <string>

#include "cr3d/errors.hpp"

namespace cr3d {

void check_degree(int n, const char* who) {
  if (n < 0 || n > kMaxDegree)
    throw ParameterError(std::string(who) + ": degree " + std::to_string(n) +
                         " outside [0, " + std::to_string(kMaxDegree) + "]");
}

double shifted_factorial(double a, int n) {
  if (n < 0) throw ParameterError("shifted_factorial: negative n");
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= a + i;
  return r;
}

Rational shifted_factorial(const Rational& a, int n) {
  if (n < 0) throw ParameterError("shifted_factorial: negative n");
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= a + i;
  return r;
}

double jacobi_eval(const JacobiParams& jp, double x) {
  check_degree(jp.n, "jacobi_eval");
  const double a = jp.alpha, b = jp.beta;
  if (!(a > -1.0) || !(b > -1.0)) throw ParameterError("jacobi_eval: alpha and beta must exceed -1");
  if (jp.n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
  for (int k = 1; k < jp.n; ++k) {
    // standard recurrence for P_{k+1} in terms of P_k, P_{k-1}
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1) * s;
    const double c2 = (s + 1) * (a * a - b * b);
    const double c3 = s * (s + 1) * (s + 2);
    const double c4 = 2.0 * (k + a) * (k + b) * (s + 2);
    const double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_eval(int k, double x) {
  check_degree(k, "legendre_eval");
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int j = 1; j < k; ++j) {
    const double p2 = ((2.0 * j + 1) * x * p1 - j * p0) / (j + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

Rational m_coeff_exact(int p, int i, int j) {
  check_degree(p, "m_coeff");
  if (i < 0 || i > p || j < 0 || j > p) throw ParameterError("m_coeff: index outside [0, p]");
  // 4F3(-i, i+1, -j, j+1; -p, p+2, 1; 1), terminating at min(i, j) <= p
  Rational sum = 0, term = 1;
  const int smax = std::min(i, j);
  for (int s = 0; s <= smax; ++s) {
    sum += term;
    if (s == smax) break;
    Rational num = Rational(s - i) * (i + 1 + s) * (s - j) * (j + 1 + s);
    Rational den = Rational(s - p) * (p + 2 + s) * (1 + s) * (1 + s);
    term *= num / den;
  }
  Rational r = sum * (2 * i + 1) / (p + 1);
  return (p % 2 == 0) ? r : Rational(-r);
}

double m_coeff(int p, int i, int j) { return static_cast<double>(m_coeff_exact(p, i, j)); }

Eigen::MatrixXd m_matrix(int p) {
  check_degree(p, "m_matrix");
  static std::mutex mtx;
  static std::map<int, Eigen::MatrixXd> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd m(p + 1, p + 1);
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) m(i, j) = m_coeff(p, i, j);
  cache.emplace(p, m);
  return m;
}

Eigen::MatrixXd r_matrix(int p) {
  check_degree(p, "r_matrix");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(p + 1, p + 1);
  for (int i = 0; i <= p; ++i) r(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
  return r;
}

}  // namespace cr3d
