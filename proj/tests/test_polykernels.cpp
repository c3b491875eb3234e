#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cr3d/errors.hpp"
#include "cr3d/polykernels.hpp"
#include "cr3d/quadrature.hpp"

using namespace cr3d;

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Terminating 2F1 form in exact arithmetic:
// P_n = (a+1)_n/n! sum_i (-n)_i (n+a+b+1)_i / ((a+1)_i i!) ((1-x)/2)^i.
Rational jacobi_series(int n, const Rational& a, const Rational& b, const Rational& x) {
  Rational s = 0, fact = 1, pw = 1;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) {
      fact *= i;
      pw *= (1 - x) / 2;
    }
    s += shifted_factorial(Rational(-n), i) * shifted_factorial(n + a + b + 1, i) /
         (shifted_factorial(a + 1, i) * fact) * pw;
  }
  Rational nf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  return shifted_factorial(a + 1, n) / nf * s;
}

}  // namespace

TEST(ShiftedFactorial, EmptyProductIsOne) { EXPECT_EQ(shifted_factorial(1.0, 0), 1.0); }

TEST(ShiftedFactorial, SmallProducts) {
  EXPECT_EQ(shifted_factorial(2.0, 3), 24.0);
  EXPECT_EQ(shifted_factorial(-2.0, 3), 0.0);
  EXPECT_EQ(shifted_factorial(Rational(-1, 2), 2), Rational(-1, 4));
}

TEST(Jacobi, RecurrenceMatchesHypergeometricSeries) {
  const Rational params[] = {0, 1, 3, 5, Rational(1, 2)};
  for (int n = 0; n <= kMaxDegree; ++n)
    for (const Rational& ra : params)
      for (const Rational& rb : params)
        for (int s = 0; s <= 40; s += 3) {
          const Rational rx = Rational(s, 20) - 1;
          const double a = static_cast<double>(ra), b = static_cast<double>(rb), x = static_cast<double>(rx);
          const double ref = static_cast<double>(jacobi_series(n, ra, rb, rx));
          EXPECT_NEAR(jacobi_eval({n, a, b}, x), ref, 1e-12 * std::max(1.0, std::abs(ref)))
              << n << ' ' << a << ' ' << b << ' ' << x;
        }
}

TEST(Jacobi, EndpointValues) {
  for (int n = 0; n <= kMaxDegree; ++n)
    for (double a : {0.0, 1.0, 3.0})
      for (double b : {0.0, 1.0, 7.0}) {
        const double at1 = shifted_factorial(a + 1, n) / factorial(n);
        const double atm1 = (n % 2 ? -1.0 : 1.0) * shifted_factorial(b + 1, n) / factorial(n);
        EXPECT_NEAR(jacobi_eval({n, a, b}, 1.0), at1, 1e-13 * std::max(1.0, at1));
        EXPECT_NEAR(jacobi_eval({n, a, b}, -1.0), atm1, 1e-13 * std::max(1.0, std::abs(atm1)));
      }
}

TEST(Jacobi, HandExpandedDegreeOne) {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) EXPECT_NEAR(jacobi_eval({1, 0.0, 1.0}, x), (3 * x - 1) / 2, 1e-15);
}

TEST(Jacobi, RejectsInvalidParameters) {
  EXPECT_THROW(jacobi_eval({2, -1.0, 0.0}, 0.1), ParameterError);
  EXPECT_THROW(jacobi_eval({2, 0.0, -1.5}, 0.1), ParameterError);
  EXPECT_THROW(jacobi_eval({-1, 0.0, 0.0}, 0.1), ParameterError);
}

double weighted_inner(int n, int m, double a, double b) {
  std::vector<double> x, w;
  gauss_jacobi(40, 0.0, 0.0, x, w);  // Gauss-Legendre, exact to degree 79
  double s = 0.0;
  for (size_t q = 0; q < x.size(); ++q)
    s += w[q] * std::pow(1 - x[q], a) * std::pow(1 + x[q], b) * jacobi_eval({n, a, b}, x[q]) *
         jacobi_eval({m, a, b}, x[q]);
  return s;
}

TEST(Jacobi, WeightedOrthogonality) {
  for (double a : {0.0, 1.0, 3.0})
    for (double b : {0.0, 1.0, 3.0})
      for (int n = 1; n <= kMaxDegree; ++n)
        for (int m = 0; m < n; ++m) EXPECT_LE(std::abs(weighted_inner(n, m, a, b)), 1e-12) << n << ' ' << m << ' ' << a << ' ' << b;
}

TEST(Jacobi, OrthogonalityOfTriangleFactors) {
  // P_{n-k}^{(0, 2k+1)} with n <= 20; the weight reaches 2^(2k+2), so moments are
  // measured relative to the norms.
  for (int k = 0; k <= 10; ++k) {
    const double b = 2.0 * k + 1;
    for (int n = 1; n <= kMaxDegree - k; ++n)
      for (int m = 0; m < n; ++m) {
        const double rel = std::abs(weighted_inner(n, m, 0.0, b)) /
                           std::sqrt(weighted_inner(n, n, 0.0, b) * weighted_inner(m, m, 0.0, b));
        EXPECT_LE(rel, 1e-12) << n << ' ' << m << ' ' << b;
      }
  }
}

TEST(Legendre, LowDegrees) {
  for (double x : {-1.0, -0.25, 0.5, 1.0}) {
    EXPECT_EQ(legendre_eval(0, x), 1.0);
    EXPECT_DOUBLE_EQ(legendre_eval(1, x), x);
    EXPECT_NEAR(legendre_eval(2, x), (3 * x * x - 1) / 2, 1e-15);
  }
  EXPECT_EQ(legendre_eval(1, 0.5), 0.5);
}

TEST(Legendre, AgreesWithJacobiZeroZero) {
  for (int k = 0; k <= kMaxDegree; ++k)
    for (double x : {-0.9, -0.1, 0.3, 0.95}) EXPECT_NEAR(legendre_eval(k, x), jacobi_eval({k, 0, 0}, x), 1e-13);
}

TEST(FlipMatrix, HandDerivedDegreeOne) {
  // b_{1,0} = 3(x1+x2) - 2, b_{1,1} = x1 - x2. Under x1 -> 1-x1-x2:
  // 3(1-x1) - 2 = 1 - 3 x1 = c0 (3x1 + 3x2 - 2) + c1 (x1 - x2) gives c0 = -1/2, c1 = -3/2.
  EXPECT_EQ(m_coeff_exact(1, 0, 0), Rational(-1, 2));
  EXPECT_EQ(m_coeff_exact(1, 1, 0), Rational(-3, 2));
  EXPECT_DOUBLE_EQ(m_coeff(1, 0, 0), -0.5);
  EXPECT_DOUBLE_EQ(m_coeff(1, 1, 0), -1.5);
}

TEST(FlipMatrix, DegreeZeroIsIdentity) {
  EXPECT_EQ(m_matrix(0).rows(), 1);
  EXPECT_DOUBLE_EQ(m_matrix(0)(0, 0), 1.0);
}

TEST(FlipMatrix, ExactInvolution) {
  for (int p = 0; p <= 8; ++p)
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) {
        Rational s = 0;
        for (int l = 0; l <= p; ++l) s += m_coeff_exact(p, i, l) * m_coeff_exact(p, l, j);
        EXPECT_EQ(s, Rational(i == j ? 1 : 0)) << p << ' ' << i << ' ' << j;
      }
}

TEST(FlipMatrix, NumericGroupRelations) {
  for (int p = 0; p <= 12; ++p) {
    const Eigen::MatrixXd M = m_matrix(p), R = r_matrix(p);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p + 1, p + 1);
    EXPECT_LE((M * M - I).cwiseAbs().maxCoeff(), 1e-10) << p;
    const Eigen::MatrixXd MR = M * R;
    EXPECT_LE((MR * MR * MR - I).cwiseAbs().maxCoeff(), 1e-10) << p;
    EXPECT_LE((R * R - I).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(FlipMatrix, RejectsBadIndices) {
  EXPECT_THROW(m_coeff(3, 4, 0), ParameterError);
  EXPECT_THROW(m_coeff(3, 0, -1), ParameterError);
  EXPECT_THROW(m_matrix(kMaxDegree + 1), ParameterError);
}
