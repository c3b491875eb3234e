#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cr3d/errors.hpp"
#include "cr3d/ortho_tri.hpp"
#include "cr3d/polykernels.hpp"
#include "cr3d/quadrature.hpp"

using namespace cr3d;

namespace {

// Direct product formula, valid away from x1 + x2 = 0.
double proriol_direct(int n, int k, double x1, double x2) {
  const double s = x1 + x2;
  return std::pow(s, k) * jacobi_eval({n - k, 0.0, 2.0 * k + 1}, 2 * s - 1) * legendre_eval(k, (x1 - x2) / s);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<RefTrianglePoint> random_points(int count, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RefTrianglePoint> pts;
  while (static_cast<int>(pts.size()) < count) {
    const double a = u(gen), b = u(gen);
    if (a + b <= 1.0) pts.emplace_back(a, b);
  }
  return pts;
}

}  // namespace

TEST(Proriol, VertexValues) {
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= n; ++k) {
      const double origin = k == 0 ? (n % 2 ? -1.0 : 1.0) * (n + 1) : 0.0;
      EXPECT_NEAR(proriol_eval(n, k, {0.0, 0.0}), origin, 1e-12);
      EXPECT_NEAR(proriol_eval(n, k, {1.0, 0.0}), 1.0, 1e-12);
      EXPECT_NEAR(proriol_eval(n, k, {0.0, 1.0}), k % 2 ? -1.0 : 1.0, 1e-12);
    }
  EXPECT_DOUBLE_EQ(proriol_eval(2, 0, {0.0, 0.0}), 3.0);
}

TEST(Proriol, MatchesDirectFormulaInside) {
  for (const auto& pt : random_points(200, 1))
    for (int n = 0; n <= 10; ++n)
      for (int k = 0; k <= n; ++k)
        EXPECT_NEAR(proriol_eval(n, k, pt), proriol_direct(n, k, pt.x1, pt.x2), 1e-11);
}

TEST(Proriol, EvalAllMatchesSingle) {
  const RefTrianglePoint pt(0.2, 0.35);
  const Eigen::VectorXd all = proriol_eval_all(7, pt);
  for (int k = 0; k <= 7; ++k) EXPECT_NEAR(all(k), proriol_eval(7, k, pt), 1e-14);
}

TEST(Proriol, SwapSymmetry) {
  for (const auto& pt : random_points(1000, 2))
    for (int n = 0; n <= 10; ++n)
      for (int k = 0; k <= n; ++k) {
        const double sw = proriol_eval(n, k, {pt.x2, pt.x1});
        EXPECT_NEAR(proriol_eval(n, k, pt), (k % 2 ? -1.0 : 1.0) * sw, 1e-12);
      }
}

TEST(Proriol, RejectsBadInput) {
  EXPECT_THROW(proriol_eval(2, 3, {0.1, 0.1}), ParameterError);
  EXPECT_THROW(RefTrianglePoint(0.6, 0.6), DomainError);
  EXPECT_THROW(RefTrianglePoint(-1e-10, 0.5), DomainError);
  EXPECT_NO_THROW(RefTrianglePoint(0.5, 0.5 + 5e-15));
}

// Monomial storage on [0, 1]: evaluation error is bounded by a few ulps of sum |c_i|.
double monomial_tol(const Poly1D& p) {
  double l1 = 0.0;
  for (double c : p.c) l1 += std::abs(c);
  return 32 * std::numeric_limits<double>::epsilon() * l1;
}

TEST(EdgeTrace, MatchesPointEvaluation) {
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= n; ++k) {
      const Poly1D t1 = edge_trace(n, k, TriEdge::I), t2 = edge_trace(n, k, TriEdge::II),
                   t3 = edge_trace(n, k, TriEdge::III);
      const double tol = std::max({monomial_tol(t1), monomial_tol(t2), monomial_tol(t3), 1e-10});
      for (int s = 0; s <= 10; ++s) {
        const double x = s / 10.0;
        EXPECT_NEAR(t1(x), proriol_eval(n, k, RefTrianglePoint::unchecked(x, 0)), tol) << n << ' ' << k << ' ' << x;
        EXPECT_NEAR(t2(x), proriol_eval(n, k, RefTrianglePoint::unchecked(0, x)), tol) << n << ' ' << k << ' ' << x;
        EXPECT_NEAR(t3(x), proriol_eval(n, k, RefTrianglePoint::unchecked(1 - x, x)), tol) << n << ' ' << k << ' ' << x;
      }
    }
}

TEST(EdgeTrace, Examples) {
  for (int n = 0; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) EXPECT_NEAR(edge_trace(n, k, TriEdge::III)(0.0), 1.0, 1e-14);
  const Poly1D t = edge_trace(1, 0, TriEdge::I);
  ASSERT_GE(t.c.size(), 2u);
  EXPECT_NEAR(t.c[0], -2.0, 1e-15);
  EXPECT_NEAR(t.c[1], 3.0, 1e-15);
  for (int n = 0; n <= 10; ++n)
    for (int k = 0; k <= n; ++k) {
      const Poly1D a = edge_trace(n, k, TriEdge::I), b = edge_trace(n, k, TriEdge::II);
      ASSERT_EQ(a.c.size(), b.c.size());
      for (size_t i = 0; i < a.c.size(); ++i) EXPECT_NEAR(b.c[i], (k % 2 ? -1.0 : 1.0) * a.c[i], 1e-12);
    }
}

TEST(EdgeTrace, TracesFormBasis) {
  for (TriEdge e : {TriEdge::I, TriEdge::II, TriEdge::III})
    for (int n = 0; n <= 12; ++n) {
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n + 1, n + 1);
      for (int k = 0; k <= n; ++k) {
        const Poly1D t = edge_trace(n, k, e);
        for (int i = 0; i <= t.degree(); ++i) C(i, k) = t.c[i];
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
      const double cond = svd.singularValues()(0) / svd.singularValues()(n);
      EXPECT_TRUE(std::isfinite(cond));
      EXPECT_GT(svd.singularValues()(n), 0.0);
    }
}

TEST(ExtendFromEdge, RoundTrip) {
  for (TriEdge e : {TriEdge::I, TriEdge::II, TriEdge::III})
    for (int n = 0; n <= 8; ++n)
      for (int k = 0; k <= n; ++k) {
        const OrthoCoeffs u = extend_from_edge(edge_trace(n, k, e), e, n);
        EXPECT_LE((u.coeffs - OrthoCoeffs::unit(n, k).coeffs).cwiseAbs().maxCoeff(), 1e-10);
      }
}

TEST(ExtendFromEdge, ZeroAndLinear) {
  const OrthoCoeffs z = extend_from_edge(Poly1D{{0.0}}, TriEdge::II, 4);
  EXPECT_EQ(z.degree, 4);
  EXPECT_LE(z.coeffs.cwiseAbs().maxCoeff(), 1e-14);
  const OrthoCoeffs u = extend_from_edge(Poly1D{{-2.0, 3.0}}, TriEdge::I, 1);
  EXPECT_NEAR(u.coeffs(0), 1.0, 1e-13);
  EXPECT_NEAR(u.coeffs(1), 0.0, 1e-13);
  EXPECT_THROW(extend_from_edge(Poly1D{{0, 0, 1}}, TriEdge::I, 1), ParameterError);
}

TEST(ExtendFromEdge, GeneralCombination) {
  const OrthoCoeffs f(5, (Eigen::VectorXd(6) << 0.3, -1.0, 2.0, 0.5, 0.0, 1.5).finished());
  for (TriEdge e : {TriEdge::I, TriEdge::II, TriEdge::III}) {
    const OrthoCoeffs g = extend_from_edge(ortho_edge_trace(f, e), e, 5);
    EXPECT_LE((g.coeffs - f.coeffs).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Orthogonality, MomentsVanish) {
  EXPECT_EQ(ortho_check(0, 0, simplex_quadrature(2, 2)), 0.0);
  for (int n = 1; n <= 10; ++n)
    for (int k = 0; k <= n; ++k) EXPECT_LE(ortho_check(n, k, simplex_quadrature(2, 2 * n + 2)), 1e-12);
  EXPECT_LE(ortho_check(2, 1, simplex_quadrature(2, 4)), 1e-13);
  EXPECT_THROW(ortho_check(3, 0, simplex_quadrature(2, 5)), ParameterError);
}

TEST(Orthogonality, MutualAndNorms) {
  for (int n = 0; n <= 8; ++n) {
    const auto& q = simplex_quadrature(2, 2 * n);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (size_t i = 0; i < q.points.size(); ++i) {
      const Eigen::VectorXd b = proriol_eval_all(n, RefTrianglePoint::unchecked(q.points[i](0), q.points[i](1)));
      G += q.weights[i] * b * b.transpose();
    }
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= n; ++l)
        EXPECT_NEAR(G(k, l), k == l ? proriol_norm_sq(n, k) : 0.0, 1e-13) << n << ' ' << k << ' ' << l;
  }
}

TEST(Quadrature, DirichletIntegrals) {
  for (int ex : {0, 3, 10, 25, 40}) {
    const auto& q = simplex_quadrature(2, ex);
    double sum = 0.0;
    for (double w : q.weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 0.5, 1e-14);
    for (int a = 0; a <= ex; ++a)
      for (int b = 0; a + b <= ex; ++b) {
        double s = 0.0;
        for (size_t i = 0; i < q.points.size(); ++i)
          s += q.weights[i] * std::pow(q.points[i](0), a) * std::pow(q.points[i](1), b);
        const double ref = factorial(a) * factorial(b) / factorial(a + b + 2);
        EXPECT_NEAR(s, ref, 1e-13);
      }
  }
}

TEST(Quadrature, TetIntegrals) {
  for (int ex : {0, 4, 12}) {
    const auto& q = simplex_quadrature(3, ex);
    double sum = 0.0;
    for (double w : q.weights) sum += w;
    EXPECT_NEAR(sum, 1.0 / 6.0, 1e-14);
    for (int a = 0; a <= ex; ++a)
      for (int b = 0; a + b <= ex; ++b)
        for (int c = 0; a + b + c <= ex; ++c) {
          double s = 0.0;
          for (size_t i = 0; i < q.points.size(); ++i)
            s += q.weights[i] * std::pow(q.points[i](0), a) * std::pow(q.points[i](1), b) *
                 std::pow(q.points[i](2), c);
          EXPECT_NEAR(s, factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3), 1e-13);
        }
  }
}

TEST(Quadrature, RejectsExcessiveExactness) {
  EXPECT_THROW(simplex_quadrature(2, 41), ParameterError);
  EXPECT_THROW(simplex_quadrature(4, 2), ParameterError);
}
