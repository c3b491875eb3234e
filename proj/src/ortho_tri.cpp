#include "cr3d/ortho_tri.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cr3d/errors.hpp"
#include "cr3d/polykernels.hpp"

namespace cr3d {

namespace {

constexpr double kPointTol = 1e-14;

Rational binom(int n, int k) {
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void poly_axpy(double s, const Poly1D& x, Poly1D& y) {
  if (y.c.size() < x.c.size()) y.c.resize(x.c.size(), 0.0);
  for (size_t i = 0; i < x.c.size(); ++i) y.c[i] += s * x.c[i];
}

RefTrianglePoint edge_point(TriEdge e, double t) {
  switch (e) {
    case TriEdge::I: return RefTrianglePoint::unchecked(t, 0.0);
    case TriEdge::II: return RefTrianglePoint::unchecked(0.0, t);
    case TriEdge::III: return RefTrianglePoint::unchecked(1.0 - t, t);
  }
  return {};
}

}  // namespace

RefTrianglePoint::RefTrianglePoint(double a, double b) : x1(a), x2(b) {
  if (!(a >= -kPointTol && b >= -kPointTol && a + b <= 1.0 + kPointTol))
    throw DomainError("point (" + std::to_string(a) + ", " + std::to_string(b) +
                      ") outside the unit triangle");
}

RefTrianglePoint RefTrianglePoint::unchecked(double a, double b) {
  RefTrianglePoint p;
  p.x1 = a;
  p.x2 = b;
  return p;
}

OrthoCoeffs::OrthoCoeffs(int n, Eigen::VectorXd c) : degree(n), coeffs(std::move(c)) {
  check_degree(n, "OrthoCoeffs");
  if (coeffs.size() != n + 1) throw ParameterError("OrthoCoeffs: need n + 1 coefficients");
}

OrthoCoeffs OrthoCoeffs::unit(int n, int k) {
  check_degree(n, "OrthoCoeffs::unit");
  if (k < 0 || k > n) throw ParameterError("OrthoCoeffs::unit: k outside [0, n]");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(k) = 1.0;
  return OrthoCoeffs(n, c);
}

double Poly1D::operator()(double x) const {
  double r = 0.0;
  for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

Eigen::VectorXd proriol_eval_all(int n, const RefTrianglePoint& pt) {
  check_degree(n, "proriol_eval");
  const double s = pt.x1 + pt.x2, d = pt.x1 - pt.x2;
  Eigen::VectorXd out(n + 1);
  // H_k = s^k P_k(d / s), homogeneous so it stays finite at the origin
  double h0 = 1.0, h1 = d;
  for (int k = 0; k <= n; ++k) {
    double hk;
    if (k == 0) {
      hk = 1.0;
    } else if (k == 1) {
      hk = d;
    } else {
      hk = ((2.0 * k - 1) * d * h1 - (k - 1.0) * s * s * h0) / k;
      h0 = h1;
      h1 = hk;
    }
    out(k) = hk * jacobi_eval({n - k, 0.0, 2.0 * k + 1.0}, 2.0 * s - 1.0);
  }
  return out;
}

double proriol_eval(int n, int k, const RefTrianglePoint& pt) {
  check_degree(n, "proriol_eval");
  if (k < 0 || k > n) throw ParameterError("proriol_eval: k outside [0, n]");
  return proriol_eval_all(n, pt)(k);
}

double ortho_eval(const OrthoCoeffs& f, const RefTrianglePoint& pt) {
  return f.coeffs.dot(proriol_eval_all(f.degree, pt));
}

Poly1D edge_trace(int n, int k, TriEdge edge) {
  check_degree(n, "edge_trace");
  if (k < 0 || k > n) throw ParameterError("edge_trace: k outside [0, n]");
  // exact rational coefficients; only the final rounding is inexact
  std::vector<Rational> c;
  if (edge == TriEdge::III) {
    // P_k(1 - 2x) = sum_j (-1)^j C(k, j) C(k + j, j) x^j
    c.assign(k + 1, Rational(0));
    for (int j = 0; j <= k; ++j) {
      const Rational v = binom(k, j) * binom(k + j, j);
      c[j] = j % 2 ? Rational(-v) : v;
    }
  } else {
    // sum_i (k-n)_i (-n-k-1)_i / (i!)^2 x^{n-i} (x-1)^i
    c.assign(n + 1, Rational(0));
    Rational coef = 1;
    for (int i = 0; i <= n - k; ++i) {
      if (i > 0) coef *= Rational((k - n + i - 1) * (-n - k - 2 + i), i * i);
      for (int m = 0; m <= i; ++m) {
        const Rational t = coef * binom(i, m);
        c[n - i + m] += (i - m) % 2 ? Rational(-t) : t;
      }
    }
    if (edge == TriEdge::II && k % 2 == 1)
      for (auto& v : c) v = -v;
  }
  Poly1D r;
  for (const auto& v : c) r.c.push_back(static_cast<double>(v));
  return r;
}

Poly1D ortho_edge_trace(const OrthoCoeffs& f, TriEdge edge) {
  Poly1D r;
  r.c.assign(f.degree + 1, 0.0);
  for (int k = 0; k <= f.degree; ++k) poly_axpy(f.coeffs(k), edge_trace(f.degree, k, edge), r);
  return r;
}

OrthoCoeffs extend_from_edge(const Poly1D& v, TriEdge edge, int n) {
  check_degree(n, "extend_from_edge");
  int deg = v.degree();
  while (deg > 0 && v.c[deg] == 0.0) --deg;
  if (deg > n) throw ParameterError("extend_from_edge: trace degree exceeds n");
  // collocation at Chebyshev points of [0, 1]
  const int m = n + 1;
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * (2.0 * i + 1) / (2.0 * m)));
    A.row(i) = proriol_eval_all(n, edge_point(edge, t)).transpose();
    rhs(i) = v(t);
  }
  Eigen::VectorXd c = A.fullPivLu().solve(rhs);
  return OrthoCoeffs(n, c);
}

double ortho_check(int n, int k, const QuadratureRule& quad) {
  if (quad.dim != 2) throw ParameterError("ortho_check: need a triangle rule");
  if (quad.exactness < 2 * n) throw ParameterError("ortho_check: rule exactness below 2n");
  double worst = 0.0;
  for (int a = 0; a <= n - 1; ++a)
    for (int b = 0; a + b <= n - 1; ++b) {
      double s = 0.0;
      for (size_t q = 0; q < quad.points.size(); ++q) {
        const auto& x = quad.points[q];
        s += quad.weights[q] * proriol_eval(n, k, RefTrianglePoint::unchecked(x(0), x(1))) *
             std::pow(x(0), a) * std::pow(x(1), b);
      }
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

double proriol_norm_sq(int n, int k) {
  check_degree(n, "proriol_norm_sq");
  return 1.0 / (2.0 * (2 * k + 1) * (n + 1));
}

}  // namespace cr3d
