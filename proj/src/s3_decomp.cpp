#include "cr3d/s3_decomp.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "cr3d/errors.hpp"
#include "cr3d/polykernels.hpp"

namespace cr3d {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Weighted inner product matching L2 on the triangle, b_{p,k} being orthogonal.
double l2_dot(int p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (int k = 0; k <= p; ++k) s += a(k) * b(k) * proriol_norm_sq(p, k);
  return s;
}

}  // namespace

Multiplicities multiplicities(int n) {
  if (n < 0) throw ParameterError("multiplicities: negative degree");
  return {floor_div(n, 2) - floor_div(n - 1, 3), floor_div(n - 1, 2) - floor_div(n - 1, 3),
          floor_div(n + 2, 3)};
}

S3Matrices s3_matrices(int p) { return {p, r_matrix(p), m_matrix(p)}; }

Eigen::MatrixXd symmetriser(int p) {
  const auto s = s3_matrices(p);
  return Eigen::MatrixXd::Identity(p + 1, p + 1) + s.RM() + s.MR();
}

Eigen::MatrixXd refl_projector(int p) {
  const auto s = s3_matrices(p);
  return (2.0 * Eigen::MatrixXd::Identity(p + 1, p + 1) - s.MR() - s.RM()) / 3.0;
}

std::vector<OrthoCoeffs> sym_basis(int p) {
  check_degree(p, "sym_basis");
  const Eigen::MatrixXd S = symmetriser(p);
  const int d = multiplicities(p).triv;
  std::vector<OrthoCoeffs> out;
  for (int k = 0; k < d; ++k) {
    const int col = (p % 2 == 0) ? p - 2 * k : p - 1 - 2 * k;
    out.emplace_back(p, S.col(col));
  }
  return out;
}

std::vector<OrthoCoeffs> sign_basis(int p) {
  check_degree(p, "sign_basis");
  const Eigen::MatrixXd S = symmetriser(p);
  const int d = multiplicities(p).sign;
  std::vector<OrthoCoeffs> out;
  std::vector<Eigen::VectorXd> ortho;
  // greedy pivoting over odd candidates, highest index first
  for (int col = (p % 2 == 1) ? p : p - 1; col >= 1 && static_cast<int>(out.size()) < d;
       col -= 2) {
    Eigen::VectorXd v = S.col(col);
    const double n0 = std::sqrt(l2_dot(p, v, v));
    if (n0 == 0.0) continue;
    Eigen::VectorXd w = v;
    for (const auto& q : ortho) w -= l2_dot(p, q, w) * q;
    const double nw = std::sqrt(l2_dot(p, w, w));
    if (nw / n0 <= 1e-9) continue;
    ortho.push_back(w / nw);
    out.emplace_back(p, v);
  }
  if (static_cast<int>(out.size()) != d) throw InternalError("sign_basis: candidate rank deficit");
  return out;
}

std::vector<ReflTriple> refl_basis(int p) {
  check_degree(p, "refl_basis");
  const auto s = s3_matrices(p);
  const Eigen::MatrixXd P = refl_projector(p);
  const Eigen::MatrixXd RM = s.RM(), MR = s.MR();
  const int d = multiplicities(p).refl;
  std::vector<ReflTriple> out;
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd b = P.col(2 * k);
    out.push_back({OrthoCoeffs(p, b), OrthoCoeffs(p, RM * b), OrthoCoeffs(p, MR * b)});
  }
  return out;
}

OrthoCoeffs project_refl(const OrthoCoeffs& f) {
  return OrthoCoeffs(f.degree, refl_projector(f.degree) * f.coeffs);
}

double vertex_constant(int p) {
  if (p < 1) throw ParameterError("vertex_constant: p must be >= 1");
  return (1.0 - ((p % 2 == 0) ? 1.0 : -1.0) * (p + 1)) / 3.0;
}

AltReflOperators alt_refl_operators(int p) {
  const auto s = s3_matrices(p);
  const int m = p + 1;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
  AltReflOperators ops;
  ops.T1 = I - s.MR();
  ops.T2 = I - s.RM();
  const std::complex<double> w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const Eigen::MatrixXcd IR = (I + s.R).cast<std::complex<double>>();
  const Eigen::MatrixXcd T1 = ops.T1.cast<std::complex<double>>();
  const Eigen::MatrixXcd T2 = ops.T2.cast<std::complex<double>>();
  ops.S1 = -(w * T1 + w * w * T2) * IR / 3.0;
  ops.S2 = -(w * w * T1 + w * T2) * IR / 3.0;
  return ops;
}

std::vector<Eigen::VectorXcd> alt_refl_basis(int p, AltReflVariant variant) {
  check_degree(p, "alt_refl_basis");
  const auto s = s3_matrices(p);
  const auto ops = alt_refl_operators(p);
  const int m = p + 1;
  const Eigen::MatrixXd IR = Eigen::MatrixXd::Identity(m, m) + s.R;
  const int d = multiplicities(p).refl;
  std::vector<Eigen::VectorXcd> out;
  for (int k = 0; k < d; ++k) {
    const Eigen::VectorXcd e = Eigen::VectorXcd::Unit(m, 2 * k);
    if (variant == AltReflVariant::T1T2) {
      out.push_back((ops.T1 * IR).cast<std::complex<double>>() * e);
      out.push_back((ops.T2 * IR).cast<std::complex<double>>() * e);
    } else {
      out.push_back(ops.S1 * e);
      out.push_back(ops.S2 * e);
    }
  }
  return out;
}

}  // namespace cr3d
