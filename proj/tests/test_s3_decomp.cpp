#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "cr3d/errors.hpp"
#include "cr3d/polykernels.hpp"
#include "cr3d/quadrature.hpp"
#include "cr3d/s3_decomp.hpp"

using namespace cr3d;

namespace {

const RefTrianglePoint kSamples[] = {{0.1, 0.2}, {0.3, 0.6}, {0.05, 0.9}, {0.7, 0.1}, {0.25, 0.25}, {0.0, 0.4}};

double f_at(const OrthoCoeffs& f, double x1, double x2) { return ortho_eval(f, RefTrianglePoint::unchecked(x1, x2)); }

OrthoCoeffs apply(const Eigen::MatrixXd& A, const OrthoCoeffs& f) { return OrthoCoeffs(f.degree, A * f.coeffs); }

Eigen::MatrixXd l2_gram(const std::vector<OrthoCoeffs>& fs) {
  const int n = static_cast<int>(fs.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return G;
  const auto& q = simplex_quadrature(2, 2 * fs[0].degree);
  for (size_t i = 0; i < q.points.size(); ++i) {
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v(j) = f_at(fs[j], q.points[i](0), q.points[i](1));
    G += q.weights[i] * v * v.transpose();
  }
  return G;
}

int rank_of(const Eigen::MatrixXd& A, double tol = 1e-9) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

// Character inner products: d_triv = (tr I + 3 tr R + 2 tr MR) / 6, d_sign with the sign character,
// d_refl = (2 tr I - 2 tr MR) / 6.
Multiplicities character_multiplicities(int n) {
  const auto s = s3_matrices(n);
  const double tI = n + 1, tR = s.R.trace(), tC = s.MR().trace();
  return {static_cast<int>(std::lround((tI + 3 * tR + 2 * tC) / 6)),
          static_cast<int>(std::lround((tI - 3 * tR + 2 * tC) / 6)),
          static_cast<int>(std::lround((2 * tI - 2 * tC) / 6))};
}

}  // namespace

TEST(Multiplicities, TableExamples) {
  auto eq = [](Multiplicities m, int t, int s, int r) { return m.triv == t && m.sign == s && m.refl == r; };
  EXPECT_TRUE(eq(multiplicities(6), 2, 1, 2));
  EXPECT_TRUE(eq(multiplicities(1), 0, 0, 1));
  EXPECT_TRUE(eq(multiplicities(2), 1, 0, 1));
  EXPECT_TRUE(eq(multiplicities(3), 1, 1, 1));
  EXPECT_TRUE(eq(multiplicities(0), 1, 0, 0));
}

TEST(Multiplicities, SumAndCharacterFormula) {
  for (int n = 0; n <= 20; ++n) {
    const auto m = multiplicities(n);
    EXPECT_EQ(m.triv + m.sign + 2 * m.refl, n + 1) << n;
    const auto c = character_multiplicities(n);
    EXPECT_EQ(m.triv, c.triv) << n;
    EXPECT_EQ(m.sign, c.sign) << n;
    EXPECT_EQ(m.refl, c.refl) << n;
  }
  EXPECT_THROW(multiplicities(-1), ParameterError);
}

TEST(S3Matrices, GroupRelations) {
  for (int n = 0; n <= 12; ++n) {
    const auto s = s3_matrices(n);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) EXPECT_EQ(s.R(i, j), i == j ? (i % 2 ? -1.0 : 1.0) : 0.0);
    EXPECT_LE((s.M * s.M - I).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::MatrixXd C = s.MR();
    EXPECT_LE((C * C * C - I).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_DOUBLE_EQ(s3_matrices(0).M(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s3_matrices(1).M(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(s3_matrices(1).M(1, 0), -1.5);
}

TEST(S3Matrices, SymmetriserParityPattern) {
  for (int n = 0; n <= 12; ++n) {
    const auto s = s3_matrices(n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double S = ((j % 2 ? -1.0 : 1.0) + (i % 2 ? -1.0 : 1.0)) * s.M(i, j) + (i == j);
        if ((i - j) % 2) EXPECT_EQ(S, 0.0);
      }
  }
}

TEST(S3Matrices, PointwiseMeaning) {
  for (int n = 0; n <= 8; ++n) {
    const auto s = s3_matrices(n);
    for (int k = 0; k <= n; ++k) {
      const OrthoCoeffs b = OrthoCoeffs::unit(n, k);
      for (const auto& x : kSamples) {
        const double y = 1 - x.x1 - x.x2;
        EXPECT_NEAR(f_at(apply(s.M, b), x.x1, x.x2), f_at(b, y, x.x2), 1e-11);
        EXPECT_NEAR(f_at(apply(s.R, b), x.x1, x.x2), f_at(b, x.x2, x.x1), 1e-11);
        EXPECT_NEAR(f_at(apply(s.RM(), b), x.x1, x.x2), f_at(b, y, x.x1), 1e-11);
        EXPECT_NEAR(f_at(apply(s.MR(), b), x.x1, x.x2), f_at(b, x.x2, y), 1e-11);
      }
    }
  }
}

TEST(SymBasis, CountsAndInvariance) {
  EXPECT_TRUE(sym_basis(1).empty());
  for (int p = 0; p <= 12; ++p) {
    const auto b = sym_basis(p);
    ASSERT_EQ(static_cast<int>(b.size()), multiplicities(p).triv) << p;
    for (const auto& f : b)
      for (const auto& x : kSamples) {
        const double y = 1 - x.x1 - x.x2, v = f_at(f, x.x1, x.x2);
        const double scale = std::max(1.0, f.coeffs.cwiseAbs().maxCoeff());
        EXPECT_NEAR(f_at(f, x.x2, x.x1), v, 1e-10 * scale);
        EXPECT_NEAR(f_at(f, y, x.x2), v, 1e-10 * scale);
        EXPECT_NEAR(f_at(f, x.x1, y), v, 1e-10 * scale);
      }
  }
}

TEST(SymBasis, VertexValuesAgree) {
  const auto b = sym_basis(2);
  ASSERT_EQ(b.size(), 1u);
  const double v0 = f_at(b[0], 0, 0);
  EXPECT_NEAR(f_at(b[0], 1, 0), v0, 1e-12);
  EXPECT_NEAR(f_at(b[0], 0, 1), v0, 1e-12);
}

TEST(SymBasis, DegreeSixIndependent) {
  const auto b = sym_basis(6);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_GT(l2_gram(b).determinant(), 1e-8);
}

TEST(SignBasis, CountsAndSignBehaviour) {
  EXPECT_TRUE(sign_basis(1).empty());
  EXPECT_TRUE(sign_basis(2).empty());
  ASSERT_EQ(sign_basis(3).size(), 1u);
  for (int p = 0; p <= 14; ++p) {
    const auto b = sign_basis(p);
    ASSERT_EQ(static_cast<int>(b.size()), multiplicities(p).sign) << p;
    const auto s = s3_matrices(p);
    for (const auto& f : b) {
      EXPECT_LE((s.R * f.coeffs + f.coeffs).cwiseAbs().maxCoeff(), 1e-10) << p;
      EXPECT_LE((s.M * f.coeffs + f.coeffs).cwiseAbs().maxCoeff(), 1e-10) << p;
    }
    if (!b.empty()) {
      const Eigen::MatrixXd G = l2_gram(b);
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().minCoeff(), 0.0) << p;
    }
  }
}

TEST(ReflBasis, TriplesAndSymmetry) {
  for (int p = 1; p <= 12; ++p) {
    const auto s = s3_matrices(p);
    const auto b = refl_basis(p);
    ASSERT_EQ(static_cast<int>(b.size()), multiplicities(p).refl);
    for (const auto& t : b) {
      EXPECT_LE((t.base.coeffs + t.rm.coeffs + t.mr.coeffs).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE((s.R * t.base.coeffs - t.base.coeffs).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE((s.RM() * t.base.coeffs - t.rm.coeffs).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(ReflBasis, VertexConstant) {
  EXPECT_DOUBLE_EQ(vertex_constant(1), 1.0);
  EXPECT_DOUBLE_EQ(vertex_constant(2), -2.0 / 3.0);
  EXPECT_DOUBLE_EQ(vertex_constant(3), 5.0 / 3.0);
  EXPECT_THROW(vertex_constant(0), ParameterError);
  for (int p = 1; p <= 12; ++p) {
    const OrthoCoeffs b0 = refl_basis(p)[0].base;
    EXPECT_NEAR(f_at(b0, 1, 0), vertex_constant(p), 1e-10) << p;
    EXPECT_NEAR(f_at(b0, 0, 1), vertex_constant(p), 1e-10) << p;
    EXPECT_NE(vertex_constant(p), 0.0);
  }
}

TEST(ReflBasis, MatchesPointwiseDefinition) {
  // (2 f - f o RM - f o MR) / 3 from the pointwise rotations of b_{p,2k}
  for (int p = 1; p <= 8; ++p) {
    const auto b = refl_basis(p);
    for (int k = 0; k < static_cast<int>(b.size()); ++k) {
      const OrthoCoeffs e = OrthoCoeffs::unit(p, 2 * k);
      for (const auto& x : kSamples) {
        const double y = 1 - x.x1 - x.x2;
        const double ref = (2 * f_at(e, x.x1, x.x2) - f_at(e, y, x.x1) - f_at(e, x.x2, y)) / 3;
        EXPECT_NEAR(f_at(b[k].base, x.x1, x.x2), ref, 1e-11);
      }
    }
  }
}

TEST(Projector, AnnihilatesSymAndSign) {
  for (int p = 1; p <= 12; ++p) {
    for (const auto& f : sym_basis(p)) EXPECT_LE(project_refl(f).coeffs.cwiseAbs().maxCoeff(), 1e-10);
    for (const auto& f : sign_basis(p)) EXPECT_LE(project_refl(f).coeffs.cwiseAbs().maxCoeff(), 1e-10);
    const auto b = refl_basis(p);
    for (int k = 0; k < static_cast<int>(b.size()); ++k)
      EXPECT_LE((project_refl(OrthoCoeffs::unit(p, 2 * k)).coeffs - b[k].base.coeffs).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Projector, IdempotentAsMatrix) {
  for (int n = 0; n <= 12; ++n) {
    const Eigen::MatrixXd P = refl_projector(n);
    EXPECT_LE((P * P - P).cwiseAbs().maxCoeff(), 1e-10) << n;
    EXPECT_EQ(rank_of(P), 2 * multiplicities(n).refl) << n;
  }
}

TEST(Decomposition, DirectSumRank) {
  for (int n = 1; n <= 12; ++n) {
    std::vector<Eigen::VectorXd> cols;
    for (const auto& f : sym_basis(n)) cols.push_back(f.coeffs);
    for (const auto& f : sign_basis(n)) cols.push_back(f.coeffs);
    Eigen::MatrixXd rot(n + 1, 2 * multiplicities(n).refl);
    int c = 0;
    for (const auto& t : refl_basis(n)) {
      cols.push_back(t.rm.coeffs);
      cols.push_back(t.mr.coeffs);
      rot.col(c++) = t.rm.coeffs;
      rot.col(c++) = t.mr.coeffs;
    }
    Eigen::MatrixXd all(n + 1, cols.size());
    for (size_t i = 0; i < cols.size(); ++i) all.col(i) = cols[i];
    EXPECT_EQ(static_cast<int>(cols.size()), n + 1);
    EXPECT_EQ(rank_of(all), n + 1) << n;
    EXPECT_EQ(rank_of(rot), 2 * multiplicities(n).refl) << n;
  }
}

TEST(AltRefl, Identities) {
  for (int p = 1; p <= 12; ++p) {
    const auto s = s3_matrices(p);
    const auto ops = alt_refl_operators(p);
    const Eigen::MatrixXd IR = Eigen::MatrixXd::Identity(p + 1, p + 1) + s.R;
    const Eigen::MatrixXd A = ops.T1 * IR;
    EXPECT_LE((s.M * A + A).cwiseAbs().maxCoeff(), 1e-10);
    const int d = multiplicities(p).refl;
    for (int k = 0; k < d; ++k) {
      const Eigen::VectorXcd e = Eigen::VectorXcd::Unit(p + 1, 2 * k);
      const Eigen::VectorXcd lhs = s.R.cast<std::complex<double>>() * (ops.S1 * e);
      EXPECT_LE((lhs - ops.S2 * e).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE(((ops.S1 * e).conjugate() - ops.S2 * e).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(AltRefl, SpansReflectionPart) {
  for (int p = 1; p <= 12; ++p) {
    const int d = multiplicities(p).refl;
    Eigen::MatrixXd rot(p + 1, 2 * d);
    int c = 0;
    for (const auto& t : refl_basis(p)) {
      rot.col(c++) = t.rm.coeffs;
      rot.col(c++) = t.mr.coeffs;
    }
    const auto t12 = alt_refl_basis(p, AltReflVariant::T1T2);
    const auto s12 = alt_refl_basis(p, AltReflVariant::S1S2);
    ASSERT_EQ(static_cast<int>(t12.size()), 2 * d);
    ASSERT_EQ(static_cast<int>(s12.size()), 2 * d);
    Eigen::MatrixXd T(p + 1, 2 * d), S(p + 1, 4 * d);
    for (int i = 0; i < 2 * d; ++i) {
      EXPECT_LE(t12[i].imag().cwiseAbs().maxCoeff(), 0.0);
      T.col(i) = t12[i].real();
      S.col(2 * i) = s12[i].real();
      S.col(2 * i + 1) = s12[i].imag();
    }
    Eigen::MatrixXd RT(p + 1, 4 * d), RS(p + 1, 6 * d);
    RT << rot, T;
    RS << rot, S;
    EXPECT_EQ(rank_of(T), 2 * d) << p;
    EXPECT_EQ(rank_of(S), 2 * d) << p;
    EXPECT_EQ(rank_of(RT), 2 * d) << p;
    EXPECT_EQ(rank_of(RS), 2 * d) << p;
  }
}
