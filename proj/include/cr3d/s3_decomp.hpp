#pragma once

// Decomposition of the degree-p orthogonal polynomials on the triangle into the
// trivial, sign and two-dimensional (reflection) isotypic parts of S3 acting by
// vertex permutations.
//
// All operators act on coefficient vectors of the Proriol basis. In that
// representation the product of matrices A * B applies B first. Matrix R * M
// corresponds to f -> f(1 - x1 - x2, x1) and M * R to f -> f(x2, 1 - x1 - x2).

#include <Eigen/Dense>
#include <vector>

#include "cr3d/ortho_tri.hpp"

namespace cr3d {

struct Multiplicities {
  int triv;
  int sign;
  int refl;
};

Multiplicities multiplicities(int n);

struct S3Matrices {
  int degree;
  Eigen::MatrixXd R;
  Eigen::MatrixXd M;
  Eigen::MatrixXd RM() const { return R * M; }
  Eigen::MatrixXd MR() const { return M * R; }
};

S3Matrices s3_matrices(int p);

/// I + R M + M R; its range in the even-index subspace is the trivial part.
Eigen::MatrixXd symmetriser(int p);

/// (2 I - M R - R M) / 3; projector onto the reflection isotypic part.
Eigen::MatrixXd refl_projector(int p);

/// d_triv(p) totally symmetric polynomials.
std::vector<OrthoCoeffs> sym_basis(int p);

/// d_sign(p) polynomials changing sign under every transposition.
std::vector<OrthoCoeffs> sign_basis(int p);

struct ReflTriple {
  OrthoCoeffs base;  // invariant under R
  OrthoCoeffs rm;    // R M applied to base
  OrthoCoeffs mr;    // M R applied to base
};

/// d_refl(p) triples; base + rm + mr vanishes identically.
std::vector<ReflTriple> refl_basis(int p);

OrthoCoeffs project_refl(const OrthoCoeffs& f);

/// b_refl_{p,0}(1, 0) = (1 - (-1)^p (p + 1)) / 3.
double vertex_constant(int p);

enum class AltReflVariant { T1T2, S1S2 };

/// Alternative bases of the reflection part, 2 d_refl(p) members ordered
/// (first_0, second_0, first_1, ...). T1T2 members are real.
std::vector<Eigen::VectorXcd> alt_refl_basis(int p, AltReflVariant variant);

/// Applies the transformation matrices directly; used by the alt-basis identities.
struct AltReflOperators {
  Eigen::MatrixXd T1;  // I - M R
  Eigen::MatrixXd T2;  // I - R M
  Eigen::MatrixXcd S1;
  Eigen::MatrixXcd S2;
};
AltReflOperators alt_refl_operators(int p);

}  // namespace cr3d
