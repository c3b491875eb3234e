#pragma once

// Stars of m triangles around a common centre vertex, and the space of
// piecewise orthogonal polynomials that are continuous across the shared edges.

#include <Eigen/Dense>
#include <vector>

#include "cr3d/ortho_tri.hpp"

namespace cr3d {

struct AffineMap2 {
  Eigen::Vector2d origin;
  Eigen::Matrix2d A;  // columns: images of (1,0) and (0,1) minus origin
  Eigen::Vector2d operator()(double x1, double x2) const { return origin + A * Eigen::Vector2d(x1, x2); }
  Eigen::Vector2d inverse(const Eigen::Vector2d& y) const { return A.lu().solve(y - origin); }
};

class TriangleStar {
 public:
  /// Centre and outer vertices in counterclockwise order; m >= 3.
  TriangleStar(Eigen::Vector2d centre, std::vector<Eigen::Vector2d> outer);
  static TriangleStar regular(int m);

  int size() const { return static_cast<int>(outer_.size()); }
  const Eigen::Vector2d& centre() const { return centre_; }
  /// Outer vertex A_l, 1-based and cyclic.
  const Eigen::Vector2d& outer(int l) const;

  /// Pullback of triangle T_l = (A, A_l, A_{l+1}), 1-based. For odd l the
  /// first axis runs towards A_l, for even l towards A_{l+1}.
  AffineMap2 pullback(int l) const;

 private:
  Eigen::Vector2d centre_;
  std::vector<Eigen::Vector2d> outer_;
};

/// Piecewise function: pieces[l-1] lives on triangle l of the star.
struct StarFunction {
  int degree = 0;
  std::vector<OrthoCoeffs> pieces;
};

/// Admissible k for continuity at degree p: all k for even m, even k for odd m.
std::vector<int> star_indices(int p, int m);
int star_dim(int p, int m);
std::vector<StarFunction> star_basis(int p, const TriangleStar& star);

struct StarCheck {
  bool member;
  double residual;  // RMS trace mismatch over all shared edges
};

StarCheck check_star_membership(const StarFunction& f, const TriangleStar& star, double tol = 1e-9);

/// Samples of f on each triangle, concatenated; used for Gram-rank checks.
Eigen::VectorXd star_samples(const StarFunction& f, const TriangleStar& star, int per_triangle);

}  // namespace cr3d
