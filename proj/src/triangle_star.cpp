#include "cr3d/triangle_star.hpp"

#include <cmath>
#include <numbers>

#include "cr3d/errors.hpp"
#include "cr3d/polykernels.hpp"

namespace cr3d {

TriangleStar::TriangleStar(Eigen::Vector2d centre, std::vector<Eigen::Vector2d> outer)
    : centre_(std::move(centre)), outer_(std::move(outer)) {
  if (outer_.size() < 3) throw ParameterError("TriangleStar: need at least 3 triangles");
}

TriangleStar TriangleStar::regular(int m) {
  if (m < 3) throw ParameterError("TriangleStar::regular: need m >= 3");
  std::vector<Eigen::Vector2d> v;
  for (int l = 0; l < m; ++l) {
    const double t = 2.0 * std::numbers::pi * l / m;
    v.emplace_back(std::cos(t), std::sin(t));
  }
  return TriangleStar(Eigen::Vector2d::Zero(), v);
}

const Eigen::Vector2d& TriangleStar::outer(int l) const {
  const int m = size();
  return outer_[((l - 1) % m + m) % m];
}

AffineMap2 TriangleStar::pullback(int l) const {
  AffineMap2 map;
  map.origin = centre_;
  const Eigen::Vector2d a = outer(l) - centre_, b = outer(l + 1) - centre_;
  if (l % 2 == 1) {
    map.A.col(0) = a;
    map.A.col(1) = b;
  } else {
    map.A.col(0) = b;
    map.A.col(1) = a;
  }
  return map;
}

std::vector<int> star_indices(int p, int m) {
  check_degree(p, "star_indices");
  if (m < 3) throw ParameterError("star_indices: need m >= 3");
  std::vector<int> ks;
  for (int k = 0; k <= p; ++k)
    if (m % 2 == 0 || k % 2 == 0) ks.push_back(k);
  return ks;
}

int star_dim(int p, int m) { return static_cast<int>(star_indices(p, m).size()); }

std::vector<StarFunction> star_basis(int p, const TriangleStar& star) {
  std::vector<StarFunction> out;
  for (int k : star_indices(p, star.size())) {
    StarFunction f;
    f.degree = p;
    f.pieces.assign(star.size(), OrthoCoeffs::unit(p, k));
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

double eval_on(const StarFunction& f, const TriangleStar& star, int l, const Eigen::Vector2d& y) {
  const Eigen::Vector2d x = star.pullback(l).inverse(y);
  return ortho_eval(f.pieces[l - 1], RefTrianglePoint::unchecked(x(0), x(1)));
}

}  // namespace

StarCheck check_star_membership(const StarFunction& f, const TriangleStar& star, double tol) {
  const int m = star.size();
  if (static_cast<int>(f.pieces.size()) != m) throw ParameterError("check_star_membership: piece count");
  constexpr int kSamples = 50;
  double sq = 0.0;
  int count = 0;
  // edge [A, A_l] is shared by T_{l-1} and T_l
  for (int l = 1; l <= m; ++l) {
    const int prev = (l == 1) ? m : l - 1;
    for (int s = 0; s < kSamples; ++s) {
      const double t = (s + 0.5) / kSamples;
      const Eigen::Vector2d y = star.centre() + t * (star.outer(l) - star.centre());
      const double d = eval_on(f, star, l, y) - eval_on(f, star, prev, y);
      sq += d * d;
      ++count;
    }
  }
  const double res = std::sqrt(sq / count);
  return {res <= tol, res};
}

Eigen::VectorXd star_samples(const StarFunction& f, const TriangleStar& star, int per_triangle) {
  const int m = star.size();
  Eigen::VectorXd out(m * per_triangle * per_triangle);
  int idx = 0;
  for (int l = 1; l <= m; ++l) {
    const AffineMap2 map = star.pullback(l);
    for (int i = 0; i < per_triangle; ++i)
      for (int j = 0; j < per_triangle; ++j) {
        // interior lattice-like points in physical coordinates
        const double u = (i + 0.37) / per_triangle, v = (j + 0.21) / per_triangle;
        const double x1 = u * (1.0 - v), x2 = u * v;
        const Eigen::Vector2d y = map(x1, x2);
        out(idx++) = eval_on(f, star, l, y);
      }
  }
  return out;
}

}  // namespace cr3d
