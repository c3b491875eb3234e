#pragma once

// Degree-p Lagrange basis on a tetrahedron with equispaced nodes, written in
// barycentric coordinates. Node alpha sits at barycentric coordinates alpha / p.

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace cr3d {

using MultiIndex4 = std::array<int, 4>;

/// All alpha with |alpha| = p. Order: alpha3, then alpha2, then alpha1 ascending.
std::vector<MultiIndex4> lattice_multi_indices(int p);

inline constexpr int kMaxLagrangeDegree = 8;

class LagrangeBasis {
 public:
  explicit LagrangeBasis(int p);

  int degree() const { return p_; }
  int size() const { return static_cast<int>(alpha_.size()); }
  const std::vector<MultiIndex4>& nodes() const { return alpha_; }
  /// Local index of a multi-index, or -1.
  int index_of(const MultiIndex4& a) const;

  /// Values of all basis functions at barycentric coordinates lam.
  Eigen::VectorXd values(const Eigen::Vector4d& lam) const;
  /// Row i holds d phi_i / d lambda_j treating the four lambdas as independent.
  Eigen::MatrixXd bary_gradients(const Eigen::Vector4d& lam) const;

 private:
  int p_;
  std::vector<MultiIndex4> alpha_;
  std::vector<int> lookup_;
};

/// Shared instance per degree; p in [1, kMaxLagrangeDegree].
const LagrangeBasis& lagrange_basis(int p);

/// (1 - x - y - z, x, y, z).
inline Eigen::Vector4d bary_from_ref(const Eigen::Vector3d& x) {
  return Eigen::Vector4d(1.0 - x(0) - x(1) - x(2), x(0), x(1), x(2));
}

}  // namespace cr3d
