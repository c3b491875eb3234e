#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cr3d {

/// Points in reference simplex coordinates (dim 2: unit triangle, dim 3: unit tet).
struct QuadratureRule {
  int dim = 0;
  int exactness = 0;
  std::vector<Eigen::Vector3d> points;  // third component unused for dim 2
  std::vector<double> weights;
};

inline constexpr int kMaxQuadratureExactness = 40;

/// Gauss-Jacobi nodes and weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
void gauss_jacobi(int npts, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights);

/// Collapsed-coordinate tensor rule, exact for total degree <= exactness.
const QuadratureRule& simplex_quadrature(int dim, int exactness);

}  // namespace cr3d
