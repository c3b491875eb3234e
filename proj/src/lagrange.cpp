#include "cr3d/lagrange.hpp"

#include <memory>
#include <mutex>
#include <string>

#include "cr3d/errors.hpp"

namespace cr3d {

std::vector<MultiIndex4> lattice_multi_indices(int p) {
  if (p < 0) throw ParameterError("lattice_multi_indices: negative degree");
  std::vector<MultiIndex4> out;
  for (int a3 = 0; a3 <= p; ++a3)
    for (int a2 = 0; a2 + a3 <= p; ++a2)
      for (int a1 = 0; a1 + a2 + a3 <= p; ++a1) out.push_back({p - a1 - a2 - a3, a1, a2, a3});
  return out;
}

LagrangeBasis::LagrangeBasis(int p) : p_(p) {
  if (p < 1 || p > kMaxLagrangeDegree)
    throw ParameterError("LagrangeBasis: degree " + std::to_string(p) + " outside [1, 8]");
  alpha_ = lattice_multi_indices(p);
  lookup_.assign((p + 1) * (p + 1) * (p + 1), -1);
  for (size_t i = 0; i < alpha_.size(); ++i) {
    const auto& a = alpha_[i];
    lookup_[a[1] + (p + 1) * (a[2] + (p + 1) * a[3])] = static_cast<int>(i);
  }
}

int LagrangeBasis::index_of(const MultiIndex4& a) const {
  if (a[0] + a[1] + a[2] + a[3] != p_) return -1;
  for (int v : a)
    if (v < 0) return -1;
  return lookup_[a[1] + (p_ + 1) * (a[2] + (p_ + 1) * a[3])];
}

namespace {

// l_a(t) = prod_{m<a} (p t - m) / (m + 1) and its derivative
void factor_table(int p, double t, std::vector<double>& val, std::vector<double>& der) {
  val.assign(p + 1, 0.0);
  der.assign(p + 1, 0.0);
  val[0] = 1.0;
  for (int m = 0; m < p; ++m) {
    const double f = (p * t - m) / (m + 1), fd = static_cast<double>(p) / (m + 1);
    der[m + 1] = der[m] * f + val[m] * fd;
    val[m + 1] = val[m] * f;
  }
}

}  // namespace

Eigen::VectorXd LagrangeBasis::values(const Eigen::Vector4d& lam) const {
  std::array<std::vector<double>, 4> v, d;
  for (int j = 0; j < 4; ++j) factor_table(p_, lam(j), v[j], d[j]);
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) {
    const auto& a = alpha_[i];
    out(i) = v[0][a[0]] * v[1][a[1]] * v[2][a[2]] * v[3][a[3]];
  }
  return out;
}

Eigen::MatrixXd LagrangeBasis::bary_gradients(const Eigen::Vector4d& lam) const {
  std::array<std::vector<double>, 4> v, d;
  for (int j = 0; j < 4; ++j) factor_table(p_, lam(j), v[j], d[j]);
  Eigen::MatrixXd out(size(), 4);
  for (int i = 0; i < size(); ++i) {
    const auto& a = alpha_[i];
    for (int j = 0; j < 4; ++j) {
      double g = 1.0;
      for (int l = 0; l < 4; ++l) g *= (l == j) ? d[l][a[l]] : v[l][a[l]];
      out(i, j) = g;
    }
  }
  return out;
}

const LagrangeBasis& lagrange_basis(int p) {
  if (p < 1 || p > kMaxLagrangeDegree)
    throw ParameterError("lagrange_basis: degree " + std::to_string(p) + " outside [1, 8]");
  static std::mutex mtx;
  static std::array<std::unique_ptr<LagrangeBasis>, kMaxLagrangeDegree + 1> cache;
  std::lock_guard<std::mutex> lock(mtx);
  if (!cache[p]) cache[p] = std::make_unique<LagrangeBasis>(p);
  return *cache[p];
}

}  // namespace cr3d
