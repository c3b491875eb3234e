#include "cr3d/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "cr3d/errors.hpp"
#include "cr3d/fe_space.hpp"
#include "cr3d/polykernels.hpp"
#include "cr3d/s3_decomp.hpp"
#include "cr3d/triangle_star.hpp"

namespace cr3d {

namespace {

std::vector<RefTrianglePoint> sample_points(int n) {
  std::vector<RefTrianglePoint> pts;
  for (int i = 0; i < n; ++i) {
    // low-discrepancy points folded into the triangle
    double u = std::fmod(0.5 + i * 0.6180339887498949, 1.0);
    double v = std::fmod(0.5 + i * 0.7548776662466927, 1.0);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    pts.push_back(RefTrianglePoint::unchecked(u, v));
  }
  return pts;
}

}  // namespace

std::vector<CheckResult> run_invariant_checks(const CheckOptions& opt) {
  if (opt.p_max < 1 || opt.p_max > kMaxLagrangeDegree)
    throw ParameterError("run_invariant_checks: p_max outside [1, 8]");
  std::vector<CheckResult> out;
  const double eps = opt.perturbation, sc = opt.tol_scale;
  auto add = [&](const std::string& name, int p, double value, double thr) {
    out.push_back({name, p, value <= thr * sc, value, thr * sc});
  };
  const auto pts = sample_points(60);
  static const SimplicialMesh3D two = generate_two_tet_mesh();

  for (int p = 1; p <= opt.p_max; ++p) {
    const auto d = multiplicities(p);
    add("multiplicity_sum", p, std::abs(d.triv + d.sign + 2 * d.refl - (p + 1)), 0.0);

    Eigen::MatrixXd M = m_matrix(p);
    M(0, 0) += eps;
    const Eigen::MatrixXd R = r_matrix(p), I = Eigen::MatrixXd::Identity(p + 1, p + 1);
    add("flip_involution", p, (M * M - I).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::MatrixXd MR = M * R;
    add("rotation_order3", p, (MR * MR * MR - I).cwiseAbs().maxCoeff(), 1e-10);

    const auto& quad = simplex_quadrature(2, 2 * p + 2);
    double ortho = 0.0;
    for (int k = 0; k <= p; ++k) ortho = std::max(ortho, ortho_check(p, k, quad));
    add("orthogonality", p, ortho, 1e-12);

    double sym = 0.0;
    for (auto f : sym_basis(p)) {
      f.coeffs(f.degree) += eps;
      for (const auto& x : pts) {
        const double a = ortho_eval(f, x);
        const double y3 = 1.0 - x.x1 - x.x2;
        for (auto q : {RefTrianglePoint::unchecked(x.x2, x.x1), RefTrianglePoint::unchecked(y3, x.x2),
                       RefTrianglePoint::unchecked(x.x1, y3)})
          sym = std::max(sym, std::abs(ortho_eval(f, q) - a));
      }
    }
    add("sym_invariance", p, sym, 1e-11);

    double triple = 0.0, vc = 0.0;
    const auto refl = refl_basis(p);
    for (const auto& t : refl) {
      OrthoCoeffs base = t.base;
      base.coeffs(0) += eps;
      for (const auto& x : pts)
        triple = std::max(triple, std::abs(ortho_eval(base, x) + ortho_eval(t.rm, x) + ortho_eval(t.mr, x)));
    }
    OrthoCoeffs b0 = refl[0].base;
    b0.coeffs(0) += eps;
    vc = std::abs(ortho_eval(b0, RefTrianglePoint(1.0, 0.0)) - vertex_constant(p));
    add("refl_triple", p, triple, 1e-11);
    add("vertex_constant", p, vc, 1e-12);

    int mismatch = 0;
    for (int m = 3; m <= 6; ++m) {
      const auto star = TriangleStar::regular(m);
      const auto basis = star_basis(p, star);
      Eigen::MatrixXd S(star_samples(basis[0], star, p + 2).size(), static_cast<Eigen::Index>(basis.size()));
      for (size_t i = 0; i < basis.size(); ++i) {
        S.col(static_cast<Eigen::Index>(i)) = star_samples(basis[i], star, p + 2);
        if (!check_star_membership(basis[i], star).member) ++mismatch;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
      lu.setThreshold(1e-10);
      if (lu.rank() != star_dim(p, m)) ++mismatch;
    }
    add("star_dimension", p, mismatch, 0.0);

    if (p <= 4) {
      const DofSystem sys = assemble_dof_system(two, p);
      double jm = 0.0;
      for (auto f : sys.basis) {
        f.pieces[0].coeffs(0) += eps;
        jm = std::max(jm, max_jump_moment(two, f, p));
      }
      add("weak_compatibility", p, jm, 1e-10);
    }
  }
  return out;
}

}  // namespace cr3d
