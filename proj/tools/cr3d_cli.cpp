// Command line front end: mesh generation, invariant checks, basis dumps,
// single solves and convergence studies.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "cr3d/errors.hpp"
#include "cr3d/fe_space.hpp"
#include "cr3d/invariants.hpp"
#include "cr3d/s3_decomp.hpp"
#include "cr3d/solver.hpp"

namespace {

using namespace cr3d;

constexpr int kOk = 0, kNumerical = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SimplicialMesh3D mesh_from_arg(const std::string& arg) {
  if (arg == "octahedron") return generate_octahedron_mesh();
  if (arg == "two-tet") return generate_two_tet_mesh();
  if (arg.rfind("cube:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(arg.substr(5));
    } catch (const std::exception&) {
      throw UsageError("bad cube size in '" + arg + "'");
    }
    return generate_cube_mesh(n);
  }
  return load_mesh_file(arg);
}

// writes to a file, or stdout when path is empty or "-"
template <class F>
void with_output(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  body(out);
}

int cmd_gen_mesh(const std::string& kind, int n, const std::string& out) {
  SimplicialMesh3D mesh = [&] {
    if (kind == "cube") return generate_cube_mesh(n);
    if (kind == "octahedron") return generate_octahedron_mesh();
    if (kind == "two-tet") return generate_two_tet_mesh();
    throw UsageError("unknown mesh kind '" + kind + "' (cube, octahedron, two-tet)");
  }();
  with_output(out, [&](std::ostream& os) { save_mesh(mesh, os); });
  return kOk;
}

int cmd_check(int p_max, double tol_scale, bool fault, const std::string& out) {
  CheckOptions opt;
  opt.p_max = p_max;
  opt.tol_scale = tol_scale;
  opt.perturbation = fault ? 1e-6 : 0.0;
  const auto res = run_invariant_checks(opt);
  bool ok = true;
  with_output(out, [&](std::ostream& os) {
    os << "invariant,p,status,value,threshold\n" << std::setprecision(6);
    for (const auto& r : res) {
      os << r.name << ',' << r.p << ',' << (r.pass ? "PASS" : "FAIL") << ',' << r.value << ','
         << r.threshold << '\n';
      ok = ok && r.pass;
    }
  });
  return ok ? kOk : kNumerical;
}

int cmd_basis_dump(const std::string& family, int p, int k, int grid, const std::string& out) {
  if (grid < 2) throw UsageError("--grid must be >= 2");
  OrthoCoeffs f;
  NodalFunction nc;
  std::unique_ptr<SimplicialMesh3D> mesh;
  if (family == "sym") {
    const auto b = sym_basis(p);
    if (k < 0 || k >= static_cast<int>(b.size())) throw UsageError("--k must be below d_triv(p)");
    f = b[k];
    mesh = std::make_unique<SimplicialMesh3D>(std::vector<Vec3>{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)},
                                              std::vector<Tet>{{0, 1, 2, 3}});
    nc = build_sym_nc(*mesh, 0, p, k);
  } else if (family == "refl") {
    const auto b = refl_basis(p);
    if (k < 0 || k >= static_cast<int>(b.size())) throw UsageError("--k must be below d_refl(p)");
    f = b[k].base;
    mesh = std::make_unique<SimplicialMesh3D>(generate_two_tet_mesh());
    int T = -1;
    for (int i = 0; i < mesh->num_facets(); ++i)
      if (!mesh->facet_is_boundary(i)) T = i;
    nc = build_refl_nc(*mesh, T, p, k);
  } else {
    throw UsageError("unknown family '" + family + "' (sym, refl)");
  }
  auto grid_pt = [grid](int i, int j) {
    const double u = static_cast<double>(i) / (grid - 1), v = static_cast<double>(j) / (grid - 1);
    return std::pair<double, double>(u * (1.0 - v), v);
  };
  with_output(out, [&](std::ostream& os) {
    os << "x,y,value\n" << std::setprecision(12);
    for (int j = 0; j < grid; ++j)
      for (int i = 0; i < grid; ++i) {
        auto [x, y] = grid_pt(i, j);
        os << x << ',' << y << ',' << ortho_eval(f, RefTrianglePoint::unchecked(x, y)) << '\n';
      }
  });
  const std::string surf = (out.empty() || out == "-") ? "" : out + ".surface.csv";
  if (!surf.empty()) {
    with_output(surf, [&](std::ostream& os) {
      os << "x,y,z,value\n" << std::setprecision(12);
      for (int fi = 0; fi < mesh->num_facets(); ++fi) {
        if (!mesh->facet_is_boundary(fi)) continue;
        const FacetMap m = facet_pullback(*mesh, fi);
        const int t = mesh->facet_tets(fi)[0];
        for (int j = 0; j < grid; ++j)
          for (int i = 0; i < grid; ++i) {
            auto [x, y] = grid_pt(i, j);
            const Vec3 X = m(x, y);
            os << X(0) << ',' << X(1) << ',' << X(2) << ',' << trace_eval(*mesh, nc, t, m, x, y) << '\n';
          }
      }
    });
  }
  return kOk;
}

SolveOptions solve_options(double tol, int quad) {
  SolveOptions opt;
  opt.tol = tol;
  opt.quad_exactness = quad;
  return opt;
}

int cmd_solve(const std::string& mesh_arg, int p, const std::string& problem, double tol, int quad,
              const std::string& out) {
  const SimplicialMesh3D mesh = mesh_from_arg(mesh_arg);
  PoissonProblem pr;
  if (problem == "sine") pr = sine_problem(mesh, p);
  else if (problem == "bubble") pr = bubble_problem(mesh, p);
  else throw UsageError("unknown problem '" + problem + "' (sine, bubble)");
  const DofSystem sys = assemble_dof_system(mesh, p);
  const Solution sol = solve(pr, sys, solve_options(tol, quad));
  with_output(out, [&](std::ostream& os) {
    os << "tets,dofs,h,h1_error,l2_error,iterations,residual\n" << std::setprecision(10);
    os << mesh.num_tets() << ',' << sys.size() << ',' << mesh.max_diameter() << ','
       << broken_h1_error(mesh, sol.u, pr.exact_grad) << ',' << l2_error(mesh, sol.u, pr.exact) << ','
       << sol.iterations << ',' << sol.residual << '\n';
  });
  return kOk;
}

int cmd_convergence(int p, int levels, double tol, int quad, const std::string& out) {
  const auto rows = convergence_study(p, levels, solve_options(tol, quad));
  with_output(out, [&](std::ostream& os) { os << convergence_csv(rows); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly continuous nonconforming finite elements on tetrahedral meshes"};
  app.require_subcommand(1);

  std::string out, kind, family = "sym", mesh_arg, problem = "sine";
  int n = 2, p = 2, p_max = 6, k = 0, grid = 20, levels = 3, quad = -1;
  double tol = 1e-10, tol_scale = 1.0;
  bool fault = false;

  auto* gen = app.add_subcommand("gen-mesh", "write a generated mesh");
  gen->add_option("kind", kind, "cube | octahedron | two-tet")->required();
  gen->add_option("n", n, "subdivisions per axis for the cube");
  gen->add_option("--out", out, "output file (default stdout)");

  auto* chk = app.add_subcommand("check", "run the invariant suites");
  chk->add_option("--p", p_max, "largest degree checked")->check(CLI::Range(1, 8));
  chk->add_option("--tol", tol_scale, "threshold multiplier");
  chk->add_option("--out", out, "output file (default stdout)");
  chk->add_flag("--inject-fault", fault)->group("");

  auto* dump = app.add_subcommand("basis-dump", "sample a symmetric or reflection basis member");
  dump->add_option("--family", family, "sym | refl");
  dump->add_option("--p", p, "degree")->check(CLI::Range(1, 8));
  dump->add_option("--k", k, "member index");
  dump->add_option("--grid", grid, "samples per direction");
  dump->add_option("--out", out, "triangle CSV; surface values go to <out>.surface.csv");

  auto* sol = app.add_subcommand("solve", "solve a manufactured Poisson problem");
  sol->add_option("--mesh", mesh_arg, "mesh file, cube:N, octahedron or two-tet")->required();
  sol->add_option("--p", p, "degree")->check(CLI::Range(1, 8));
  sol->add_option("--problem", problem, "sine | bubble");
  sol->add_option("--tol", tol, "relative CG residual");
  sol->add_option("--quad-exactness", quad, "stiffness quadrature exactness")->check(CLI::Range(-1, 40));
  sol->add_option("--out", out, "output file (default stdout)");

  auto* conv = app.add_subcommand("convergence", "h-convergence study on refined cube meshes");
  conv->add_option("--p", p, "degree")->check(CLI::Range(1, 8));
  conv->add_option("--levels", levels, "refinement levels (n = 2, 4, ...)")->check(CLI::Range(2, 6));
  conv->add_option("--tol", tol, "relative CG residual");
  conv->add_option("--quad-exactness", quad, "stiffness quadrature exactness")->check(CLI::Range(-1, 40));
  conv->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen_mesh(kind, n, out);
    if (*chk) return cmd_check(p_max, tol_scale, fault, out);
    if (*dump) return cmd_basis_dump(family, p, k, grid, out);
    if (*sol) return cmd_solve(mesh_arg, p, problem, tol, quad, out);
    if (*conv) return cmd_convergence(p, levels, tol, quad, out);
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const InternalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
