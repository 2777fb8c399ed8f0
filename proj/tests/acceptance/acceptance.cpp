// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion. Arguments select criteria by number;
// no arguments runs all of them. Exit status is nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include "feec/analysis.hpp"
#include "feec/assembly.hpp"
#include "feec/cli.hpp"
#include "feec/config.hpp"
#include "feec/error.hpp"
#include "feec/polynomial.hpp"
#include "feec/quadrature.hpp"
#include "feec/reference_element.hpp"

namespace
{

using namespace feec;
namespace fs = std::filesystem;

struct Outcome
{
  bool passed = false;
  std::string detail;
};

std::string fmt(const char *f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::shared_ptr<const Mesh> cube(int n)
{
  return std::make_shared<const Mesh>(build_structured_cube(n));
}

std::shared_ptr<const Mesh> void_cube(int n)
{
  return std::make_shared<const Mesh>(build_cube_with_void(n));
}

Outcome complex_exactness()
{
  double worst = 0.0;
  std::vector<std::shared_ptr<const Mesh>> meshes = {cube(1), cube(2), cube(3), void_cube(3)};
  for (const auto &mesh : meshes)
  {
    for (int k : {1, 2})
    {
      const FESpace p = build_space(mesh, Family::lagrange, k, BoundaryCondition::none);
      const FESpace nd = build_space(mesh, Family::nedelec1, k, BoundaryCondition::none);
      const FESpace rt = build_space(mesh, Family::raviart_thomas, k, BoundaryCondition::none);
      const FESpace dg = build_space(mesh, Family::dg, k, BoundaryCondition::none);
      const SparseMatrix g = derivative_matrix(DerivativeOp::grad, p, nd);
      const SparseMatrix c = derivative_matrix(DerivativeOp::curl, nd, rt);
      const SparseMatrix d = derivative_matrix(DerivativeOp::div, rt, dg);
      worst = std::max({worst, multiply(c, g).max_abs(), multiply(d, c).max_abs()});
    }
  }
  return {worst < 1e-13, "max |curl grad|, |div curl| = " + fmt("%.2e", worst)};
}

Outcome commuting_diagram()
{
  const ManufacturedCase mc = make_case(CaseId::II);
  double worst = 0.0;
  for (int n : {2, 3})
  {
    const auto mesh = cube(n);
    for (int k : {1, 2})
    {
      const FESpace nd = build_space(mesh, Family::nedelec1, k, BoundaryCondition::none);
      const FESpace rt = build_space(mesh, Family::raviart_thomas, k, BoundaryCondition::none);
      const FESpace dg = build_space(mesh, Family::dg, k, BoundaryCondition::none);
      worst = std::max({worst, commuting_residual(DerivativeOp::curl, nd, rt, mc.u, mc.mu),
                        commuting_residual(DerivativeOp::curl, nd, rt, mc.mu, mc.curl_mu),
                        commuting_residual(DerivativeOp::div, rt, dg, mc.u,
                                           as_vector_field(mc.div_u))});
    }
  }
  return {worst < 1e-10, "max commuting residual = " + fmt("%.2e", worst)};
}

Outcome betti_numbers()
{
  auto dims = [](const std::shared_ptr<const Mesh> &mesh) {
    std::array<int, 3> d{};
    for (int level = 0; level < 3; level++)
    {
      d[level] = harmonic_basis(mesh, level, BoundaryCondition::none, 1).dimension();
    }
    return d;
  };
  bool ok = true;
  std::string detail;
  for (int n : {2, 3})
  {
    const auto d = dims(cube(n));
    ok = ok && d == std::array<int, 3>{1, 0, 0};
    detail += "cube n=" + std::to_string(n) + " (" + std::to_string(d[0]) + "," +
              std::to_string(d[1]) + "," + std::to_string(d[2]) + ") ";
  }
  const auto d = dims(void_cube(3));
  ok = ok && d == std::array<int, 3>{1, 0, 1};
  detail += "void n=3 (" + std::to_string(d[0]) + "," + std::to_string(d[1]) + "," +
            std::to_string(d[2]) + ")";
  return {ok, detail};
}

// Runs a study through the command-line pipeline in check mode.
Outcome study(const std::string &json, int expected_exit = kExitOk)
{
  const StudyConfig config = parse_config(json);
  const fs::path dir = fs::temp_directory_path() / "feec_acceptance";
  std::ostringstream out, err;
  const int code = run_study_cli(config, dir, out, err);
  std::string detail;
  std::istringstream lines(out.str() + err.str());
  for (std::string line; std::getline(lines, line);)
  {
    if (line.rfind("PASS", 0) == 0 || line.rfind("FAIL", 0) == 0 ||
        line.rfind("solver error", 0) == 0)
    {
      detail += "\n    " + line;
    }
  }
  detail = "exit " + std::to_string(code) + detail;
  return {code == expected_exit, detail};
}

Outcome hodge_convex()
{
  const Outcome a = study(R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 4,
                              "n_levels": 3, "check": true})");
  const Outcome b = study(R"({"problem": "hodge_laplace", "case": "II", "k": 2, "base_n": 2,
                              "n_levels": 3, "check": true})");
  return {a.passed && b.passed, "k=1: " + a.detail + "\n  k=2: " + b.detail};
}

Outcome hodge_void()
{
  return study(R"({"problem": "hodge_laplace", "case": "I", "k": 1, "base_n": 3,
                   "n_levels": 3, "check": true})");
}

Outcome stokes()
{
  return study(R"({"problem": "stokes_vvp", "case": "III", "k": 1, "base_n": 4,
                   "n_levels": 3, "check": true})");
}

Outcome schur_equivalence()
{
  const auto mesh = cube(2);
  const FESpace s = build_space(mesh, Family::nedelec1, 1, BoundaryCondition::none);
  const FESpace v =
      build_space(mesh, Family::raviart_thomas, 1, BoundaryCondition::homogeneous_essential);
  const ManufacturedCase mc = make_case(CaseId::II);
  const SchurSolution schur = solve_schur_form(s, v, mc.f);
  const SystemSolution mixed = solve_system(assemble_hodge_laplace_system(s, v, mc.f));
  const double diff = l2_norm(FEFunction(v, schur.u.coeffs - mixed.u.coeffs));
  return {mixed.report.status == SolveStatus::ok && diff < 1e-8,
          "||u_schur - u_mixed|| = " + fmt("%.2e", diff)};
}

Outcome norm_equivalence()
{
  const auto rows = norm_equivalence_report({2, 4}, 1);
  double lo = 1e300, hi = 0.0, slack = -1e300;
  for (const auto &r : rows)
  {
    slack = std::max(slack, r.curl_pi_circle - r.dual_norm);
    if (r.sample == "rotational")
    {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
  }
  const double spread = hi / lo;
  return {spread < 10.0 && slack <= 1e-8,
          "ratio spread = " + fmt("%.4f", spread) +
              ", max(||curl Pi tau|| - dual) = " + fmt("%.2e", slack)};
}

Outcome quadrature_and_unisolvence()
{
  double q_err = 0.0;
  for (int order = 0; order <= 8; order++)
  {
    const QuadratureRule rule = make_quadrature(order);
    for (int a = 0; a <= order; a++)
    {
      for (int b = 0; a + b <= order; b++)
      {
        for (int c = 0; a + b + c <= order; c++)
        {
          double s = 0.0;
          for (std::size_t q = 0; q < rule.size(); q++)
          {
            const auto &p = rule.points[q];
            s += rule.weights[q] * std::pow(p[0], a) * std::pow(p[1], b) * std::pow(p[2], c);
          }
          const double exact = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) *
                               std::tgamma(c + 1.0) / std::tgamma(a + b + c + 4.0);
          q_err = std::max(q_err, std::abs(s - exact));
        }
      }
    }
  }
  double u_err = 0.0;
  for (Family family : {Family::lagrange, Family::nedelec1, Family::raviart_thomas, Family::dg})
  {
    for (int k : {1, 2})
    {
      const ReferenceElement &e = reference_element(family, k);
      for (int j = 0; j < e.n_dofs(); j++)
      {
        const auto values =
            e.apply_dofs(e.exact_plan(), [&](const Vec3 &x) { return evaluate(e.basis(j), x); });
        for (int i = 0; i < e.n_dofs(); i++)
        {
          u_err = std::max(u_err, std::abs(values[i] - (i == j ? 1.0 : 0.0)));
        }
      }
    }
  }
  return {q_err < 1e-14 && u_err < 1e-12,
          "monomial error " + fmt("%.2e", q_err) + ", DOF-basis error " + fmt("%.2e", u_err)};
}

Outcome naive_variant()
{
  return study(R"({"problem": "hodge_laplace", "case": "I", "k": 1, "base_n": 3,
                   "n_levels": 1, "vorticity_space": "sigma_h0"})",
               kExitSolver);
}

struct Criterion
{
  int id;
  const char *name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv)
{
  const Criterion criteria[] = {
      {1, "complex exactness", complex_exactness},
      {2, "commuting diagram", commuting_diagram},
      {3, "harmonic dimensions", betti_numbers},
      {4, "Hodge-Laplace rates, convex domain", hodge_convex},
      {5, "Hodge-Laplace on the void domain", hodge_void},
      {6, "Stokes vorticity-velocity-pressure", stokes},
      {7, "Schur-eliminated form", schur_equivalence},
      {8, "Sigma_h norm equivalence", norm_equivalence},
      {9, "quadrature and unisolvence", quadrature_and_unisolvence},
      {10, "ill-posed vorticity space detected", naive_variant},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; i++)
  {
    selected.insert(std::atoi(argv[i]));
  }
  int failures = 0;
  for (const auto &c : criteria)
  {
    if (!selected.empty() && !selected.count(c.id))
    {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name,
                secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
