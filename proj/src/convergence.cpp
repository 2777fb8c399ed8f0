// SPDX-License-Identifier: Apache-2.0

#include "feec/convergence.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

#include "feec/assembly.hpp"
#include "feec/error.hpp"

namespace feec
{

std::string_view to_string(Problem problem)
{
  return problem == Problem::hodge_laplace ? "hodge_laplace" : "stokes_vvp";
}

std::optional<double> error_value(const ErrorRecord &r, std::string_view column)
{
  if (column == "err_mu_l2")
  {
    return r.err_mu_l2;
  }
  if (column == "err_curl_mu_l2")
  {
    return r.err_curl_mu_l2;
  }
  if (column == "err_u_l2")
  {
    return r.err_u_l2;
  }
  if (column == "err_div_u_l2")
  {
    return r.err_div_u_l2;
  }
  if (column == "err_p_l2")
  {
    return r.err_p_l2;
  }
  throw UsageError("unknown error column " + std::string(column));
}

namespace
{

// ||div u_h - P_h g|| with P_h the L2 projection onto the pressure space.
double divergence_residual(const FEFunction &u, const FESpace &pressure, const ScalarField &g)
{
  const FESpace &velocity = *u.space;
  const SparseMatrix div = derivative_matrix(DerivativeOp::div, velocity, pressure);
  const SparseMatrix mass = assemble_bilinear(BilinearForm::mass, pressure, pressure);
  const Vector load = assemble_load(as_vector_field(g), pressure);
  const SolveResult proj = solve_sparse(mass, load, 1e-12);
  if (proj.report.status != SolveStatus::ok)
  {
    throw SolverError("L2 projection of g failed: " + proj.report.message);
  }
  const Vector diff = div * u.coeffs - proj.x;
  return std::sqrt(diff.dot(mass * diff));
}

}  // namespace

ErrorRecord compute_errors(const SystemSolution &solution, const ManufacturedCase &mc,
                           int quad_order)
{
  const FESpace &sigma = *solution.mu.space;
  const FESpace &velocity = *solution.u.space;
  const int k = velocity.degree();
  const int order = quad_order >= 0 ? quad_order : 2 * k + 6;
  ErrorRecord r;
  r.case_id = mc.id;
  r.k = k;
  r.h_max = velocity.mesh().h_max();
  r.ndof_sigma = sigma.n_dofs();
  r.ndof_v = velocity.n_free();
  r.err_mu_l2 = l2_error(solution.mu, mc.mu, order);
  r.err_curl_mu_l2 = l2_error(solution.mu, mc.curl_mu, order, Quantity::derivative);
  r.err_u_l2 = l2_error(solution.u, mc.u, order);
  r.err_div_u_l2 = l2_error(solution.u, as_vector_field(mc.div_u), order, Quantity::derivative);
  if (solution.p)
  {
    const FESpace &pressure = *solution.p->space;
    r.ndof_s = pressure.n_dofs();
    if (mc.has_pressure)
    {
      r.err_p_l2 = l2_error(*solution.p, as_vector_field(mc.p), order);
      r.div_residual = divergence_residual(solution.u, pressure, mc.g);
    }
  }
  r.residual = solution.report.relative_residual;
  return r;
}

const QuantityRate *RateTable::find(std::string_view name) const
{
  for (const auto &r : rates)
  {
    if (r.name == name)
    {
      return &r;
    }
  }
  return nullptr;
}

double fit_rate(const std::vector<double> &h, const std::vector<double> &err)
{
  const std::size_t n = h.size();
  if (n < 2 || err.size() != n)
  {
    throw UsageError("rate fit needs at least two (h, error) pairs");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; i++)
  {
    mx += std::log(h[i]);
    my += std::log(err[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; i++)
  {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0)
  {
    throw UsageError("rate fit needs distinct mesh sizes");
  }
  return sxy / sxx;
}

RateTable estimate_rates(const std::vector<ErrorRecord> &records, int window)
{
  if (records.size() < 2)
  {
    throw UsageError("rate estimation needs at least two levels");
  }
  if (window < 2)
  {
    throw UsageError("rate window must be at least 2");
  }
  RateTable table;
  table.window = window;
  for (auto column : kErrorColumns)
  {
    std::vector<double> h, e;
    for (const auto &r : records)
    {
      const auto v = error_value(r, column);
      if (v && *v > 0.0)
      {
        h.push_back(r.h_max);
        e.push_back(*v);
      }
    }
    if (h.size() < 2)
    {
      continue;
    }
    QuantityRate q;
    q.name = std::string(column);
    const std::size_t first = h.size() - std::min<std::size_t>(h.size(), window);
    q.fitted = fit_rate({h.begin() + first, h.end()}, {e.begin() + first, e.end()});
    q.full_window = fit_rate(h, e);
    for (std::size_t i = 0; i + 1 < h.size(); i++)
    {
      q.steps.push_back(std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
    }
    table.rates.push_back(std::move(q));
  }
  return table;
}

std::vector<int> level_sequence(int base_n, int n_levels)
{
  std::vector<int> levels;
  for (int l = 0; l < n_levels; l++)
  {
    levels.push_back(base_n << l);
  }
  return levels;
}

StudyResult run_refinement_study(const StudyParams &params)
{
  const ManufacturedCase mc = make_case(params.case_id);
  if (params.case_id == CaseId::III && params.problem != Problem::stokes_vvp)
  {
    throw ConfigError("case III is a stokes problem");
  }
  StudyResult result;
  for (std::size_t level = 0; level < params.levels.size(); level++)
  {
    const int n = params.levels[level];
    const auto start = std::chrono::steady_clock::now();
    auto mesh = std::make_shared<const Mesh>(mc.domain == DomainTag::unit_cube
                                                 ? build_structured_cube(n)
                                                 : build_cube_with_void(n));
    const FESpace sigma = build_space(mesh, Family::nedelec1, params.k,
                                      params.naive_vorticity
                                          ? BoundaryCondition::homogeneous_essential
                                          : BoundaryCondition::none);
    const FESpace velocity =
        build_space(mesh, Family::raviart_thomas, params.k, BoundaryCondition::homogeneous_essential);
    AssemblyOptions opts;
    opts.exec = params.exec;

    std::optional<FESpace> pressure;
    SaddleSystem sys;
    if (params.problem == Problem::stokes_vvp)
    {
      pressure.emplace(build_space(mesh, Family::dg, params.k, BoundaryCondition::zero_mean));
      const ScalarField g = mc.g ? mc.g : ScalarField([](const Point &) { return 0.0; });
      sys = assemble_stokes_vvp_system(sigma, velocity, *pressure, mc.f, g, opts);
    }
    else
    {
      sys = assemble_hodge_laplace_system(sigma, velocity, mc.f, opts);
    }
    const SystemSolution sol = solve_system(sys, params.solver_tol);
    if (sol.report.status != SolveStatus::ok)
    {
      throw SolverError("level " + std::to_string(level) + " (n=" + std::to_string(n) +
                        "): solver status " + std::string(to_string(sol.report.status)) +
                        ": " + sol.report.message);
    }
    ErrorRecord rec = compute_errors(sol, mc);
    rec.level = static_cast<int>(level);
    rec.n = n;
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.records.push_back(rec);
  }
  if (result.records.size() >= 2)
  {
    result.rates = estimate_rates(result.records, 2);
  }
  return result;
}

namespace
{

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string fmt_opt(const std::optional<T> &v)
{
  if (!v)
  {
    return "";
  }
  if constexpr (std::is_integral_v<T>)
  {
    return std::to_string(*v);
  }
  else
  {
    return fmt(*v);
  }
}

}  // namespace

void write_csv(std::ostream &os, const std::vector<ErrorRecord> &records, bool with_timing)
{
  os << "case,k,level,n,h_max,ndof_sigma,ndof_v,ndof_s,err_mu_l2,err_curl_mu_l2,err_u_l2,"
        "err_div_u_l2,err_p_l2,residual,seconds\n";
  for (const auto &r : records)
  {
    os << to_string(r.case_id) << ',' << r.k << ',' << r.level << ',' << r.n << ','
       << fmt(r.h_max) << ',' << r.ndof_sigma << ',' << r.ndof_v << ',' << fmt_opt(r.ndof_s)
       << ',' << fmt(r.err_mu_l2) << ',' << fmt(r.err_curl_mu_l2) << ',' << fmt(r.err_u_l2)
       << ',' << fmt(r.err_div_u_l2) << ',' << fmt_opt(r.err_p_l2) << ',' << fmt(r.residual)
       << ',' << (with_timing ? fmt(r.seconds) : std::string()) << '\n';
  }
}

}  // namespace feec
