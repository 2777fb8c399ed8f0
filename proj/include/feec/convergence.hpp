// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_CONVERGENCE_HPP
#define FEEC_CONVERGENCE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feec/manufactured.hpp"
#include "feec/parallel.hpp"
#include "feec/solver.hpp"

namespace feec
{

enum class Problem
{
  hodge_laplace,
  stokes_vvp
};

std::string_view to_string(Problem problem);

struct ErrorRecord
{
  CaseId case_id = CaseId::II;
  int k = 1;
  int level = 0;
  int n = 0;
  double h_max = 0.0;
  int ndof_sigma = 0;
  int ndof_v = 0;
  std::optional<int> ndof_s;
  double err_mu_l2 = 0.0;
  double err_curl_mu_l2 = 0.0;
  double err_u_l2 = 0.0;
  double err_div_u_l2 = 0.0;
  std::optional<double> err_p_l2;
  // ||div u_h - P_h g|| (stokes only).
  std::optional<double> div_residual;
  double residual = 0.0;
  double seconds = 0.0;
};

// Error columns in CSV order.
inline constexpr std::array<std::string_view, 5> kErrorColumns = {
    "err_mu_l2", "err_curl_mu_l2", "err_u_l2", "err_div_u_l2", "err_p_l2"};

std::optional<double> error_value(const ErrorRecord &r, std::string_view column);

// L2 errors of a solved system against the exact fields (rule order 2k + 6 by default).
ErrorRecord compute_errors(const SystemSolution &solution, const ManufacturedCase &mc,
                           int quad_order = -1);

struct QuantityRate
{
  std::string name;
  double fitted = 0.0;       // least-squares slope over the last `window` levels
  double full_window = 0.0;  // slope over all levels (informational)
  std::vector<double> steps; // per-step log(e_i / e_{i+1}) / log(h_i / h_{i+1})
};

struct RateTable
{
  int window = 2;
  std::vector<QuantityRate> rates;

  const QuantityRate *find(std::string_view name) const;
};

// Least-squares slope of log(err) against log(h).
double fit_rate(const std::vector<double> &h, const std::vector<double> &err);

// Raises UsageError for fewer than two records.
RateTable estimate_rates(const std::vector<ErrorRecord> &records, int window = 2);

struct StudyParams
{
  Problem problem = Problem::hodge_laplace;
  CaseId case_id = CaseId::II;
  int k = 1;
  std::vector<int> levels;  // mesh subdivisions per axis, increasing
  double solver_tol = 1e-10;
  // Essential conditions on the vorticity trial space (naive variant, singular).
  bool naive_vorticity = false;
  Execution exec = Execution::parallel;
};

struct StudyResult
{
  std::vector<ErrorRecord> records;
  RateTable rates;
};

// Levels base_n * 2^l for l = 0..n_levels-1.
std::vector<int> level_sequence(int base_n, int n_levels);

// build -> assemble -> solve -> errors per level. Solver failures raise SolverError naming
// the level.
StudyResult run_refinement_study(const StudyParams &params);

// One CSV row per record with the fixed header; `with_timing` fills the seconds column.
void write_csv(std::ostream &os, const std::vector<ErrorRecord> &records, bool with_timing);

}  // namespace feec

#endif  // FEEC_CONVERGENCE_HPP
