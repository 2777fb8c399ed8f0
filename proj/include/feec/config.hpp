// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_CONFIG_HPP
#define FEEC_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feec/convergence.hpp"

namespace feec
{

// Accepted interval for a fitted convergence rate.
struct RateBound
{
  std::optional<double> min;
  std::optional<double> max;
};

// One study, read from a JSON document. Keys:
//   problem          "hodge_laplace" | "stokes_vvp"                     (required)
//   case             "I" | "II" | "III"                                 (required)
//   k                1 | 2                                              (required)
//   base_n           subdivisions of the coarsest level                 (required)
//   n_levels         levels base_n * 2^l, default 3
//   solver_tol       relative residual tolerance, default 1e-10
//   vorticity_space  "sigma_h" (default) | "sigma_h0" (ill-posed, for demonstration)
//   check            compare fitted rates against the expected bounds, default false
//   record_timing    fill the CSV seconds column, default false
//   output           {"csv": file name, "svg": file name}, relative to the output directory
//   expected_rates   {column: number (minimum) | {"min": x, "max": y}}, overrides defaults
struct StudyConfig
{
  Problem problem = Problem::hodge_laplace;
  CaseId case_id = CaseId::II;
  int k = 1;
  int base_n = 2;
  int n_levels = 3;
  double solver_tol = 1e-10;
  bool naive_vorticity = false;
  bool check = false;
  bool record_timing = false;
  std::string csv_name;
  std::optional<std::string> svg_name;
  std::map<std::string, RateBound> rate_overrides;

  std::vector<int> levels() const { return level_sequence(base_n, n_levels); }
  StudyParams study_params() const;
};

// Raises ConfigError naming the offending key.
StudyConfig parse_config(std::string_view text);

// Re-validates cross-key invariants (e.g. after --check toggles check mode).
void validate(const StudyConfig &config);

// Bounds implied by the error estimates for the configured problem, case and degree, with
// `rate_overrides` applied on top.
std::map<std::string, RateBound> expected_rate_bounds(const StudyConfig &config);

}  // namespace feec

#endif  // FEEC_CONFIG_HPP
