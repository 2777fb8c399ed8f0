// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_CLI_HPP
#define FEEC_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "feec/config.hpp"

namespace feec
{

enum ExitCode : int
{
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitRateCheck = 4,
  kExitIo = 5
};

struct RateCheck
{
  std::string name;
  double fitted = 0.0;
  RateBound bound;
  bool passed = false;
};

// Compares fitted rates with the bounds. A bounded quantity without a fitted rate fails.
std::vector<RateCheck> check_rates(const RateTable &table,
                                   const std::map<std::string, RateBound> &bounds);

// Runs the configured study and writes the CSV (and SVG when configured) into `out_dir`.
// Progress and the rate table go to `out`, diagnostics to `err`.
int run_study_cli(const StudyConfig &config, const std::filesystem::path &out_dir,
                  std::ostream &out, std::ostream &err);

// feec-dirichlet run --config <path> [--check] [--out-dir <path>]
int run_cli(int argc, char **argv);

}  // namespace feec

#endif  // FEEC_CLI_HPP
