// SPDX-License-Identifier: Apache-2.0

#include "feec/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "feec/error.hpp"
#include "feec/svg_plot.hpp"

namespace feec
{

namespace fs = std::filesystem;

std::vector<RateCheck> check_rates(const RateTable &table,
                                   const std::map<std::string, RateBound> &bounds)
{
  std::vector<RateCheck> checks;
  for (const auto &[name, bound] : bounds)
  {
    RateCheck c;
    c.name = name;
    c.bound = bound;
    if (const QuantityRate *q = table.find(name))
    {
      c.fitted = q->fitted;
      c.passed = (!bound.min || q->fitted >= *bound.min) && (!bound.max || q->fitted <= *bound.max);
    }
    checks.push_back(c);
  }
  return checks;
}

namespace
{

// Writes the whole buffer or reports failure; the file is left untouched on open failure.
bool write_file(const fs::path &path, const std::string &content, std::ostream &err)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
  {
    err << "error: cannot open " << path << " for writing\n";
    return false;
  }
  f << content;
  f.close();
  if (!f)
  {
    err << "error: failed writing " << path << "\n";
    return false;
  }
  return true;
}

std::string bound_text(const RateBound &b)
{
  char buf[64];
  if (b.min && b.max)
  {
    std::snprintf(buf, sizeof buf, "[%.2f, %.2f]", *b.min, *b.max);
  }
  else if (b.min)
  {
    std::snprintf(buf, sizeof buf, ">= %.2f", *b.min);
  }
  else if (b.max)
  {
    std::snprintf(buf, sizeof buf, "<= %.2f", *b.max);
  }
  else
  {
    return "any";
  }
  return buf;
}

}  // namespace

int run_study_cli(const StudyConfig &config, const fs::path &out_dir, std::ostream &out,
                  std::ostream &err)
{
  try
  {
    validate(config);
  }
  catch (const ConfigError &e)
  {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
  {
    err << "error: cannot create output directory " << out_dir << ": " << ec.message() << "\n";
    return kExitIo;
  }

  StudyResult result;
  try
  {
    result = run_refinement_study(config.study_params());
  }
  catch (const SolverError &e)
  {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  catch (const std::bad_alloc &)
  {
    err << "solver error: out of memory\n";
    return kExitSolver;
  }
  catch (const Error &e)
  {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::ostringstream csv;
  write_csv(csv, result.records, config.record_timing);
  if (!write_file(out_dir / config.csv_name, csv.str(), err))
  {
    return kExitIo;
  }
  out << "wrote " << (out_dir / config.csv_name).string() << "\n";
  if (config.svg_name)
  {
    std::ostringstream svg;
    const std::string title = std::string(to_string(config.problem)) + ", case " +
                              std::string(to_string(config.case_id)) + ", k=" +
                              std::to_string(config.k);
    write_svg(svg, convergence_plot(result.records, config.k, title));
    if (!write_file(out_dir / *config.svg_name, svg.str(), err))
    {
      return kExitIo;
    }
    out << "wrote " << (out_dir / *config.svg_name).string() << "\n";
  }

  char line[160];
  for (const auto &q : result.rates.rates)
  {
    std::snprintf(line, sizeof line, "rate %-15s fitted %7.4f  all levels %7.4f\n",
                  q.name.c_str(), q.fitted, q.full_window);
    out << line;
  }
  if (!config.check)
  {
    return kExitOk;
  }

  bool ok = true;
  for (const auto &c : check_rates(result.rates, expected_rate_bounds(config)))
  {
    std::snprintf(line, sizeof line, "%s %-15s fitted %7.4f  expected %s\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.fitted,
                  bound_text(c.bound).c_str());
    out << line;
    ok = ok && c.passed;
  }
  for (const auto &r : result.records)
  {
    if (r.div_residual)
    {
      const bool pass = *r.div_residual < 1e-9;
      std::snprintf(line, sizeof line, "%s div_residual    level %d  %.3e (< 1e-09)\n",
                    pass ? "PASS" : "FAIL", r.level, *r.div_residual);
      out << line;
      ok = ok && pass;
    }
  }
  return ok ? kExitOk : kExitRateCheck;
}

int run_cli(int argc, char **argv)
{
  CLI::App app{"Mixed finite element convergence studies for the vector Laplacian and Stokes "
               "in vorticity-velocity-pressure form",
               "feec-dirichlet"};
  app.require_subcommand(1);
  std::string config_path;
  bool check = false;
  std::string out_dir = ".";
  CLI::App *run = app.add_subcommand("run", "Run a refinement study described by a JSON file");
  run->add_option("--config", config_path, "Study configuration (JSON)")->required();
  run->add_flag("--check", check, "Compare fitted rates against the expected bounds");
  run->add_option("--out-dir", out_dir, "Directory for CSV and SVG output");
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kExitConfig;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in)
  {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return kExitIo;
  }
  std::stringstream text;
  text << in.rdbuf();
  StudyConfig config;
  try
  {
    config = parse_config(text.str());
    config.check = config.check || check;
    validate(config);
  }
  catch (const ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run_study_cli(config, out_dir, std::cout, std::cerr);
}

}  // namespace feec
