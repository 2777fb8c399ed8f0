// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "feec/cli.hpp"
#include "feec/config.hpp"
#include "feec/error.hpp"
#include "feec/svg_plot.hpp"

namespace feec
{
namespace
{

namespace fs = std::filesystem;

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("feec_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(ParseConfig, DefaultsApplied)
{
  const StudyConfig c =
      parse_config(R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2})");
  EXPECT_EQ(c.problem, Problem::hodge_laplace);
  EXPECT_EQ(c.case_id, CaseId::II);
  EXPECT_EQ(c.n_levels, 3);
  EXPECT_DOUBLE_EQ(c.solver_tol, 1e-10);
  EXPECT_FALSE(c.naive_vorticity);
  EXPECT_FALSE(c.check);
  EXPECT_FALSE(c.record_timing);
  EXPECT_EQ(c.csv_name, "hodge_laplace_caseII_k1.csv");
  EXPECT_FALSE(c.svg_name.has_value());
  EXPECT_EQ(c.levels(), (std::vector<int>{2, 4, 8}));
}

TEST(ParseConfig, FullDocument)
{
  const StudyConfig c = parse_config(R"({
    "problem": "stokes_vvp", "case": "III", "k": 2, "base_n": 2, "n_levels": 2,
    "solver_tol": 1e-9, "check": true, "record_timing": true,
    "output": {"csv": "s.csv", "svg": "s.svg"},
    "expected_rates": {"err_p_l2": 1.0, "err_u_l2": {"min": 1.5, "max": 3.0}}
  })");
  EXPECT_EQ(c.problem, Problem::stokes_vvp);
  EXPECT_EQ(c.k, 2);
  EXPECT_TRUE(c.check);
  EXPECT_EQ(c.csv_name, "s.csv");
  EXPECT_EQ(c.svg_name, "s.svg");
  const auto bounds = expected_rate_bounds(c);
  EXPECT_DOUBLE_EQ(*bounds.at("err_p_l2").min, 1.0);
  EXPECT_DOUBLE_EQ(*bounds.at("err_u_l2").max, 3.0);
}

TEST(ParseConfig, Rejections)
{
  const char *bad[] = {
      R"({"problem": "hodge_laplace", "case": "I", "k": 1, "base_n": 4})",
      R"({"problem": "hodge_laplace", "case": "III", "k": 1, "base_n": 2})",
      R"({"problem": "stokes_vvp", "case": "II", "k": 1, "base_n": 2})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 3, "base_n": 2})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 0})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2, "colour": 1})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2, "n_levels": 9})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2, "solver_tol": 2})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2, "n_levels": 1,
          "check": true})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2,
          "vorticity_space": "sigma"})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1})",
      R"({"problem": "hodge_laplace", "case": "II", "k": "one", "base_n": 2})",
      R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2)",
      R"([1, 2])",
  };
  for (const char *text : bad)
  {
    EXPECT_THROW(parse_config(text), ConfigError) << text;
  }
}

TEST(ParseConfig, ErrorNamesKey)
{
  try
  {
    parse_config(R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2, "colour": 1})");
    FAIL();
  }
  catch (const ConfigError &e)
  {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(ExpectedRates, DefaultBounds)
{
  StudyConfig c = parse_config(R"({"problem": "hodge_laplace", "case": "II", "k": 1,
                                   "base_n": 2})");
  auto b = expected_rate_bounds(c);
  EXPECT_NEAR(*b.at("err_mu_l2").min, 0.35, 1e-12);
  EXPECT_TRUE(b.count("err_u_l2"));
  EXPECT_TRUE(b.count("err_div_u_l2"));
  c = parse_config(R"({"problem": "stokes_vvp", "case": "III", "k": 1, "base_n": 2})");
  b = expected_rate_bounds(c);
  EXPECT_TRUE(b.count("err_p_l2"));
}

TEST(CheckRates, MissingQuantityFails)
{
  RateTable t;
  t.rates.push_back({"err_u_l2", 1.0, 1.0, {}});
  std::map<std::string, RateBound> bounds;
  bounds["err_u_l2"] = {0.9, std::nullopt};
  bounds["err_p_l2"] = {0.5, std::nullopt};
  const auto checks = check_rates(t, bounds);
  ASSERT_EQ(checks.size(), 2u);
  for (const auto &c : checks)
  {
    EXPECT_EQ(c.passed, c.name == "err_u_l2");
  }
  bounds["err_u_l2"].max = 0.95;
  EXPECT_FALSE(check_rates(t, bounds)[1].passed);
}

class RunStudy : public ::testing::Test
{
protected:
  static StudyConfig case_ii()
  {
    StudyConfig c = parse_config(R"({"problem": "hodge_laplace", "case": "II", "k": 1,
                                     "base_n": 2, "check": true,
                                     "output": {"csv": "r.csv", "svg": "r.svg"}})");
    return c;
  }
};

TEST_F(RunStudy, CheckModePasses)
{
  const fs::path dir = scratch_dir("pass");
  std::ostringstream out, err;
  EXPECT_EQ(run_study_cli(case_ii(), dir, out, err), kExitOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("PASS err_u_l2"), std::string::npos);
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
  ASSERT_TRUE(fs::exists(dir / "r.csv"));
  ASSERT_TRUE(fs::exists(dir / "r.svg"));

  const std::string svg = slurp(dir / "r.svg");
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("err_u_l2"), std::string::npos);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '<'), std::count(svg.begin(), svg.end(), '>'));

  // Byte-identical rerun.
  const std::string first = slurp(dir / "r.csv");
  std::ostringstream out2, err2;
  ASSERT_EQ(run_study_cli(case_ii(), dir, out2, err2), kExitOk);
  EXPECT_EQ(slurp(dir / "r.csv"), first);
  fs::remove_all(dir);
}

TEST_F(RunStudy, TightBoundFailsWithRateExit)
{
  StudyConfig c = case_ii();
  c.n_levels = 2;
  c.rate_overrides["err_u_l2"] = {5.0, std::nullopt};
  const fs::path dir = scratch_dir("fail");
  std::ostringstream out, err;
  EXPECT_EQ(run_study_cli(c, dir, out, err), kExitRateCheck);
  EXPECT_NE(out.str().find("FAIL err_u_l2"), std::string::npos);
  fs::remove_all(dir);
}

TEST_F(RunStudy, UnwritableDirectoryGivesIoExit)
{
  const fs::path blocker = scratch_dir("blocker");
  std::ofstream(blocker) << "a file, not a directory";
  StudyConfig c = case_ii();
  c.n_levels = 2;
  std::ostringstream out, err;
  EXPECT_EQ(run_study_cli(c, blocker / "sub", out, err), kExitIo);
  fs::remove(blocker);
}

TEST_F(RunStudy, NaiveVariantGivesSolverExit)
{
  StudyConfig c = parse_config(R"({"problem": "hodge_laplace", "case": "I", "k": 1,
                                   "base_n": 3, "n_levels": 1,
                                   "vorticity_space": "sigma_h0"})");
  const fs::path dir = scratch_dir("naive");
  std::ostringstream out, err;
  EXPECT_EQ(run_study_cli(c, dir, out, err), kExitSolver);
  EXPECT_NE(err.str().find("solver"), std::string::npos);
  fs::remove_all(dir);
}

TEST_F(RunStudy, InvalidConfigGivesConfigExit)
{
  StudyConfig c = case_ii();
  c.k = 5;
  std::ostringstream out, err;
  EXPECT_EQ(run_study_cli(c, scratch_dir("invalid"), out, err), kExitConfig);
}

TEST(RunCli, ArgumentHandling)
{
  const fs::path dir = scratch_dir("args");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json")
      << R"({"problem": "hodge_laplace", "case": "II", "k": 1, "base_n": 2, "n_levels": 3})";
  const std::string cfg = (dir / "c.json").string();
  const std::string out = (dir / "out").string();

  std::vector<std::string> ok = {"feec-dirichlet", "run", "--config", cfg, "--check",
                                 "--out-dir", out};
  std::vector<char *> argv;
  for (auto &s : ok)
  {
    argv.push_back(s.data());
  }
  EXPECT_EQ(run_cli(static_cast<int>(argv.size()), argv.data()), kExitOk);
  EXPECT_TRUE(fs::exists(fs::path(out) / "hodge_laplace_caseII_k1.csv"));

  std::vector<std::string> missing = {"feec-dirichlet", "run", "--config",
                                      (dir / "nope.json").string()};
  argv.clear();
  for (auto &s : missing)
  {
    argv.push_back(s.data());
  }
  EXPECT_EQ(run_cli(static_cast<int>(argv.size()), argv.data()), kExitIo);

  std::vector<std::string> no_config = {"feec-dirichlet", "run"};
  argv.clear();
  for (auto &s : no_config)
  {
    argv.push_back(s.data());
  }
  EXPECT_EQ(run_cli(static_cast<int>(argv.size()), argv.data()), kExitConfig);
  fs::remove_all(dir);
}

TEST(SvgPlot, GuidesAndSeries)
{
  std::vector<ErrorRecord> recs(2);
  recs[0].h_max = 0.5;
  recs[1].h_max = 0.25;
  recs[0].err_u_l2 = 0.1;
  recs[1].err_u_l2 = 0.05;
  recs[0].err_mu_l2 = recs[1].err_mu_l2 = 0.2;
  const LogLogPlot plot = convergence_plot(recs, 2, "t");
  EXPECT_EQ(plot.guides.size(), 2u);
  EXPECT_DOUBLE_EQ(plot.guides[0].slope, 1.5);
  EXPECT_DOUBLE_EQ(plot.guides[1].slope, 2.0);
  std::ostringstream os;
  write_svg(os, plot);
  EXPECT_NE(os.str().find("polyline"), std::string::npos);
}

}  // namespace
}  // namespace feec
