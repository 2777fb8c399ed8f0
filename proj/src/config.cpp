// SPDX-License-Identifier: Apache-2.0

#include "feec/config.hpp"

#include <set>

#include <json.hpp>

#include "feec/error.hpp"

namespace feec
{

using nlohmann::json;

namespace
{

[[noreturn]] void bad_key(const std::string &key, const std::string &why)
{
  throw ConfigError("config key '" + key + "': " + why);
}

const json &required(const json &doc, const std::string &key)
{
  if (!doc.contains(key))
  {
    bad_key(key, "missing");
  }
  return doc.at(key);
}

std::string get_string(const json &v, const std::string &key)
{
  if (!v.is_string())
  {
    bad_key(key, "expected a string");
  }
  return v.get<std::string>();
}

int get_int(const json &v, const std::string &key)
{
  if (!v.is_number_integer())
  {
    bad_key(key, "expected an integer");
  }
  return v.get<int>();
}

double get_number(const json &v, const std::string &key)
{
  if (!v.is_number())
  {
    bad_key(key, "expected a number");
  }
  return v.get<double>();
}

bool get_bool(const json &v, const std::string &key)
{
  if (!v.is_boolean())
  {
    bad_key(key, "expected true or false");
  }
  return v.get<bool>();
}

bool is_error_column(const std::string &name)
{
  for (auto c : kErrorColumns)
  {
    if (c == name)
    {
      return true;
    }
  }
  return false;
}

}  // namespace

StudyParams StudyConfig::study_params() const
{
  StudyParams p;
  p.problem = problem;
  p.case_id = case_id;
  p.k = k;
  p.levels = levels();
  p.solver_tol = solver_tol;
  p.naive_vorticity = naive_vorticity;
  return p;
}

void validate(const StudyConfig &c)
{
  if (c.k != 1 && c.k != 2)
  {
    bad_key("k", "must be 1 or 2");
  }
  if (c.base_n < 1)
  {
    bad_key("base_n", "must be positive");
  }
  if (c.case_id == CaseId::I && c.base_n % 3 != 0)
  {
    bad_key("base_n", "case I needs a multiple of 3 (the void is [1/3, 2/3]^3)");
  }
  if (c.case_id == CaseId::III && c.problem != Problem::stokes_vvp)
  {
    bad_key("problem", "case III is a stokes_vvp problem");
  }
  if (c.problem == Problem::stokes_vvp && c.case_id != CaseId::III)
  {
    bad_key("case", "stokes_vvp has manufactured data for case III only");
  }
  if (c.n_levels < 1 || c.n_levels > 8)
  {
    bad_key("n_levels", "must be in 1..8");
  }
  if (c.check && c.n_levels < 2)
  {
    bad_key("n_levels", "check mode needs at least two levels");
  }
  if (!(c.solver_tol > 0.0 && c.solver_tol < 1.0))
  {
    bad_key("solver_tol", "must be in (0, 1)");
  }
}

StudyConfig parse_config(std::string_view text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object())
  {
    throw ConfigError("config must be a JSON object");
  }
  static const std::set<std::string> known = {
      "problem", "case",  "k",             "base_n", "n_levels",      "solver_tol",
      "vorticity_space", "check", "record_timing", "output", "expected_rates"};
  for (const auto &item : doc.items())
  {
    if (!known.count(item.key()))
    {
      bad_key(item.key(), "unknown key");
    }
  }

  StudyConfig c;
  const std::string problem = get_string(required(doc, "problem"), "problem");
  if (problem == "hodge_laplace")
  {
    c.problem = Problem::hodge_laplace;
  }
  else if (problem == "stokes_vvp")
  {
    c.problem = Problem::stokes_vvp;
  }
  else
  {
    bad_key("problem", "expected hodge_laplace or stokes_vvp, got '" + problem + "'");
  }
  const json &case_value = required(doc, "case");
  const std::string case_text =
      case_value.is_number_integer() ? std::to_string(case_value.get<int>())
                                     : get_string(case_value, "case");
  try
  {
    c.case_id = parse_case_id(case_text);
  }
  catch (const ConfigError &)
  {
    bad_key("case", "expected I, II or III, got '" + case_text + "'");
  }
  c.k = get_int(required(doc, "k"), "k");
  c.base_n = get_int(required(doc, "base_n"), "base_n");
  if (doc.contains("n_levels"))
  {
    c.n_levels = get_int(doc["n_levels"], "n_levels");
  }
  if (doc.contains("solver_tol"))
  {
    c.solver_tol = get_number(doc["solver_tol"], "solver_tol");
  }
  if (doc.contains("vorticity_space"))
  {
    const std::string v = get_string(doc["vorticity_space"], "vorticity_space");
    if (v == "sigma_h0")
    {
      c.naive_vorticity = true;
    }
    else if (v != "sigma_h")
    {
      bad_key("vorticity_space", "expected sigma_h or sigma_h0, got '" + v + "'");
    }
  }
  if (doc.contains("check"))
  {
    c.check = get_bool(doc["check"], "check");
  }
  if (doc.contains("record_timing"))
  {
    c.record_timing = get_bool(doc["record_timing"], "record_timing");
  }
  c.csv_name = std::string(to_string(c.problem)) + "_case" + std::string(to_string(c.case_id)) +
               "_k" + std::to_string(c.k) + ".csv";
  if (doc.contains("output"))
  {
    const json &out = doc["output"];
    if (!out.is_object())
    {
      bad_key("output", "expected an object");
    }
    for (const auto &item : out.items())
    {
      const std::string key = "output." + item.key();
      if (item.key() == "csv")
      {
        c.csv_name = get_string(item.value(), key);
      }
      else if (item.key() == "svg")
      {
        c.svg_name = get_string(item.value(), key);
      }
      else
      {
        bad_key(key, "unknown key");
      }
      if (get_string(item.value(), key).empty())
      {
        bad_key(key, "empty file name");
      }
    }
  }
  if (doc.contains("expected_rates"))
  {
    const json &rates = doc["expected_rates"];
    if (!rates.is_object())
    {
      bad_key("expected_rates", "expected an object");
    }
    for (const auto &item : rates.items())
    {
      const std::string key = "expected_rates." + item.key();
      if (!is_error_column(item.key()))
      {
        bad_key(key, "not an error column");
      }
      RateBound b;
      if (item.value().is_number())
      {
        b.min = item.value().get<double>();
      }
      else if (item.value().is_object())
      {
        for (const auto &lim : item.value().items())
        {
          if (lim.key() == "min")
          {
            b.min = get_number(lim.value(), key + ".min");
          }
          else if (lim.key() == "max")
          {
            b.max = get_number(lim.value(), key + ".max");
          }
          else
          {
            bad_key(key + "." + lim.key(), "unknown key");
          }
        }
      }
      else
      {
        bad_key(key, "expected a number or {\"min\", \"max\"}");
      }
      c.rate_overrides[item.key()] = b;
    }
  }
  validate(c);
  return c;
}

std::map<std::string, RateBound> expected_rate_bounds(const StudyConfig &c)
{
  // Predicted: mu k - 1/2; u 5/6 at k = 1 and k at k = 2 (convex domains only);
  // div u k; p k - 1/2. Margins absorb preasymptotic behaviour on desk-scale meshes.
  std::map<std::string, RateBound> b;
  const double k = c.k;
  const bool convex = c.case_id != CaseId::I;
  const double u_min = c.k == 1 ? 0.70 : k - 0.2;
  if (c.problem == Problem::hodge_laplace)
  {
    b["err_mu_l2"] = {k - 0.65, c.k == 1 && convex ? std::optional<double>(1.2) : std::nullopt};
    if (convex)
    {
      b["err_u_l2"] = {u_min, std::nullopt};
      if (c.k == 1)
      {
        b["err_div_u_l2"] = {0.85, std::nullopt};
      }
    }
  }
  else
  {
    b["err_p_l2"] = {k - 0.65, std::nullopt};
    b["err_u_l2"] = {u_min, std::nullopt};
  }
  for (const auto &[name, bound] : c.rate_overrides)
  {
    b[name] = bound;
  }
  return b;
}

}  // namespace feec
