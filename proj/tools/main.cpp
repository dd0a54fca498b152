/*
 * Copyright (C) 2026 The gmdd-test Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Every subcommand is translated into a JSON run
// configuration and executed through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gmdd/gmdd.h"

namespace {

using Json = nlohmann::ordered_json;

enum class Kind { Str, Real, Uint, Flag, NegFlag };

struct Field {
  std::string flag; // without leading dashes
  std::string key;
  Kind kind;
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Field> fields;
  bool takes_seed = false;
  bool takes_config = false;
};

const std::vector<Field> kRegression{
    {"data", "data", Kind::Str, "input CSV file"},
    {"y-col", "y_col", Kind::Str, "response column"},
    {"x-cols", "x_cols", Kind::Str, "regressor columns, comma separated"},
    {"iv-cols", "iv_cols", Kind::Str, "instrument columns (just-identified IV)"},
    {"intercept", "intercept", Kind::Flag, "prepend a constant regressor"},
    {"standardize-z", "standardize_z", Kind::Flag, "scale kernel arguments to unit variance"},
};

const std::vector<Field> kSimulation{
    {"dgp", "dgp", Kind::Str, "LS1..LS5 or MI1..MI4"},
    {"n", "n", Kind::Str, "sample size(s), comma separated"},
    {"n-grid", "n_grid", Kind::Str, "sample sizes, comma separated"},
    {"reps", "reps", Kind::Uint, "Monte Carlo replications"},
    {"gamma", "gamma", Kind::Str, "misspecification strength"},
    {"gamma-grid", "gamma_grid", Kind::Str, "start:stop:step or comma list"},
    {"tests", "tests", Kind::Str, "chi2,chi2-noest,gauss,mdd,dl,esc6"},
    {"levels", "levels", Kind::Str, "nominal levels, comma separated"},
    {"B", "B", Kind::Uint, "bootstrap replicates"},
    {"iota", "iota", Kind::Real, "threshold exponent, c_n = n^(-1/2 + iota)"},
    {"threshold", "threshold", Kind::Str,
     "absolute or relative eigenvalue cut (default: absolute for MI, relative for LS)"},
    {"kernel", "kernel", Kind::Str, "kernel of the chi2 test"},
    {"delta-b", "delta_b", Kind::Real, "entries of delta_b for regression designs"},
    {"no-augment", "augment", Kind::NegFlag, "do not augment V"},
    {"multiplier", "multiplier", Kind::Str, "mammen or rademacher"},
};

std::vector<Field> join(std::vector<Field> a, const std::vector<Field> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Command> commands() {
  return {
      {"gmdd",
       "estimate the GMDD dependence metric",
       {{"data", "data", Kind::Str, "input CSV file"},
        {"u-col", "u_col", Kind::Str, "column of U"},
        {"z-cols", "z_cols", Kind::Str, "conditioning columns, comma separated"},
        {"kernel", "kernel", Kind::Str,
         "gauss|mdd|srb:<alpha>|laplace:<sigma>|uniform|triangular|logistic|cauchy"},
        {"estimator", "estimator", Kind::Str, "known|plugin|ucentered"}}},
      {"mi",
       "chi-square test of conditional mean independence",
       {{"data", "data", Kind::Str, "input CSV file"},
        {"u-col", "u_col", Kind::Str, "column of U (mean zero under the null)"},
        {"z-cols", "z_cols", Kind::Str, "conditioning columns, comma separated"},
        {"h-col", "h_col", Kind::Str, "precomputed h(Z) column"},
        {"aug-cols", "aug_cols", Kind::Str, "augmentation columns"},
        {"kernel", "kernel", Kind::Str, "kernel specification"},
        {"iota", "iota", Kind::Real, "threshold exponent"},
        {"threshold", "threshold", Kind::Str, "absolute (default) or relative eigenvalue cut"},
        {"no-center", "center", Kind::NegFlag, "do not center V"}}},
      {"spec",
       "chi-square specification test of a regression model",
       join(kRegression,
            {{"kernel", "kernel", Kind::Str, "kernel specification"},
             {"mode", "mode", Kind::Str, "scalar or pair"},
             {"delta-b", "delta_b", Kind::Str, "delta_b entries, comma separated"},
             {"aug-cols", "aug_cols", Kind::Str, "columns added to V"},
             {"h-col", "h_col", Kind::Str, "h(Z) column for pair mode"},
             {"iota", "iota", Kind::Real, "threshold exponent"},
             {"threshold", "threshold", Kind::Str, "relative (default) or absolute"},
             {"no-center", "center", Kind::NegFlag, "do not center V"},
             {"ignore-estimation-effect", "ignore_estimation_effect", Kind::Flag,
              "drop the estimation-effect terms (diagnostic)"}})},
      {"spec-boot",
       "wild-bootstrap ICM specification test",
       join(kRegression, {{"family", "family", Kind::Str, "gauss|mdd|dl|esc6"},
                          {"B", "B", Kind::Uint, "bootstrap replicates"},
                          {"multiplier", "multiplier", Kind::Str, "mammen or rademacher"}}),
       true},
      {"simulate", "Monte Carlo size and power experiments", kSimulation, true, true},
      {"bench", "running-time benchmark", kSimulation, true, true},
  };
}

int exit_code(gmdd_status s) {
  switch (s) {
  case GMDD_OK:
    return 0;
  case GMDD_ERR_INVALID:
  case GMDD_ERR_IO:
    return 1;
  default:
    return 2;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Kernel-based tests of conditional mean independence and model specification"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string seed_text, out_path, format;
  int threads = 0;
  app.add_option("--seed", seed_text, "random seed (unsigned 64-bit)");
  app.add_option("--threads", threads, "worker threads (default: GMDD_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "write the result to this file instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  const auto cmds = commands();
  std::vector<CLI::App *> subs;
  std::vector<std::map<std::string, std::string>> values(cmds.size());
  std::vector<std::map<std::string, bool>> flags(cmds.size());
  std::vector<std::string> config_paths(cmds.size());
  for (std::size_t c = 0; c < cmds.size(); ++c) {
    CLI::App *sub = app.add_subcommand(cmds[c].name, cmds[c].help);
    for (const auto &f : cmds[c].fields) {
      if (f.kind == Kind::Flag || f.kind == Kind::NegFlag)
        sub->add_flag("--" + f.flag, flags[c][f.flag], f.help);
      else
        sub->add_option("--" + f.flag, values[c][f.flag], f.help);
    }
    if (cmds[c].takes_config)
      sub->add_option("--config", config_paths[c], "JSON file with the same keys as the flags")
          ->check(CLI::ExistingFile);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  std::size_t chosen = 0;
  while (chosen < subs.size() && !subs[chosen]->parsed())
    ++chosen;
  const Command &cmd = cmds[chosen];
  CLI::App *sub = subs[chosen];

  Json config = Json::object();
  try {
    if (!config_paths[chosen].empty()) {
      std::ifstream in(config_paths[chosen]);
      config = Json::parse(in);
      if (!config.is_object())
        throw std::runtime_error("configuration file must hold a JSON object");
      config.erase("command");
    }
    config["command"] = cmd.name;
    for (const auto &f : cmd.fields) {
      if (sub->count("--" + f.flag) == 0)
        continue;
      const std::string &v = values[chosen][f.flag];
      switch (f.kind) {
      case Kind::Str:
        config[f.key] = v;
        break;
      case Kind::Real: {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size())
          throw std::invalid_argument(v);
        config[f.key] = d;
        break;
      }
      case Kind::Uint: {
        if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
          throw std::invalid_argument(v);
        config[f.key] = std::stoull(v);
        break;
      }
      case Kind::Flag:
        config[f.key] = true;
        break;
      case Kind::NegFlag:
        config[f.key] = false;
        break;
      }
    }
    if (!seed_text.empty()) {
      if (!cmd.takes_seed) {
        std::cerr << "note: --seed has no effect on '" << cmd.name << "'\n";
      } else {
        if (seed_text.find_first_not_of("0123456789") != std::string::npos)
          throw std::invalid_argument(seed_text);
        config["seed"] = std::stoull(seed_text);
      }
    }
    if (!format.empty())
      config["format"] = format;
    if (!out_path.empty())
      config["out"] = out_path;
  } catch (const std::exception &e) {
    std::cerr << "error: invalid argument: " << e.what() << "\n";
    return 1;
  }

  if (threads > 0)
    gmdd_set_threads(threads);

  gmdd_result *result = nullptr;
  const gmdd_status status = gmdd_run(config.dump().c_str(), &result);
  if (status != GMDD_OK) {
    std::cerr << "error: " << gmdd_last_error() << "\n";
    return exit_code(status);
  }
  for (std::size_t i = 0; i < gmdd_result_diagnostic_count(result); ++i)
    std::cerr << gmdd_result_diagnostic(result, i) << "\n";
  if (out_path.empty())
    std::fputs(gmdd_result_payload(result), stdout);
  gmdd_result_free(result);
  return 0;
}
