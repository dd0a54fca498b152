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

#include "gmdd/run_config.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gmdd/error.hpp"
#include "gmdd/metric.hpp"
#include "gmdd/parallel.hpp"

namespace gmdd {

namespace {

using Clock = std::chrono::steady_clock;

std::string render(const Json &j, OutputFormat fmt) {
  return fmt == OutputFormat::Json ? j.dump(2) + "\n" : json_to_field_csv(j);
}

void append_unique(std::vector<std::string> &v, const std::vector<std::string> &more) {
  for (const auto &m : more) {
    if (std::find(v.begin(), v.end(), m) == v.end())
      v.push_back(m);
  }
}

void require_nonempty(const std::string &value, const char *what) {
  if (value.empty())
    throw ValidationError(std::string(what) + " is required");
}

void require_nonempty(const std::vector<std::string> &value, const char *what) {
  if (value.empty())
    throw ValidationError(std::string(what) + " is required");
}

std::vector<std::string> dataset_diagnostics(const Dataset &data) {
  std::vector<std::string> out;
  if (data.dropped_rows > 0) {
    out.push_back("dropped " + std::to_string(data.dropped_rows) +
                  " row(s) with missing or non-numeric values");
    for (const auto &note : data.drop_notes)
      out.push_back("  " + note);
  }
  return out;
}

Vector sum_columns(const Dataset &data, const std::vector<std::string> &names) {
  Vector s = Vector::Zero(data.rows());
  for (const auto &n : names)
    s += data.column(n);
  return s;
}

Matrix with_intercept(const Matrix &m, bool intercept) {
  if (!intercept)
    return m;
  Matrix out(m.rows(), m.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(m.cols()) = m;
  return out;
}

struct RegressionSetup {
  ModelSpec model;
  Vector y;
  Matrix z;
};

RegressionSetup regression_setup(const Dataset &data, const RegressionRequest &r) {
  require_nonempty(r.y_col, "y column");
  require_nonempty(r.x_cols, "x columns");
  RegressionSetup s;
  s.y = data.column(r.y_col);
  const Matrix x = data.columns(r.x_cols);
  s.model.x = with_intercept(x, r.intercept);
  if (r.iv_cols.empty()) {
    s.model.kind = ModelKind::Ols;
    s.z = x;
  } else {
    s.model.kind = ModelKind::Iv;
    s.z = data.columns(r.iv_cols);
    s.model.instruments = with_intercept(s.z, r.intercept);
  }
  if (r.standardize_z)
    s.z = standardize_columns(s.z);
  return s;
}

std::vector<std::string> regression_columns(const RegressionRequest &r) {
  std::vector<std::string> cols{r.y_col};
  append_unique(cols, r.x_cols);
  append_unique(cols, r.iv_cols);
  return cols;
}

// ---- JSON configuration ----

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

class Config {
public:
  Config(const Json &j, const std::set<std::string> &allowed) {
    if (!j.is_object())
      throw ValidationError("run configuration must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = normalize_key(it.key());
      if (!allowed.count(key))
        throw ValidationError("unknown configuration key '" + it.key() + "'");
      if (!values_.emplace(key, it.value()).second)
        throw ValidationError("configuration key '" + it.key() + "' given twice");
    }
  }

  bool has(const std::string &k) const { return values_.count(k) > 0; }

  std::string str(const std::string &k, const std::string &def) const {
    if (!has(k))
      return def;
    const Json &v = values_.at(k);
    if (!v.is_string())
      throw ValidationError("'" + k + "' must be a string");
    return v.get<std::string>();
  }

  std::optional<std::string> opt_str(const std::string &k) const {
    if (!has(k))
      return std::nullopt;
    return str(k, "");
  }

  std::vector<std::string> names(const std::string &k) const {
    if (!has(k))
      return {};
    const Json &v = values_.at(k);
    if (v.is_string())
      return split_names(v.get<std::string>());
    if (v.is_array()) {
      std::vector<std::string> out;
      for (const auto &e : v) {
        if (!e.is_string())
          throw ValidationError("'" + k + "' must list strings");
        out.push_back(e.get<std::string>());
      }
      return out;
    }
    throw ValidationError("'" + k + "' must be a string or an array of strings");
  }

  double real(const std::string &k, double def) const {
    if (!has(k))
      return def;
    const Json &v = values_.at(k);
    if (!v.is_number())
      throw ValidationError("'" + k + "' must be a number");
    return v.get<double>();
  }

  std::vector<double> reals(const std::string &k) const {
    if (!has(k))
      return {};
    const Json &v = values_.at(k);
    if (v.is_number())
      return {v.get<double>()};
    if (v.is_string())
      return parse_grid(v.get<std::string>());
    if (v.is_array()) {
      std::vector<double> out;
      for (const auto &e : v) {
        if (!e.is_number())
          throw ValidationError("'" + k + "' must list numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
    throw ValidationError("'" + k + "' must be a number, a list or a grid string");
  }

  std::uint64_t count(const std::string &k, std::uint64_t def) const {
    if (!has(k))
      return def;
    const Json &v = values_.at(k);
    if (v.is_number_unsigned())
      return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ValidationError("'" + k + "' must be a nonnegative integer");
  }

  std::vector<std::size_t> counts(const std::string &k) const {
    std::vector<std::size_t> out;
    for (double v : reals(k)) {
      if (!(v >= 0.0) || v != std::floor(v) || v > 1e12)
        throw ValidationError("'" + k + "' must hold nonnegative integers");
      out.push_back(static_cast<std::size_t>(v));
    }
    return out;
  }

  bool flag(const std::string &k, bool def) const {
    if (!has(k))
      return def;
    const Json &v = values_.at(k);
    if (!v.is_boolean())
      throw ValidationError("'" + k + "' must be true or false");
    return v.get<bool>();
  }

private:
  std::map<std::string, Json> values_;
};

std::string data_path(const Config &c) {
  const std::string path = c.str("data", "");
  require_nonempty(path, "data path");
  return path;
}

const std::set<std::string> kCommon{"command", "format", "out", "threads"};

std::set<std::string> keys_for(const std::string &command) {
  std::set<std::string> k = kCommon;
  auto add = [&](std::initializer_list<const char *> more) {
    for (const char *m : more)
      k.insert(m);
  };
  const auto regression = {"data", "y_col", "x_cols", "iv_cols", "intercept", "standardize_z"};
  if (command == "gmdd") {
    add({"data", "u_col", "z_cols", "kernel", "estimator"});
  } else if (command == "mi") {
    add({"data", "u_col", "z_cols", "h_col", "aug_cols", "kernel", "iota", "threshold", "center"});
  } else if (command == "spec") {
    add(regression);
    add({"kernel", "mode", "delta_b", "aug_cols", "h_col", "iota", "threshold",
         "center", "ignore_estimation_effect"});
  } else if (command == "spec_boot") {
    add(regression);
    add({"family", "B", "seed", "multiplier"});
  } else if (command == "simulate" || command == "bench") {
    add({"dgp", "n", "n_grid", "reps", "gamma", "gamma_grid", "tests", "levels", "B", "seed",
         "iota", "threshold", "kernel", "delta_b", "augment", "multiplier"});
  } else {
    throw ValidationError("unknown command '" + command + "'");
  }
  return k;
}

RegressionRequest regression_from(const Config &c) {
  RegressionRequest r;
  r.y_col = c.str("y_col", "");
  r.x_cols = c.names("x_cols");
  r.iv_cols = c.names("iv_cols");
  r.intercept = c.flag("intercept", false);
  r.standardize_z = c.flag("standardize_z", false);
  return r;
}

SimConfig sim_from(const Config &c, bool bench) {
  SimConfig s;
  s.dgp = parse_dgp(c.str("dgp", "LS1"));
  if (c.has("n") && c.has("n_grid"))
    throw ValidationError("give either n or n_grid, not both");
  if (c.has("n_grid"))
    s.n_grid = c.counts("n_grid");
  else if (c.has("n"))
    s.n_grid = c.counts("n");
  else
    s.n_grid = bench ? std::vector<std::size_t>{200, 400, 600, 800} : std::vector<std::size_t>{400};
  if (c.has("gamma") && c.has("gamma_grid"))
    throw ValidationError("give either gamma or gamma_grid, not both");
  if (c.has("gamma_grid"))
    s.gamma_grid = c.reals("gamma_grid");
  else if (c.has("gamma"))
    s.gamma_grid = c.reals("gamma");
  if (bench && s.gamma_grid.size() != 1)
    throw ValidationError("bench takes a single gamma");
  s.reps = static_cast<std::size_t>(c.count("reps", bench ? 100 : 1000));
  if (c.has("levels"))
    s.levels = c.reals("levels");
  std::vector<std::string> tests = c.names("tests");
  if (tests.empty())
    tests = bench ? std::vector<std::string>{"chi2", "gauss", "mdd", "dl", "esc6"}
                  : std::vector<std::string>{"chi2"};
  s.tests.clear();
  for (const auto &t : tests)
    s.tests.push_back(parse_sim_test(t));
  const std::uint64_t B = c.count("B", 499);
  if (B < 1 || B > 1000000)
    throw ValidationError("B must lie in [1, 1000000]");
  s.B = static_cast<int>(B);
  s.seed = c.count("seed", 42);
  s.iota = c.real("iota", kDefaultIota);
  if (c.has("threshold"))
    s.threshold = parse_threshold_mode(c.str("threshold", ""));
  s.kernel = c.str("kernel", "gauss");
  s.delta_b = c.real("delta_b", 0.5);
  s.augment = c.flag("augment", true);
  s.multiplier = parse_multiplier(c.str("multiplier", "mammen"));
  validate(s);
  return s;
}

void write_file(const std::string &path, const std::string &payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << payload;
  out.close();
  if (!out)
    throw IoError("failed writing '" + path + "'");
}

} // namespace

std::vector<double> parse_grid(const std::string &text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    std::vector<double> out;
    for (const auto &item : split_names(text)) {
      double v = 0.0;
      if (!parse_double(item, v))
        throw ValidationError("invalid number '" + item + "'");
      out.push_back(v);
    }
    if (out.empty())
      throw ValidationError("empty list");
    return out;
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos)
    throw ValidationError("grid must have the form start:stop:step");
  double a = 0.0, b = 0.0, step = 0.0;
  if (!parse_double(text.substr(0, first), a) ||
      !parse_double(text.substr(first + 1, second - first - 1), b) ||
      !parse_double(text.substr(second + 1), step))
    throw ValidationError("invalid grid '" + text + "'");
  if (!(step > 0.0) || b < a)
    throw ValidationError("grid needs start <= stop and a positive step");
  const double span = (b - a) / step;
  if (span > 1e6)
    throw ValidationError("grid has too many points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    // Round away representation noise such as 0.30000000000000004.
    const double v = a + static_cast<double>(i) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

std::vector<std::string> required_columns(const MetricRequest &r) {
  std::vector<std::string> cols{r.u_col};
  append_unique(cols, r.z_cols);
  return cols;
}

std::vector<std::string> required_columns(const MiRequest &r) {
  std::vector<std::string> cols{r.u_col};
  append_unique(cols, r.z_cols);
  if (r.h_col)
    append_unique(cols, {*r.h_col});
  append_unique(cols, r.aug_cols);
  return cols;
}

std::vector<std::string> required_columns(const SpecRequest &r) {
  auto cols = regression_columns(r.reg);
  append_unique(cols, r.aug_cols);
  if (r.h_col)
    append_unique(cols, {*r.h_col});
  return cols;
}

std::vector<std::string> required_columns(const BootRequest &r) {
  return regression_columns(r.reg);
}

RunOutput run_metric(const Dataset &data, const MetricRequest &r, OutputFormat fmt) {
  require_nonempty(r.u_col, "u column");
  require_nonempty(r.z_cols, "z columns");
  const Vector u = data.column(r.u_col);
  const Matrix z = data.columns(r.z_cols);
  const KernelSpec k = KernelSpec::parse(r.kernel, r.z_cols.size());
  const double value = gmdd_estimate(parse_estimator(r.estimator), u, z, k);
  RunOutput out;
  out.statistic = value;
  Json j;
  j["gmdd"] = value;
  j["n"] = data.rows();
  out.payload = render(j, fmt);
  out.diagnostics = dataset_diagnostics(data);
  return out;
}

RunOutput run_mi(const Dataset &data, const MiRequest &r, OutputFormat fmt) {
  require_nonempty(r.u_col, "u column");
  require_nonempty(r.z_cols, "z columns");
  const Vector u = data.column(r.u_col);
  const Matrix z = data.columns(r.z_cols);
  VSpec vs;
  vs.center_v = r.center;
  vs.h.push_back(r.h_col ? data.column(*r.h_col) : default_h(z));
  for (const auto &c : r.aug_cols)
    vs.q.push_back(data.column(c));
  const KernelSpec k = KernelSpec::parse(r.kernel, r.z_cols.size());
  const MiTestResult res = mi_test(u, z, vs, k, r.iota, r.threshold);
  RunOutput out;
  out.statistic = res.statistic;
  out.p_value = res.p_value;
  out.df = res.df;
  out.payload = render(to_json(res), fmt);
  out.diagnostics = dataset_diagnostics(data);
  return out;
}

RunOutput run_spec(const Dataset &data, const SpecRequest &r, OutputFormat fmt) {
  const RegressionSetup s = regression_setup(data, r.reg);
  SpecVSpec vs;
  vs.center_v = r.center;
  if (r.mode == "scalar") {
    vs.mode = SpecMode::Scalar;
    if (!r.delta_b.empty())
      vs.delta_b = Eigen::Map<const Vector>(r.delta_b.data(),
                                            static_cast<Eigen::Index>(r.delta_b.size()));
    if (!r.aug_cols.empty())
      vs.aug = sum_columns(data, r.aug_cols);
    if (r.h_col)
      throw ValidationError("h column applies to pair mode only");
  } else if (r.mode == "pair") {
    vs.mode = SpecMode::Pair;
    if (!r.delta_b.empty() || !r.aug_cols.empty())
      throw ValidationError("delta_b and augmentations apply to scalar mode only");
    vs.h = r.h_col ? data.column(*r.h_col) : default_h(s.z);
  } else {
    throw ValidationError("unknown mode '" + r.mode + "' (expected scalar or pair)");
  }
  const PreparedModel model(s.model);
  const KernelSpec k = KernelSpec::parse(r.kernel, static_cast<std::size_t>(s.z.cols()));
  SpecTestOptions opt;
  opt.iota = r.iota;
  opt.threshold = r.threshold;
  opt.ignore_estimation_effect = r.ignore_estimation_effect;
  const SpecTestResult res = spec_test(model, s.y, s.z, vs, k, opt);
  RunOutput out;
  out.statistic = res.statistic;
  out.p_value = res.p_value;
  out.df = res.df;
  out.payload = render(to_json(res), fmt);
  out.diagnostics = dataset_diagnostics(data);
  return out;
}

RunOutput run_spec_boot(const Dataset &data, const BootRequest &r, OutputFormat fmt) {
  const auto start = Clock::now();
  const RegressionSetup s = regression_setup(data, r.reg);
  BootstrapConfig cfg;
  cfg.B = r.B;
  cfg.seed = r.seed;
  cfg.multiplier = parse_multiplier(r.multiplier);
  const IcmFamily family = parse_icm_family(r.family);
  const PreparedModel model(s.model);
  const auto res = wild_bootstrap(model, s.y, s.z, {family}, cfg);
  RunOutput out;
  out.statistic = res[0].statistic;
  out.p_value = res[0].p_value;
  Json j;
  j["family"] = icm_family_name(family);
  j["statistic"] = res[0].statistic;
  j["p_value"] = res[0].p_value;
  j["B"] = r.B;
  j["seed"] = r.seed;
  j["elapsed"] = std::chrono::duration<double>(Clock::now() - start).count();
  out.payload = render(j, fmt);
  out.diagnostics = dataset_diagnostics(data);
  return out;
}

RunOutput run_simulate(const SimConfig &cfg, OutputFormat fmt) {
  const SimResult res = run_size_experiment(cfg);
  RunOutput out;
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    write_sim_csv(res.rows, os);
    out.payload = os.str();
  } else {
    out.payload = sim_rows_json(res.rows).dump(2) + "\n";
  }
  if (res.failures > 0)
    out.diagnostics.push_back(std::to_string(res.failures) +
                              " failed test replication(s) were excluded");
  return out;
}

RunOutput run_bench(const SimConfig &cfg, OutputFormat fmt) {
  const SimResult res = run_timing_benchmark(cfg);
  RunOutput out;
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    write_timing_csv(res.timing, os);
    out.payload = os.str();
  } else {
    out.payload = timing_rows_json(res.timing).dump(2) + "\n";
  }
  if (res.failures > 0)
    out.diagnostics.push_back(std::to_string(res.failures) +
                              " failed test replication(s) were excluded");
  return out;
}

RunOutput run_config(const std::string &config_json) {
  Json j;
  try {
    j = Json::parse(config_json);
  } catch (const Json::parse_error &e) {
    throw ValidationError(std::string("invalid JSON configuration: ") + e.what());
  }
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
    throw ValidationError("configuration needs a string 'command'");
  const std::string command = normalize_key(j["command"].get<std::string>());
  const Config c(j, keys_for(command));

  const bool simulation = command == "simulate" || command == "bench";
  const std::string format = c.str("format", simulation ? "csv" : "json");
  OutputFormat fmt;
  if (format == "json")
    fmt = OutputFormat::Json;
  else if (format == "csv")
    fmt = OutputFormat::Csv;
  else
    throw ValidationError("unknown format '" + format + "' (expected json or csv)");
  if (c.has("threads")) {
    const std::uint64_t t = c.count("threads", 0);
    if (t < 1 || t > 4096)
      throw ValidationError("threads must lie in [1, 4096]");
    set_threads(static_cast<int>(t));
  }

  RunOutput out;
  if (command == "gmdd") {
    MetricRequest r;
    r.u_col = c.str("u_col", "");
    r.z_cols = c.names("z_cols");
    r.kernel = c.str("kernel", r.kernel);
    r.estimator = c.str("estimator", r.estimator);
    parse_estimator(r.estimator);
    KernelSpec::parse(r.kernel, std::max<std::size_t>(1, r.z_cols.size()));
    require_nonempty(r.u_col, "u column");
    require_nonempty(r.z_cols, "z columns");
    out = run_metric(load_csv(data_path(c), required_columns(r)), r, fmt);
  } else if (command == "mi") {
    MiRequest r;
    r.u_col = c.str("u_col", "");
    r.z_cols = c.names("z_cols");
    r.h_col = c.opt_str("h_col");
    r.aug_cols = c.names("aug_cols");
    r.kernel = c.str("kernel", r.kernel);
    r.iota = c.real("iota", r.iota);
    r.threshold = parse_threshold_mode(c.str("threshold", "absolute"));
    r.center = c.flag("center", true);
    KernelSpec::parse(r.kernel, std::max<std::size_t>(1, r.z_cols.size()));
    require_nonempty(r.u_col, "u column");
    require_nonempty(r.z_cols, "z columns");
    out = run_mi(load_csv(data_path(c), required_columns(r)), r, fmt);
  } else if (command == "spec") {
    SpecRequest r;
    r.reg = regression_from(c);
    r.kernel = c.str("kernel", r.kernel);
    r.mode = c.str("mode", r.mode);
    r.delta_b = c.reals("delta_b");
    r.aug_cols = c.names("aug_cols");
    r.h_col = c.opt_str("h_col");
    r.iota = c.real("iota", r.iota);
    r.threshold = parse_threshold_mode(c.str("threshold", "relative"));
    r.center = c.flag("center", true);
    r.ignore_estimation_effect = c.flag("ignore_estimation_effect", false);
    require_nonempty(r.reg.y_col, "y column");
    require_nonempty(r.reg.x_cols, "x columns");
    out = run_spec(load_csv(data_path(c), required_columns(r)), r, fmt);
  } else if (command == "spec_boot") {
    BootRequest r;
    r.reg = regression_from(c);
    r.family = c.str("family", r.family);
    const std::uint64_t B = c.count("B", 499);
    if (B < 1 || B > 1000000)
      throw ValidationError("B must lie in [1, 1000000]");
    r.B = static_cast<int>(B);
    r.seed = c.count("seed", 0);
    r.multiplier = c.str("multiplier", r.multiplier);
    parse_icm_family(r.family);
    parse_multiplier(r.multiplier);
    require_nonempty(r.reg.y_col, "y column");
    require_nonempty(r.reg.x_cols, "x columns");
    out = run_spec_boot(load_csv(data_path(c), required_columns(r)), r, fmt);
  } else if (command == "simulate") {
    out = run_simulate(sim_from(c, false), fmt);
  } else {
    out = run_bench(sim_from(c, true), fmt);
  }

  if (c.has("out")) {
    write_file(c.str("out", ""), out.payload);
  }
  return out;
}

} // namespace gmdd
