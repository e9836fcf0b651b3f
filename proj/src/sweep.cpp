// Copyright 2026 The nebcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nebcert/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <mutex>
#include <thread>

#include "nebcert/errors.hpp"
#include "nebcert/io.hpp"

namespace nebcert {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type (" + j.at(key).dump() + ")");
  }
}

SimConfig sim_from_json(const json& j) {
  const std::string where = "sim";
  if (!j.is_object()) throw ConfigError("sim: expected an object");
  reject_unknown(j,
                 {"mu", "nu", "omega", "efficiency", "dark_prob", "window_fraction", "beta", "gamma", "overlap",
                  "exclusive", "trials_per_setting", "seed", "mode", "phase_grid", "threads"},
                 where);
  SimConfig s;
  read_field(j, "mu", s.intensities.mu, where);
  read_field(j, "nu", s.intensities.nu, where);
  read_field(j, "omega", s.intensities.omega, where);
  read_field(j, "efficiency", s.detector.efficiency, where);
  read_field(j, "dark_prob", s.detector.dark_prob, where);
  read_field(j, "window_fraction", s.detector.window_fraction, where);
  read_field(j, "beta", s.detector.noise_beta, where);
  read_field(j, "overlap", s.detector.overlap, where);
  read_field(j, "exclusive", s.detector.exclusive_coincidence, where);
  read_field(j, "gamma", s.channel.gamma, where);
  read_field(j, "trials_per_setting", s.trials_per_setting, where);
  read_field(j, "seed", s.seed, where);
  read_field(j, "phase_grid", s.phase_grid, where);
  read_field(j, "threads", s.threads, where);
  if (j.contains("mode")) {
    std::string mode;
    read_field(j, "mode", mode, where);
    s.mode = parse_sim_mode(mode);
  }
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("sim: " + std::string(e.what()));
  }
  return s;
}

json sim_to_json(const SimConfig& s) {
  return {{"mu", s.intensities.mu},
          {"nu", s.intensities.nu},
          {"omega", s.intensities.omega},
          {"efficiency", s.detector.efficiency},
          {"dark_prob", s.detector.dark_prob},
          {"window_fraction", s.detector.window_fraction},
          {"beta", s.detector.noise_beta},
          {"overlap", s.detector.overlap},
          {"exclusive", s.detector.exclusive_coincidence},
          {"gamma", s.channel.gamma},
          {"trials_per_setting", s.trials_per_setting},
          {"seed", s.seed},
          {"mode", s.mode == SimMode::Analytic ? "analytic" : "montecarlo"},
          {"phase_grid", s.phase_grid}};
}

SimConfig at_point(SimConfig sim, SweepParameter parameter, double value) {
  if (parameter == SweepParameter::Gamma) {
    sim.channel.gamma = value;
  } else {
    sim.detector.noise_beta = value;
  }
  return sim;
}

bool has_key_basis_settings(const PayoffTable& table) {
  for (Basis b : {Basis::Z, Basis::X})
    for (int xb = 0; xb < 2; ++xb)
      for (int yb = 0; yb < 2; ++yb)
        if (table.payoff(StateLabel{b, xb}, StateLabel{b, yb}) == 0.0) return false;
  return true;
}

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t count = std::min<std::size_t>(threads > 0 ? static_cast<unsigned>(threads) : hw, n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string to_string(SweepParameter p) { return p == SweepParameter::Gamma ? "gamma" : "beta"; }

SweepParameter parse_sweep_parameter(const std::string& s) {
  if (s == "gamma") return SweepParameter::Gamma;
  if (s == "beta") return SweepParameter::Beta;
  throw ConfigError("parameter must be 'gamma' or 'beta', got '" + s + "'");
}

TableKind parse_table_kind(const std::string& s) {
  if (s == "six" || s == "six_state") return TableKind::SixState;
  if (s == "four" || s == "four_state") return TableKind::FourState;
  throw ConfigError("table must be 'six' or 'four', got '" + s + "'");
}

SimMode parse_sim_mode(const std::string& s) {
  if (s == "analytic") return SimMode::Analytic;
  if (s == "montecarlo" || s == "monte-carlo") return SimMode::MonteCarlo;
  throw ConfigError("mode must be 'analytic' or 'montecarlo', got '" + s + "'");
}

void SweepSpec::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) throw ConfigError("values[" + std::to_string(i) + "]: not finite");
    if (parameter == SweepParameter::Gamma && (v < 0.0 || v > 1.0)) {
      throw ConfigError("values[" + std::to_string(i) + "]: gamma must lie in [0, 1]");
    }
    if (parameter == SweepParameter::Beta && v < 0.0) {
      throw ConfigError("values[" + std::to_string(i) + "]: beta must be >= 0");
    }
    if (i > 0 && !(values[i - 1] < v)) throw ConfigError("values must be sorted ascending without repeats");
  }
  if (table_kind == TableKind::Custom && !custom_table.is_object()) {
    throw ConfigError("table: custom table must be an object");
  }
  if (states_source == StatesSource::Tomography && tomography_file.empty()) {
    throw ConfigError("states: tomography source needs a file");
  }
  if (eb_bound_override && !std::isfinite(*eb_bound_override)) throw ConfigError("eb_bound: not finite");
  if (bound_options.restarts < 1) throw ConfigError("bound.restarts must be >= 1");
  if (!(ec_inefficiency >= 1.0)) throw ConfigError("key_rate.f must be >= 1");
  try {
    sim.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("sim: " + std::string(e.what()));
  }
}

SweepSpec sweep_spec_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(j, {"parameter", "values", "table", "states", "eb_bound", "bound", "key_rate", "sim"}, "config");
  SweepSpec spec;
  if (j.contains("parameter")) {
    std::string p;
    read_field(j, "parameter", p, "config");
    spec.parameter = parse_sweep_parameter(p);
  }
  read_field(j, "values", spec.values, "config");
  if (j.contains("table")) {
    const json& t = j.at("table");
    if (t.is_string()) {
      spec.table_kind = parse_table_kind(t.get<std::string>());
    } else if (t.is_object()) {
      spec.table_kind = TableKind::Custom;
      spec.custom_table = t;
    } else {
      throw ConfigError("config.table: expected 'six', 'four' or a custom table object");
    }
  }
  if (j.contains("states")) {
    const json& s = j.at("states");
    if (s.is_string() && s.get<std::string>() == "ideal") {
      spec.states_source = StatesSource::Ideal;
    } else if (s.is_object() && s.contains("tomography") && s.at("tomography").is_string()) {
      reject_unknown(s, {"tomography"}, "config.states");
      spec.states_source = StatesSource::Tomography;
      std::filesystem::path p = s.at("tomography").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      spec.tomography_file = p.string();
    } else {
      throw ConfigError("config.states: expected \"ideal\" or {\"tomography\": \"file.csv\"}");
    }
  }
  if (j.contains("eb_bound")) {
    double b = 0.0;
    read_field(j, "eb_bound", b, "config");
    spec.eb_bound_override = b;
  }
  if (j.contains("bound")) {
    const json& b = j.at("bound");
    reject_unknown(b, {"restarts", "tol", "max_iterations", "seed"}, "config.bound");
    read_field(b, "restarts", spec.bound_options.restarts, "config.bound");
    read_field(b, "tol", spec.bound_options.tol, "config.bound");
    read_field(b, "max_iterations", spec.bound_options.max_iterations, "config.bound");
    read_field(b, "seed", spec.bound_options.seed, "config.bound");
  }
  if (j.contains("key_rate")) {
    const json& k = j.at("key_rate");
    reject_unknown(k, {"f"}, "config.key_rate");
    read_field(k, "f", spec.ec_inefficiency, "config.key_rate");
  }
  if (j.contains("sim")) spec.sim = sim_from_json(j.at("sim"));
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return sweep_spec_from_json(j, std::filesystem::path(path).parent_path().string());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json to_json(const SweepSpec& spec) {
  json j;
  j["parameter"] = to_string(spec.parameter);
  j["values"] = spec.values;
  switch (spec.table_kind) {
    case TableKind::SixState:
      j["table"] = "six";
      break;
    case TableKind::FourState:
      j["table"] = "four";
      break;
    case TableKind::Custom:
      j["table"] = spec.custom_table;
      break;
  }
  j["states"] = spec.states_source == StatesSource::Ideal ? json("ideal") : json{{"tomography", spec.tomography_file}};
  if (spec.eb_bound_override) j["eb_bound"] = *spec.eb_bound_override;
  j["bound"] = {{"restarts", spec.bound_options.restarts},
                {"tol", spec.bound_options.tol},
                {"max_iterations", spec.bound_options.max_iterations},
                {"seed", spec.bound_options.seed}};
  j["key_rate"] = {{"f", spec.ec_inefficiency}};
  j["sim"] = sim_to_json(spec.sim);
  return j;
}

PayoffTable sweep_table(const SweepSpec& spec) {
  std::optional<TomographySet> states;
  if (spec.states_source == StatesSource::Tomography) states = read_tomography_file(spec.tomography_file);
  if (spec.table_kind == TableKind::Custom) return payoff_table_from_json(spec.custom_table, states ? &*states : nullptr);
  if (states) return table_from_tomography(spec.table_kind, *states);
  return spec.table_kind == TableKind::SixState ? ideal_six_state_table() : ideal_four_state_table();
}

SweepReport run_sweep(const SweepSpec& spec) {
  spec.validate();
  const PayoffTable table = sweep_table(spec);

  SweepReport report;
  if (spec.eb_bound_override) {
    report.bound.value = *spec.eb_bound_override;
    report.bound.restarts = 0;
  } else {
    report.bound = eb_bound(table, spec.bound_options);
  }
  report.has_key_rate = spec.parameter == SweepParameter::Beta && has_key_basis_settings(table);
  report.rows.resize(spec.values.size());

  // Points share the machine; each simulation then runs single-threaded.
  const int point_threads = spec.sim.threads;
  parallel_for(spec.values.size(), point_threads, [&](std::size_t i) {
    SimConfig sim = at_point(spec.sim, spec.parameter, spec.values[i]);
    sim.threads = 1;
    SweepRow row;
    row.param = spec.values[i];
    row.gains = simulate_gains(sim, table);
    const CertificationVerdict v =
        certify(row.gains, sim.intensities, table, report.bound, {.nominal_trials = sim.trials_per_setting});
    row.payoff_lower = v.payoff_lower;
    row.std_error = v.std_error;
    row.eb_bound = v.eb_bound;
    row.certified = v.certified;
    row.payoff_nodecoy = raw_gain_payoff(row.gains, table);
    if (report.has_key_rate) {
      const YieldBounds bounds = y11_bounds(row.gains, sim.intensities);
      row.key_rate = key_rate(key_rate_inputs(row.gains, bounds, sim.intensities, spec.ec_inefficiency));
    }
    report.rows[i] = std::move(row);
  });
  return report;
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  out << "param,payoff_lower,std_error,eb_bound,certified,payoff_nodecoy";
  if (report.has_key_rate) out << ",key_rate";
  out << '\n';
  for (const SweepRow& r : report.rows) {
    out << format_double(r.param) << ',' << format_double(r.payoff_lower) << ',' << format_double(r.std_error) << ','
        << format_double(r.eb_bound) << ',' << (r.certified ? "true" : "false") << ','
        << format_double(r.payoff_nodecoy);
    if (report.has_key_rate) out << ',' << format_double(r.key_rate.value_or(0.0));
    out << '\n';
  }
}

json sweep_sidecar(const SweepSpec& spec, const SweepReport& report) {
  json env;
  env["nebcert_version"] = "1.0.0";
#if defined(__clang__)
  env["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = std::string("gcc ") + __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  env["cplusplus"] = static_cast<long>(__cplusplus);
  env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
  json bound = to_json(report.bound);
  bound["source"] = spec.eb_bound_override ? "config" : "computed";
  return {{"config", to_json(spec)}, {"eb_bound", bound}, {"points", report.rows.size()}, {"environment", env}};
}

std::vector<TheoryRow> report_theory_curve(TableKind kind, SweepParameter parameter, const std::vector<double>& values,
                                           const SimConfig& base) {
  if (kind == TableKind::Custom) throw ConfigError("theory curves need a built-in table");
  const PayoffTable table = kind == TableKind::SixState ? ideal_six_state_table() : ideal_four_state_table();
  std::vector<TheoryRow> rows(values.size());
  parallel_for(values.size(), base.threads, [&](std::size_t i) {
    SimConfig sim = at_point(base, parameter, values[i]);
    sim.mode = SimMode::Analytic;
    sim.threads = 1;
    sim.validate();
    const GainRecord gains = simulate_gains(sim, table);
    rows[i].param = values[i];
    rows[i].ideal_payoff = ideal_payoff(sim.channel.qubit_channel(), table);
    rows[i].rsmdi_payoff = payoff_lower_bound(y11_bounds(gains, sim.intensities), table);
  });
  return rows;
}

void write_theory_csv(std::ostream& out, SweepParameter parameter, const std::vector<TheoryRow>& rows) {
  out << to_string(parameter) << ",ideal_payoff,rsmdi_payoff\n";
  for (const TheoryRow& r : rows)
    out << format_double(r.param) << ',' << format_double(r.ideal_payoff) << ',' << format_double(r.rsmdi_payoff)
        << '\n';
}

}  // namespace nebcert
