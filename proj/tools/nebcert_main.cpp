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

// nebcert: batch runner for non-entanglement-breaking channel certification.
//
//   nebcert certify --config sweep.json --out results/ [--mode analytic|montecarlo] [--seed N]
//   nebcert theory  --table six|four --param gamma|beta --values 0,0.1,0.2 [--config sweep.json]
//   nebcert bound   --states tomography.csv --table six|four
//   nebcert analyze --gains gains.csv --table six|four [--states tomography.csv]
//
// Exit codes: 0 success, 2 config or usage error, 3 inconsistent statistics, 1 other.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nebcert/decoy.hpp"
#include "nebcert/ebbound.hpp"
#include "nebcert/errors.hpp"
#include "nebcert/io.hpp"
#include "nebcert/sweep.hpp"

namespace fs = std::filesystem;
using namespace nebcert;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStatistics = 3;

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--values: cannot parse '" + item + "'");
    }
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

int run_certify(const std::string& config, const std::string& out_dir, const std::string& mode,
                const std::optional<std::uint64_t>& seed) {
  SweepSpec spec = load_sweep_spec(config);
  if (!mode.empty()) spec.sim.mode = parse_sim_mode(mode);
  if (seed) spec.sim.seed = *seed;
  const SweepReport report = run_sweep(spec);

  fs::create_directories(fs::path(out_dir) / "gains");
  std::ostringstream csv;
  write_sweep_csv(csv, report);
  write_file(fs::path(out_dir) / "sweep.csv", csv.str());
  write_file(fs::path(out_dir) / "sweep.json", sweep_sidecar(spec, report).dump(2) + "\n");
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    std::ostringstream g;
    write_gain_csv(g, report.rows[i].gains);
    write_file(fs::path(out_dir) / "gains" / ("point_" + std::to_string(i) + ".csv"), g.str());
  }
  std::cout << csv.str();
  return 0;
}

int run_theory(const std::string& table, const std::string& param, const std::string& values,
               const std::string& config, const std::string& out) {
  SimConfig base;
  if (!config.empty()) base = load_sweep_spec(config).sim;
  const auto rows = report_theory_curve(parse_table_kind(table), parse_sweep_parameter(param), parse_values(values), base);
  std::ostringstream csv;
  write_theory_csv(csv, parse_sweep_parameter(param), rows);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out, csv.str());
  }
  return 0;
}

int run_bound(const std::string& states, const std::string& table, int restarts) {
  const TomographySet set = read_tomography_file(states);
  const PayoffTable t = table_from_tomography(parse_table_kind(table), set);
  EBBoundOptions opt;
  opt.restarts = restarts;
  std::cout << to_json(eb_bound(t, opt)).dump(2) << '\n';
  return 0;
}

int run_analyze(const std::string& gains_path, const std::string& table, const std::string& states,
                std::int64_t nominal_trials) {
  std::ifstream in(gains_path);
  if (!in) throw ConfigError("cannot open gain file '" + gains_path + "'");
  const GainRecord gains = read_gain_csv(in);
  const TableKind kind = parse_table_kind(table);
  const PayoffTable t = states.empty()
                            ? (kind == TableKind::SixState ? ideal_six_state_table() : ideal_four_state_table())
                            : table_from_tomography(kind, read_tomography_file(states));
  const EBBoundResult bound = eb_bound(t);
  const CertificationVerdict v = certify(gains, gains.intensities(), t, bound, {.nominal_trials = nominal_trials});
  nlohmann::json j{{"payoff_lower", v.payoff_lower},
                   {"std_error", v.std_error},
                   {"eb_bound", v.eb_bound},
                   {"certified", v.certified},
                   {"payoff_nodecoy", raw_gain_payoff(gains, t)}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify non-entanglement-breaking qubit channels with weak coherent pulses"};
  app.require_subcommand(1);

  std::string config, out_dir, mode;
  std::uint64_t seed_value = 0;
  auto* certify_cmd = app.add_subcommand("certify", "Run a gamma or beta sweep and write sweep.csv + sweep.json");
  certify_cmd->add_option("--config", config, "Sweep config (JSON)")->required();
  certify_cmd->add_option("--out", out_dir, "Output directory")->required();
  certify_cmd->add_option("--mode", mode, "analytic | montecarlo (overrides the config)");
  auto* seed_opt = certify_cmd->add_option("--seed", seed_value, "Simulation seed (overrides the config)");

  std::string table = "six", param = "gamma", values, theory_config, theory_out;
  auto* theory_cmd = app.add_subcommand("theory", "Ideal and analytic payoff curves");
  theory_cmd->add_option("--table", table, "six | four");
  theory_cmd->add_option("--param", param, "gamma | beta");
  theory_cmd->add_option("--values", values, "Comma-separated parameter values")->required();
  theory_cmd->add_option("--config", theory_config, "Take intensities and detector settings from a sweep config");
  theory_cmd->add_option("--out", theory_out, "Write CSV here instead of stdout");

  std::string states, bound_table = "six";
  int restarts = EBBoundOptions{}.restarts;
  auto* bound_cmd = app.add_subcommand("bound", "Entanglement-breaking bound for tomographic states");
  bound_cmd->add_option("--states", states, "Tomography CSV")->required();
  bound_cmd->add_option("--table", bound_table, "six | four");
  bound_cmd->add_option("--restarts", restarts, "Optimizer restarts");

  std::string gains_path, analyze_table = "six", analyze_states;
  std::int64_t nominal_trials = 0;
  auto* analyze_cmd = app.add_subcommand("analyze", "Certify from a measured gain CSV");
  analyze_cmd->add_option("--gains", gains_path, "Gain CSV")->required();
  analyze_cmd->add_option("--table", analyze_table, "six | four");
  analyze_cmd->add_option("--states", analyze_states, "Tomography CSV (ideal states if omitted)");
  analyze_cmd->add_option("--nominal-trials", nominal_trials, "Sample size for rows without trial counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (certify_cmd->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = seed_value;
      return run_certify(config, out_dir, mode, seed);
    }
    if (theory_cmd->parsed()) return run_theory(table, param, values, theory_config, theory_out);
    if (bound_cmd->parsed()) return run_bound(states, bound_table, restarts);
    if (analyze_cmd->parsed()) return run_analyze(gains_path, analyze_table, analyze_states, nominal_trials);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InconsistentStatisticsError& e) {
    std::cerr << "inconsistent statistics: " << e.what() << '\n';
    return kExitStatistics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
