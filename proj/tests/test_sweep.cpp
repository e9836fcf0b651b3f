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

#include <doctest.h>

#include <sstream>

#include "nebcert/errors.hpp"
#include "nebcert/sweep.hpp"

using namespace nebcert;
using nlohmann::json;

namespace {

SweepSpec gamma_spec(std::vector<double> values) {
  SweepSpec s;
  s.parameter = SweepParameter::Gamma;
  s.values = std::move(values);
  s.table_kind = TableKind::FourState;
  s.sim.threads = 1;
  return s;
}

std::string csv_of(const SweepReport& r) {
  std::ostringstream out;
  write_sweep_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const SweepSpec s = sweep_spec_from_json(json::parse(R"({
    "parameter": "beta",
    "values": [0, 0.2, 0.35],
    "table": "six",
    "eb_bound": 0.001,
    "bound": {"restarts": 8},
    "key_rate": {"f": 1.2},
    "sim": {"mu": 0.3, "nu": 0.02, "efficiency": 0.5, "gamma": 0.1, "mode": "montecarlo", "seed": 9,
            "trials_per_setting": 1000, "exclusive": false}
  })"));
  CHECK(s.parameter == SweepParameter::Beta);
  CHECK(s.values.size() == 3);
  CHECK(s.table_kind == TableKind::SixState);
  CHECK(s.eb_bound_override.value() == 0.001);
  CHECK(s.bound_options.restarts == 8);
  CHECK(s.ec_inefficiency == 1.2);
  CHECK(s.sim.intensities.mu == 0.3);
  CHECK(s.sim.detector.efficiency == 0.5);
  CHECK(s.sim.channel.gamma == 0.1);
  CHECK(s.sim.mode == SimMode::MonteCarlo);
  CHECK(s.sim.seed == 9);
  CHECK_FALSE(s.sim.detector.exclusive_coincidence);

  const SweepSpec back = sweep_spec_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));
}

TEST_CASE("config errors name the field") {
  auto message = [](const char* text) -> std::string {
    try {
      sweep_spec_from_json(json::parse(text));
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(R"({"parameter": "theta"})").find("parameter") != std::string::npos);
  CHECK(message(R"({"values": [0.5, 0.2]})").find("sorted") != std::string::npos);
  CHECK(message(R"({"values": [0.5, 1.2]})").find("values[1]") != std::string::npos);
  CHECK(message(R"({"parameter": "beta", "values": [-1]})").find("values[0]") != std::string::npos);
  CHECK(message(R"({"sim": {"mu": 0.1, "nu": 0.2}})").find("sim") != std::string::npos);
  CHECK(message(R"({"sim": {"efficency": 0.5}})").find("efficency") != std::string::npos);
  CHECK(message(R"({"sim": {"mu": "high"}})").find("sim.mu") != std::string::npos);
  CHECK(message(R"({"table": 6})").find("table") != std::string::npos);
  CHECK(message(R"({"states": "measured"})").find("states") != std::string::npos);
  CHECK(message(R"({"colour": 1})").find("colour") != std::string::npos);
  CHECK(message(R"([1, 2])").find("object") != std::string::npos);
  CHECK_THROWS_AS(load_sweep_spec("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("empty sweep gives an empty report") {
  const SweepReport r = run_sweep(gamma_spec({}));
  CHECK(r.rows.empty());
  CHECK(csv_of(r) == "param,payoff_lower,std_error,eb_bound,certified,payoff_nodecoy\n");
}

TEST_CASE("gamma sweep certifies until the channel breaks entanglement") {
  std::vector<double> gammas;
  for (int k = 0; k <= 10; ++k) gammas.push_back(k / 10.0);
  const SweepReport r = run_sweep(gamma_spec(gammas));
  REQUIRE(r.rows.size() == 11);
  CHECK_FALSE(r.has_key_rate);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const SweepRow& row = r.rows[i];
    CHECK(row.param == gammas[i]);
    CHECK(row.certified == (row.payoff_lower > row.eb_bound));
    if (i > 0) CHECK(row.payoff_lower < r.rows[i - 1].payoff_lower);
  }
  CHECK(r.rows.front().certified);
  CHECK_FALSE(r.rows.back().certified);
}

TEST_CASE("beta sweep adds a key-rate column and decreases") {
  SweepSpec s = gamma_spec({0.0, 0.2, 0.3, 0.35, 0.5});
  s.parameter = SweepParameter::Beta;
  s.table_kind = TableKind::SixState;
  const SweepReport r = run_sweep(s);
  CHECK(r.has_key_rate);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].payoff_lower < r.rows[i - 1].payoff_lower);
  for (const SweepRow& row : r.rows) CHECK(row.key_rate.has_value());
  CHECK(csv_of(r).rfind("param,payoff_lower,std_error,eb_bound,certified,payoff_nodecoy,key_rate\n", 0) == 0);
}

TEST_CASE("configured bound replaces the computed one") {
  SweepSpec s = gamma_spec({0.0});
  s.eb_bound_override = 1.0;
  const SweepReport r = run_sweep(s);
  CHECK(r.rows[0].eb_bound == 1.0);
  CHECK_FALSE(r.rows[0].certified);
  CHECK(sweep_sidecar(s, r).at("eb_bound").at("source") == "config");
}

TEST_CASE("sweep output is byte identical across runs") {
  SweepSpec s = gamma_spec({0.0, 0.5, 1.0});
  s.sim.mode = SimMode::MonteCarlo;
  s.sim.trials_per_setting = 3000;
  s.sim.seed = 4;
  const std::string a = csv_of(run_sweep(s));
  s.sim.threads = 2;
  const std::string b = csv_of(run_sweep(s));
  CHECK(a == b);
}

TEST_CASE("sidecar records config and environment") {
  const SweepSpec s = gamma_spec({0.0});
  const json j = sweep_sidecar(s, run_sweep(s));
  CHECK(j.at("config").at("table") == "four");
  CHECK(j.at("environment").contains("compiler"));
  CHECK(j.at("eb_bound").at("source") == "computed");
}

TEST_CASE("theory curve") {
  const auto rows = report_theory_curve(TableKind::SixState, SweepParameter::Gamma, {0.0, 0.5, 1.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ideal_payoff == doctest::Approx(0.5));
  CHECK(rows[1].ideal_payoff == doctest::Approx(0.25));
  CHECK(std::abs(rows[2].ideal_payoff) < 1e-12);
  for (const auto& r : rows) CHECK(r.rsmdi_payoff <= r.ideal_payoff);

  const auto four = report_theory_curve(TableKind::FourState, SweepParameter::Gamma, {0.0});
  CHECK(four[0].ideal_payoff == doctest::Approx(0.25));

  std::ostringstream out;
  write_theory_csv(out, SweepParameter::Beta, {});
  CHECK(out.str() == "beta,ideal_payoff,rsmdi_payoff\n");
  CHECK_THROWS_AS(report_theory_curve(TableKind::Custom, SweepParameter::Gamma, {0.0}), ConfigError);
}

TEST_CASE("parsers for enumerations") {
  CHECK(parse_table_kind("four") == TableKind::FourState);
  CHECK(parse_sim_mode("analytic") == SimMode::Analytic);
  CHECK_THROWS_AS(parse_table_kind("eight"), ConfigError);
  CHECK_THROWS_AS(parse_sim_mode("exact"), ConfigError);
  CHECK(to_string(SweepParameter::Beta) == "beta");
}
