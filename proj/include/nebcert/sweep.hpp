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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nebcert/decoy.hpp"
#include "nebcert/ebbound.hpp"
#include "nebcert/game.hpp"
#include "nebcert/optics.hpp"
#include "nebcert/qkd.hpp"

namespace nebcert {

enum class SweepParameter { Gamma, Beta };
enum class StatesSource { Ideal, Tomography };

std::string to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string& s);
TableKind parse_table_kind(const std::string& s);
SimMode parse_sim_mode(const std::string& s);

/// One batch experiment: a parameter scanned over `values` with everything
/// else fixed by `sim`.
struct SweepSpec {
  SweepParameter parameter = SweepParameter::Gamma;
  std::vector<double> values;
  TableKind table_kind = TableKind::SixState;
  /// Custom payoff table in the io.hpp JSON form, used when table_kind is Custom.
  nlohmann::json custom_table;
  StatesSource states_source = StatesSource::Ideal;
  std::string tomography_file;
  SimConfig sim;
  /// Externally supplied entanglement-breaking bound; replaces the computed one.
  std::optional<double> eb_bound_override;
  EBBoundOptions bound_options;
  double ec_inefficiency = kDefaultEcInefficiency;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses the structured config. Unknown keys are rejected. Relative
/// tomography paths resolve against `base_dir`.
SweepSpec sweep_spec_from_json(const nlohmann::json& j, const std::string& base_dir = "");
SweepSpec load_sweep_spec(const std::string& path);
nlohmann::json to_json(const SweepSpec& spec);

/// Payoff table the sweep evaluates: labels from the table kind, states from
/// the configured source.
PayoffTable sweep_table(const SweepSpec& spec);

struct SweepRow {
  double param = 0.0;
  double payoff_lower = 0.0;
  double std_error = 0.0;
  double eb_bound = 0.0;
  bool certified = false;
  double payoff_nodecoy = 0.0;
  std::optional<double> key_rate;
  GainRecord gains{IntensitySet{}};
};

struct SweepReport {
  EBBoundResult bound;
  bool has_key_rate = false;
  std::vector<SweepRow> rows;
};

/// For each value: simulate gains, bound the single-photon yields, and
/// compare the payoff lower bound with the bound computed once for the state
/// set. β sweeps on tables with Z and X settings also report the key rate.
/// Points run concurrently; rows keep the order of `values`.
SweepReport run_sweep(const SweepSpec& spec);

/// Columns: param,payoff_lower,std_error,eb_bound,certified,payoff_nodecoy[,key_rate].
void write_sweep_csv(std::ostream& out, const SweepReport& report);

/// Full config, bound details and build fingerprint for the CSV sidecar.
nlohmann::json sweep_sidecar(const SweepSpec& spec, const SweepReport& report);

struct TheoryRow {
  double param = 0.0;
  /// Single-photon, lossless payoff with ideal states.
  double ideal_payoff = 0.0;
  /// Decoy-state payoff lower bound from analytic (noise-free) gains.
  double rsmdi_payoff = 0.0;
};

/// Ideal curve and the analytic simulation curve side by side. `base`
/// provides intensities and detector settings; the scanned parameter
/// overrides gamma or beta.
std::vector<TheoryRow> report_theory_curve(TableKind kind, SweepParameter parameter, const std::vector<double>& values,
                                           const SimConfig& base = {});

void write_theory_csv(std::ostream& out, SweepParameter parameter, const std::vector<TheoryRow>& rows);

}  // namespace nebcert
