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
#include <map>
#include <string>

#include <json.hpp>

#include "nebcert/channels.hpp"
#include "nebcert/decoy.hpp"
#include "nebcert/ebbound.hpp"
#include "nebcert/game.hpp"

namespace nebcert {

/// Reconstructed question states. When the file carries no `role` column the
/// same states serve both sides.
struct TomographySet {
  std::map<StateLabel, DensityMatrix> xi;
  std::map<StateLabel, DensityMatrix> psi;
};

/// CSV with header `basis,bit,exp_x,exp_y,exp_z`, optionally preceded by a
/// `role` column holding `xi` or `psi`. Blank lines and `#` comments are
/// skipped. Errors carry the line number.
TomographySet read_tomography_csv(std::istream& in);
TomographySet read_tomography_file(const std::string& path);

/// Builds a built-in table from tomography states; every label of the table
/// must be present on both sides.
PayoffTable table_from_tomography(TableKind kind, const TomographySet& states);

/// Columns: x_basis,x_bit,y_basis,y_bit,alpha_xi,alpha_psi,trials,clicks,gain.
/// Values are written with 17 significant digits so the record reads back
/// bit-identically.
void write_gain_csv(std::ostream& out, const GainRecord& gains);
/// Accepts the eight-column form too, in which case gain = clicks / trials.
/// The three distinct intensities found in the file become mu > nu > omega.
GainRecord read_gain_csv(std::istream& in);

/// 2x2 complex matrix from [[a, b], [c, d]] with entries either numbers or
/// [re, im] pairs.
Mat2 mat2_from_json(const nlohmann::json& j);

/// {"type": "identity"} | {"type": "decoherence", "gamma": g} |
/// {"type": "eb", "povm": [m, ...], "outputs": [m, ...]} |
/// {"type": "kraus", "ops": [m, ...]}.
Channel channel_from_json(const nlohmann::json& j);

/// {"xi": ["Z0", ...], "psi": [...], "payoff": [{"x": "Z0", "y": "Z1", "value": 0.25}, ...]}
/// with ideal eigenstates unless `states` supplies tomography results.
PayoffTable payoff_table_from_json(const nlohmann::json& j, const TomographySet* states = nullptr);

nlohmann::json to_json(const BlochVector& v);
nlohmann::json to_json(const EBBoundResult& r);

std::string format_double(double v, int digits = 12);

}  // namespace nebcert
