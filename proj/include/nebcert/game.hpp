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

#include <optional>
#include <vector>

#include "nebcert/channels.hpp"
#include "nebcert/qubit.hpp"

namespace nebcert {

enum class TableKind { SixState, FourState, Custom };

/// Referee's payoff function p(0, x, y) together with the question states it
/// is evaluated on. Pairs that were never assigned carry payoff 0.
class PayoffTable {
 public:
  PayoffTable() = default;

  /// `payoff` is (xi count) x (psi count). Labels must be unique per side.
  PayoffTable(std::vector<StateLabel> xi_labels, std::vector<DensityMatrix> xi_states,
              std::vector<StateLabel> psi_labels, std::vector<DensityMatrix> psi_states,
              Eigen::MatrixXd payoff);

  const std::vector<StateLabel>& xi_labels() const { return xi_labels_; }
  const std::vector<StateLabel>& psi_labels() const { return psi_labels_; }
  const std::vector<DensityMatrix>& xi_states() const { return xi_states_; }
  const std::vector<DensityMatrix>& psi_states() const { return psi_states_; }
  const Eigen::MatrixXd& payoff() const { return payoff_; }

  double payoff(int x, int y) const { return payoff_(x, y); }
  /// 0 for labels that are not part of the table.
  double payoff(const StateLabel& x, const StateLabel& y) const;

  std::optional<int> xi_index(const StateLabel& l) const;
  std::optional<int> psi_index(const StateLabel& l) const;

  struct Entry {
    int x;
    int y;
    StateLabel x_label;
    StateLabel y_label;
    double payoff;
  };
  /// Entries with non-zero payoff, row-major.
  std::vector<Entry> nonzero_entries() const;

  /// Same labels and payoffs, different question states.
  PayoffTable with_states(std::vector<DensityMatrix> xi_states, std::vector<DensityMatrix> psi_states) const;

 private:
  std::vector<StateLabel> xi_labels_;
  std::vector<StateLabel> psi_labels_;
  std::vector<DensityMatrix> xi_states_;
  std::vector<DensityMatrix> psi_states_;
  Eigen::MatrixXd payoff_;
};

/// Six-state rule: +1/4 anti-correlated in Z or X, -1/4 correlated in Z or X,
/// -1/2 correlated in Y, 0 otherwise. Keyed on labels, not on the states.
double six_state_payoff(const StateLabel& x, const StateLabel& y);
/// Four-state rule: as above with the X basis removed.
double four_state_payoff(const StateLabel& x, const StateLabel& y);

/// States ordered (Z0, Z1, X0, X1, Y0, Y1).
PayoffTable six_state_table(std::vector<DensityMatrix> xi, std::vector<DensityMatrix> psi);
/// States ordered (Z0, Z1, Y0, Y1).
PayoffTable four_state_table(std::vector<DensityMatrix> xi, std::vector<DensityMatrix> psi);

PayoffTable ideal_six_state_table();
PayoffTable ideal_four_state_table();

/// Label order used by the built-in tables.
std::vector<StateLabel> table_labels(TableKind kind);

/// Projector onto |Psi-> = (|01> - |10>)/sqrt(2), the b = 0 outcome.
const Mat4& singlet_projector();

/// tr[(ch(xi) (x) psi) |Psi-><Psi-|]; in [0, 1/2] for product inputs.
double ideal_probability(const Channel& ch, const DensityMatrix& xi, const DensityMatrix& psi);

/// sum_xy p(0, x, y) * ideal_probability(ch, xi_x, psi_y).
double ideal_payoff(const Channel& ch, const PayoffTable& table);

}  // namespace nebcert
