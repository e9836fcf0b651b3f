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

#include "nebcert/game.hpp"

#include <cmath>
#include <set>
#include <string>

#include "nebcert/errors.hpp"

namespace nebcert {

namespace {

void check_unique(const std::vector<StateLabel>& labels, const char* side) {
  std::set<StateLabel> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw ConfigError(std::string("duplicate label in ") + side + " list");
}

double correlation_payoff(const StateLabel& x, const StateLabel& y, bool use_x_basis) {
  if (x.basis != y.basis) return 0.0;
  const bool correlated = x.bit == y.bit;
  switch (x.basis) {
    case Basis::Z:
      return correlated ? -0.25 : 0.25;
    case Basis::X:
      if (!use_x_basis) return 0.0;
      return correlated ? -0.25 : 0.25;
    case Basis::Y:
      return correlated ? -0.5 : 0.0;
  }
  return 0.0;
}

PayoffTable labelled_table(TableKind kind, std::vector<DensityMatrix> xi, std::vector<DensityMatrix> psi) {
  const std::vector<StateLabel> labels = table_labels(kind);
  const auto n = labels.size();
  if (xi.size() != n || psi.size() != n) {
    throw ConfigError("table needs " + std::to_string(n) + " states per side, got " + std::to_string(xi.size()) +
                      " and " + std::to_string(psi.size()));
  }
  Eigen::MatrixXd payoff(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      payoff(x, y) = kind == TableKind::SixState ? six_state_payoff(labels[x], labels[y])
                                                 : four_state_payoff(labels[x], labels[y]);
  return PayoffTable(labels, std::move(xi), labels, std::move(psi), std::move(payoff));
}

std::vector<DensityMatrix> ideal_states(const std::vector<StateLabel>& labels) {
  std::vector<DensityMatrix> out;
  for (const auto& l : labels) out.push_back(ideal_state(l));
  return out;
}

}  // namespace

PayoffTable::PayoffTable(std::vector<StateLabel> xi_labels, std::vector<DensityMatrix> xi_states,
                         std::vector<StateLabel> psi_labels, std::vector<DensityMatrix> psi_states,
                         Eigen::MatrixXd payoff)
    : xi_labels_(std::move(xi_labels)),
      psi_labels_(std::move(psi_labels)),
      xi_states_(std::move(xi_states)),
      psi_states_(std::move(psi_states)),
      payoff_(std::move(payoff)) {
  if (xi_labels_.size() != xi_states_.size() || psi_labels_.size() != psi_states_.size()) {
    throw ConfigError("payoff table labels and states differ in length");
  }
  if (payoff_.rows() != static_cast<Eigen::Index>(xi_labels_.size()) ||
      payoff_.cols() != static_cast<Eigen::Index>(psi_labels_.size())) {
    throw ConfigError("payoff matrix shape does not match the state lists");
  }
  if (!payoff_.allFinite()) throw ConfigError("payoff values must be finite");
  check_unique(xi_labels_, "xi");
  check_unique(psi_labels_, "psi");
  for (const auto& s : xi_states_)
    if (s.dim() != 2) throw ConfigError("xi states must be qubit states");
  for (const auto& s : psi_states_)
    if (s.dim() != 2) throw ConfigError("psi states must be qubit states");
}

std::optional<int> PayoffTable::xi_index(const StateLabel& l) const {
  for (std::size_t i = 0; i < xi_labels_.size(); ++i)
    if (xi_labels_[i] == l) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> PayoffTable::psi_index(const StateLabel& l) const {
  for (std::size_t i = 0; i < psi_labels_.size(); ++i)
    if (psi_labels_[i] == l) return static_cast<int>(i);
  return std::nullopt;
}

double PayoffTable::payoff(const StateLabel& x, const StateLabel& y) const {
  const auto xi = xi_index(x);
  const auto yi = psi_index(y);
  if (!xi || !yi) return 0.0;
  return payoff_(*xi, *yi);
}

std::vector<PayoffTable::Entry> PayoffTable::nonzero_entries() const {
  std::vector<Entry> out;
  for (int x = 0; x < payoff_.rows(); ++x)
    for (int y = 0; y < payoff_.cols(); ++y)
      if (payoff_(x, y) != 0.0) out.push_back({x, y, xi_labels_[x], psi_labels_[y], payoff_(x, y)});
  return out;
}

PayoffTable PayoffTable::with_states(std::vector<DensityMatrix> xi_states,
                                     std::vector<DensityMatrix> psi_states) const {
  return PayoffTable(xi_labels_, std::move(xi_states), psi_labels_, std::move(psi_states), payoff_);
}

double six_state_payoff(const StateLabel& x, const StateLabel& y) { return correlation_payoff(x, y, true); }

double four_state_payoff(const StateLabel& x, const StateLabel& y) { return correlation_payoff(x, y, false); }

std::vector<StateLabel> table_labels(TableKind kind) {
  switch (kind) {
    case TableKind::SixState:
      return {{Basis::Z, 0}, {Basis::Z, 1}, {Basis::X, 0}, {Basis::X, 1}, {Basis::Y, 0}, {Basis::Y, 1}};
    case TableKind::FourState:
      return {{Basis::Z, 0}, {Basis::Z, 1}, {Basis::Y, 0}, {Basis::Y, 1}};
    case TableKind::Custom:
      break;
  }
  throw ConfigError("custom tables have no fixed label order");
}

PayoffTable six_state_table(std::vector<DensityMatrix> xi, std::vector<DensityMatrix> psi) {
  return labelled_table(TableKind::SixState, std::move(xi), std::move(psi));
}

PayoffTable four_state_table(std::vector<DensityMatrix> xi, std::vector<DensityMatrix> psi) {
  return labelled_table(TableKind::FourState, std::move(xi), std::move(psi));
}

PayoffTable ideal_six_state_table() {
  const auto labels = table_labels(TableKind::SixState);
  return six_state_table(ideal_states(labels), ideal_states(labels));
}

PayoffTable ideal_four_state_table() {
  const auto labels = table_labels(TableKind::FourState);
  return four_state_table(ideal_states(labels), ideal_states(labels));
}

const Mat4& singlet_projector() {
  static const Mat4 p = [] {
    Eigen::Vector4cd v(0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0);
    return Mat4(v * v.adjoint());
  }();
  return p;
}

double ideal_probability(const Channel& ch, const DensityMatrix& xi, const DensityMatrix& psi) {
  const Mat4 joint = kron(nebcert::apply(ch, xi.as_mat2()), psi.as_mat2());
  return (joint * singlet_projector()).trace().real();
}

double ideal_payoff(const Channel& ch, const PayoffTable& table) {
  double total = 0.0;
  for (const auto& e : table.nonzero_entries())
    total += e.payoff * ideal_probability(ch, table.xi_states()[e.x], table.psi_states()[e.y]);
  return total;
}

}  // namespace nebcert
