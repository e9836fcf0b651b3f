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

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "nebcert/ebbound.hpp"
#include "nebcert/game.hpp"
#include "nebcert/qubit.hpp"

namespace nebcert {

/// Signal, decoy and vacuum mean photon numbers, mu > nu > omega >= 0.
struct IntensitySet {
  double mu = 0.2;
  double nu = 0.01;
  double omega = 0.0;

  void validate() const;
  friend bool operator==(const IntensitySet&, const IntensitySet&) = default;
};

/// The seven (alpha_xi, alpha_psi) combinations the decoy analysis needs.
enum class IntensityPair { MuMu, NuNu, MuOmega, OmegaMu, NuOmega, OmegaNu, OmegaOmega };

inline constexpr std::array<IntensityPair, 7> kIntensityPairs{
    IntensityPair::MuMu,    IntensityPair::NuNu,    IntensityPair::MuOmega,   IntensityPair::OmegaMu,
    IntensityPair::NuOmega, IntensityPair::OmegaNu, IntensityPair::OmegaOmega};

std::string to_string(IntensityPair p);
std::pair<double, double> intensities_of(IntensityPair p, const IntensitySet& s);

/// One observed (or modelled) gain. `trials == 0` marks an exact value with no
/// sampling behind it.
struct GainEntry {
  double gain = 0.0;
  std::int64_t trials = 0;
  std::int64_t clicks = 0;

  static GainEntry counted(std::int64_t trials, std::int64_t clicks);
  static GainEntry exact(double gain);
};

struct SettingKey {
  StateLabel x;
  StateLabel y;
  IntensityPair pair;

  friend bool operator==(const SettingKey&, const SettingKey&) = default;
  friend std::strong_ordering operator<=>(const SettingKey& a, const SettingKey& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    if (auto c = a.y <=> b.y; c != 0) return c;
    return static_cast<int>(a.pair) <=> static_cast<int>(b.pair);
  }
};

/// Gains Q^{alpha_xi alpha_psi}_{0, xi_x, psi_y} for every recorded setting.
class GainRecord {
 public:
  explicit GainRecord(IntensitySet intensities);

  const IntensitySet& intensities() const { return intensities_; }
  const std::map<SettingKey, GainEntry>& entries() const { return entries_; }

  /// Throws ConfigError on gain outside [0, 1] or clicks inconsistent with trials.
  void set(const StateLabel& x, const StateLabel& y, IntensityPair pair, const GainEntry& entry);
  const GainEntry* find(const StateLabel& x, const StateLabel& y, IntensityPair pair) const;
  /// Throws ConfigError if the setting is missing.
  const GainEntry& at(const StateLabel& x, const StateLabel& y, IntensityPair pair) const;

  /// Throws ConfigError unless all seven pairs exist for every non-zero payoff.
  void require_complete(const PayoffTable& table) const;

  friend bool operator==(const GainRecord&, const GainRecord&);

 private:
  IntensitySet intensities_;
  std::map<SettingKey, GainEntry> entries_;
};

bool operator==(const GainEntry& a, const GainEntry& b);

/// Truncated Poisson expansion of a gain together with the mass it drops.
struct GainExpansion {
  double gain = 0.0;
  /// Upper bound on |exact - gain|: every dropped term has yield <= 1.
  double tail_bound = 0.0;
};

/// Q = e^{-a-b} sum_{n,m <= truncation} a^n b^m / (n! m!) Y^{nm}.
/// `yields(n, m)` must cover 0..truncation on both axes.
GainExpansion expected_gain(double alpha_xi, double alpha_psi, const Eigen::MatrixXd& yields, int truncation = 20);

struct YieldInterval {
  double lower = 0.0;
  double upper = 0.0;
  /// Values before clamping to [0, 1].
  double raw_lower = 0.0;
  double raw_upper = 0.0;
};

using YieldBounds = std::map<std::pair<StateLabel, StateLabel>, YieldInterval>;

/// Weights of the seven gains (in kIntensityPairs order) in the single-photon
/// lower bound (mu^3 J1 - nu^3 J2) / (mu^2 nu^2 (mu - nu)).
std::array<double, 7> y11_lower_weights(const IntensitySet& s);

/// Y11_U - Y11_L, which only depends on the intensities.
double y11_upper_gap(const IntensitySet& s);

/// Single-photon yield interval from the seven gains of one setting.
YieldInterval y11_interval(const std::array<double, 7>& gains, const IntensitySet& s);

/// Bounds for every (x, y) that has all seven gains recorded.
///
/// Requires omega = 0 and mu != nu. Bounds are clamped to [0, 1]
/// independently; a lower bound above the upper one after clamping raises
/// InconsistentStatisticsError.
YieldBounds y11_bounds(const GainRecord& gains, const IntensitySet& intensities);

/// sum_xy p(0, x, y) * (lower if p > 0 else upper). Throws ConfigError if a
/// non-zero payoff pair has no bounds.
double payoff_lower_bound(const YieldBounds& bounds, const PayoffTable& table);

/// Payoff obtained by plugging the signal gains Q_mumu in directly, without
/// any decoy correction.
double raw_gain_payoff(const GainRecord& gains, const PayoffTable& table);

struct CertifyOptions {
  /// Sample size assumed for exact (trials == 0) gains when propagating error.
  std::int64_t nominal_trials = 0;
};

struct CertificationVerdict {
  double payoff_lower = 0.0;
  double eb_bound = 0.0;
  bool certified = false;
  double std_error = 0.0;
};

/// Decides whether the lower-bounded payoff exceeds the entanglement-breaking
/// bound. The 1-sigma error comes from binomial variances Q(1 - Q)/trials
/// pushed linearly through J1, J2 and the payoff sum; clamped bounds
/// contribute nothing.
CertificationVerdict certify(const GainRecord& gains, const IntensitySet& intensities, const PayoffTable& table,
                             const EBBoundResult& bound, const CertifyOptions& options = {});

}  // namespace nebcert
