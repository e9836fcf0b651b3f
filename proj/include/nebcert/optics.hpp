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
#include <cstdint>
#include <random>
#include <vector>

#include "nebcert/channels.hpp"
#include "nebcert/decoy.hpp"
#include "nebcert/game.hpp"
#include "nebcert/qubit.hpp"

namespace nebcert {

/// Coherent-state amplitudes (sqrt of mean photon number) of the early and
/// late time bins. `global_phase` is already folded into both amplitudes.
struct TimeBinPulse {
  Complex early{0.0, 0.0};
  Complex late{0.0, 0.0};
  double global_phase = 0.0;

  double mean_photons() const { return std::norm(early) + std::norm(late); }
};

/// Z0 -> (sqrt(a), 0), Z1 -> (0, sqrt(a)); X/Y -> (sqrt(a/2), e^{i phi} sqrt(a/2))
/// with phi = 0, pi, pi/2, 3pi/2 for X0, X1, Y0, Y1.
TimeBinPulse prepare_pulse(const StateLabel& label, double intensity, double global_phase = 0.0);
/// Same, with a uniformly random global phase (phase randomization).
TimeBinPulse prepare_pulse(const StateLabel& label, double intensity, std::mt19937_64& rng);

/// Decoherence as realized by the Sagnac loop: the pulse passes untouched,
/// or one whole time bin is removed.
enum class SagnacBranch { Identity, KeepEarly, KeepLate };

TimeBinPulse apply_sagnac(const TimeBinPulse& pulse, SagnacBranch branch);

/// `u_branch` < 1 - gamma keeps the pulse; otherwise `u_bin` < 1/2 keeps the
/// early bin and anything else keeps the late bin. Both draws in [0, 1).
TimeBinPulse apply_optical_decoherence(const TimeBinPulse& pulse, double gamma, double u_branch, double u_bin);

struct WeightedBranch {
  double weight;
  SagnacBranch branch;
};
/// The three Sagnac branches with their probabilities (zero weights dropped).
std::vector<WeightedBranch> decoherence_branches(double gamma);

/// Dark counts per gate at 50 counts/s, a 37.5 MHz gate rate and an 85 % window.
inline constexpr double kDefaultDarkProb = 50.0 / 37.5e6 * 0.85;

struct DetectorModel {
  double efficiency = 0.27;
  double dark_prob = kDefaultDarkProb;
  double window_fraction = 0.85;
  /// CW-to-signal intensity ratio; see cw_noise_photons().
  double noise_beta = 0.0;
  /// Mode overlap of the two arms at the beam splitter (1 = indistinguishable).
  double overlap = 1.0;
  /// Require the two non-coincident cells to stay dark.
  bool exclusive_coincidence = true;

  void validate() const;
};

/// Mean CW photons per (detector, bin) window: the continuous-wave power is
/// beta times the signal power, spread over two detectors and two bins, so
/// each cell sees beta * mu_signal / 4 before detection losses.
double cw_noise_photons(const DetectorModel& det, double signal_intensity);

/// Cells are ordered (Det0 early, Det0 late, Det1 early, Det1 late).
enum Cell : int { kDet0Early = 0, kDet0Late = 1, kDet1Early = 2, kDet1Late = 3 };
using ClickProbs = std::array<double, 4>;
using ClickPattern = std::array<bool, 4>;

/// Threshold-detector click probabilities behind a 50/50 beam splitter with
/// out0 = (a + i b)/sqrt(2), out1 = (i a + b)/sqrt(2) per bin:
/// p = 1 - (1 - p_dark) exp(-eta w (|out|^2 + noise)).
/// With overlap V < 1 only sqrt(V) b interferes; the rest adds (1 - V)|b|^2/2
/// photons to each port.
ClickProbs bsm_click_probs(const TimeBinPulse& a, const TimeBinPulse& b, const DetectorModel& det,
                           double noise_photons = 0.0);

/// Beam-splitter output amplitudes for one bin: {out0, out1}.
std::array<Complex, 2> beam_splitter(Complex a, Complex b);

/// Psi- heralding: Det0 and Det1 fire in opposite time bins.
bool psi_minus_coincidence(const ClickPattern& clicks, bool exclusive = true);
/// Probability of the heralding pattern for independent cells.
double psi_minus_coincidence(const ClickProbs& probs, bool exclusive = true);

/// The channel a pulse meets on its way to the measurement.
struct OpticalChannel {
  double gamma = 0.0;

  static OpticalChannel identity() { return {0.0}; }
  static OpticalChannel decoherence(double g) { return {g}; }
  /// Qubit-level action of the same channel.
  Channel qubit_channel() const;
};

enum class SimMode { Analytic, MonteCarlo };

struct SimConfig {
  IntensitySet intensities;
  DetectorModel detector;
  OpticalChannel channel;
  std::int64_t trials_per_setting = 1'000'000;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::Analytic;
  /// Phase grid per arm in analytic mode.
  int phase_grid = 64;
  /// 0 picks the hardware concurrency.
  int threads = 0;

  void validate() const;
};

/// Gain of one setting averaged exactly over both global phases (grid
/// quadrature) and over the Sagnac branches.
double analytic_gain(const StateLabel& x, const StateLabel& y, double alpha_xi, double alpha_psi,
                     const SimConfig& config);

/// Runs every (x, y) with non-zero payoff at all seven intensity pairs.
/// Analytic mode stores exact gains; Monte Carlo mode samples
/// `trials_per_setting` pulse pairs per setting. Each setting draws from its
/// own sub-seed, so the result does not depend on the thread count.
GainRecord simulate_gains(const SimConfig& config, const PayoffTable& table);

/// Deterministic 64-bit mix used to derive per-setting seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace nebcert
