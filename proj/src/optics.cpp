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

#include "nebcert/optics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "nebcert/errors.hpp"

namespace nebcert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double relative_phase(const StateLabel& label) {
  const int quarter = label.basis == Basis::X ? (label.bit == 0 ? 0 : 2) : (label.bit == 0 ? 1 : 3);
  return quarter * std::numbers::pi / 2.0;
}

double click_prob(double photons, const DetectorModel& det) {
  return 1.0 - (1.0 - det.dark_prob) * std::exp(-det.efficiency * det.window_fraction * photons);
}

struct Setting {
  StateLabel x;
  StateLabel y;
  IntensityPair pair;
};

std::int64_t monte_carlo_clicks(const Setting& s, const SimConfig& config, std::uint64_t seed) {
  const auto [alpha_xi, alpha_psi] = intensities_of(s.pair, config.intensities);
  const double noise = cw_noise_photons(config.detector, config.intensities.mu);
  const bool exclusive = config.detector.exclusive_coincidence;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t clicks = 0;
  for (std::int64_t t = 0; t < config.trials_per_setting; ++t) {
    TimeBinPulse a = prepare_pulse(s.x, alpha_xi, rng);
    const TimeBinPulse b = prepare_pulse(s.y, alpha_psi, rng);
    const double u_branch = unit(rng);
    const double u_bin = unit(rng);
    a = apply_optical_decoherence(a, config.channel.gamma, u_branch, u_bin);
    const ClickProbs p = bsm_click_probs(a, b, config.detector, noise);
    ClickPattern pattern{};
    for (int c = 0; c < 4; ++c) pattern[c] = unit(rng) < p[c];
    if (psi_minus_coincidence(pattern, exclusive)) ++clicks;
  }
  return clicks;
}

}  // namespace

TimeBinPulse prepare_pulse(const StateLabel& label, double intensity, double global_phase) {
  if (!(intensity >= 0.0)) throw ConfigError("pulse intensity must be non-negative");
  const Complex g = std::polar(1.0, global_phase);
  TimeBinPulse p;
  p.global_phase = global_phase;
  if (label.basis == Basis::Z) {
    (label.bit == 0 ? p.early : p.late) = g * std::sqrt(intensity);
    return p;
  }
  const double half = std::sqrt(intensity / 2.0);
  p.early = g * half;
  p.late = g * std::polar(half, relative_phase(label));
  return p;
}

TimeBinPulse prepare_pulse(const StateLabel& label, double intensity, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  return prepare_pulse(label, intensity, phase(rng));
}

TimeBinPulse apply_sagnac(const TimeBinPulse& pulse, SagnacBranch branch) {
  TimeBinPulse out = pulse;
  if (branch == SagnacBranch::KeepEarly) out.late = 0.0;
  if (branch == SagnacBranch::KeepLate) out.early = 0.0;
  return out;
}

TimeBinPulse apply_optical_decoherence(const TimeBinPulse& pulse, double gamma, double u_branch, double u_bin) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("decoherence strength must lie in [0, 1]");
  if (u_branch < 1.0 - gamma) return pulse;
  return apply_sagnac(pulse, u_bin < 0.5 ? SagnacBranch::KeepEarly : SagnacBranch::KeepLate);
}

std::vector<WeightedBranch> decoherence_branches(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("decoherence strength must lie in [0, 1]");
  std::vector<WeightedBranch> out;
  if (gamma < 1.0) out.push_back({1.0 - gamma, SagnacBranch::Identity});
  if (gamma > 0.0) {
    out.push_back({gamma / 2.0, SagnacBranch::KeepEarly});
    out.push_back({gamma / 2.0, SagnacBranch::KeepLate});
  }
  return out;
}

void DetectorModel::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(efficiency)) throw ConfigError("detector efficiency must lie in [0, 1]");
  if (!in_unit(dark_prob)) throw ConfigError("dark-count probability must lie in [0, 1]");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ConfigError("window fraction must lie in (0, 1]");
  if (!(noise_beta >= 0.0) || !std::isfinite(noise_beta)) throw ConfigError("noise beta must be >= 0");
  if (!in_unit(overlap)) throw ConfigError("mode overlap must lie in [0, 1]");
}

double cw_noise_photons(const DetectorModel& det, double signal_intensity) {
  return det.noise_beta * signal_intensity / 4.0;
}

std::array<Complex, 2> beam_splitter(Complex a, Complex b) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  return {r * (a + i * b), r * (i * a + b)};
}

ClickProbs bsm_click_probs(const TimeBinPulse& a, const TimeBinPulse& b, const DetectorModel& det,
                           double noise_photons) {
  const double v = det.overlap;
  const double root_v = std::sqrt(v);
  ClickProbs p{};
  const std::array<std::pair<Complex, Complex>, 2> bins{{{a.early, b.early}, {a.late, b.late}}};
  for (int bin = 0; bin < 2; ++bin) {
    const auto [ain, bin_amp] = bins[bin];
    const auto out = beam_splitter(ain, root_v * bin_amp);
    const double stray = (1.0 - v) * std::norm(bin_amp) / 2.0;
    p[bin] = click_prob(std::norm(out[0]) + stray + noise_photons, det);
    p[2 + bin] = click_prob(std::norm(out[1]) + stray + noise_photons, det);
  }
  return p;
}

bool psi_minus_coincidence(const ClickPattern& c, bool exclusive) {
  const bool early_late = c[kDet0Early] && c[kDet1Late];
  const bool late_early = c[kDet0Late] && c[kDet1Early];
  if (!exclusive) return early_late || late_early;
  return (early_late && !c[kDet0Late] && !c[kDet1Early]) || (late_early && !c[kDet0Early] && !c[kDet1Late]);
}

double psi_minus_coincidence(const ClickProbs& p, bool exclusive) {
  const double early_late = p[kDet0Early] * p[kDet1Late];
  const double late_early = p[kDet0Late] * p[kDet1Early];
  if (!exclusive) return early_late + late_early - early_late * late_early;
  return early_late * (1.0 - p[kDet0Late]) * (1.0 - p[kDet1Early]) +
         late_early * (1.0 - p[kDet0Early]) * (1.0 - p[kDet1Late]);
}

Channel OpticalChannel::qubit_channel() const { return nebcert::decoherence(gamma); }

void SimConfig::validate() const {
  intensities.validate();
  detector.validate();
  if (!(channel.gamma >= 0.0 && channel.gamma <= 1.0)) throw ConfigError("decoherence strength must lie in [0, 1]");
  if (trials_per_setting < 1) throw ConfigError("trials_per_setting must be >= 1");
  if (phase_grid < 64) throw ConfigError("phase_grid must be >= 64");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

double analytic_gain(const StateLabel& x, const StateLabel& y, double alpha_xi, double alpha_psi,
                     const SimConfig& config) {
  const int n = config.phase_grid;
  const double noise = cw_noise_photons(config.detector, config.intensities.mu);
  const bool exclusive = config.detector.exclusive_coincidence;
  std::vector<TimeBinPulse> xi_pulses, psi_pulses;
  for (int k = 0; k < n; ++k) {
    const double phase = kTwoPi * k / n;
    xi_pulses.push_back(prepare_pulse(x, alpha_xi, phase));
    psi_pulses.push_back(prepare_pulse(y, alpha_psi, phase));
  }
  double total = 0.0;
  for (const WeightedBranch& br : decoherence_branches(config.channel.gamma)) {
    double branch_sum = 0.0;
    for (const TimeBinPulse& a : xi_pulses) {
      const TimeBinPulse sent = apply_sagnac(a, br.branch);
      for (const TimeBinPulse& b : psi_pulses)
        branch_sum += psi_minus_coincidence(bsm_click_probs(sent, b, config.detector, noise), exclusive);
    }
    total += br.weight * branch_sum / (static_cast<double>(n) * n);
  }
  return std::clamp(total, 0.0, 1.0);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed and stream index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GainRecord simulate_gains(const SimConfig& config, const PayoffTable& table) {
  config.validate();
  std::vector<Setting> settings;
  for (const auto& e : table.nonzero_entries())
    for (IntensityPair p : kIntensityPairs) settings.push_back({e.x_label, e.y_label, p});

  std::vector<GainEntry> results(settings.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < settings.size(); i = next++) {
      const Setting& s = settings[i];
      if (config.mode == SimMode::Analytic) {
        const auto [ax, ay] = intensities_of(s.pair, config.intensities);
        results[i] = GainEntry::exact(analytic_gain(s.x, s.y, ax, ay, config));
      } else {
        const std::int64_t clicks = monte_carlo_clicks(s, config, derive_seed(config.seed, i));
        results[i] = GainEntry::counted(config.trials_per_setting, clicks);
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads =
      std::min<std::size_t>(config.threads > 0 ? static_cast<unsigned>(config.threads) : hw, settings.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  GainRecord record(config.intensities);
  for (std::size_t i = 0; i < settings.size(); ++i)
    record.set(settings[i].x, settings[i].y, settings[i].pair, results[i]);
  return record;
}

}  // namespace nebcert
