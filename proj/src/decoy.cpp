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

#include "nebcert/decoy.hpp"

#include <algorithm>
#include <cmath>

#include "nebcert/errors.hpp"

namespace nebcert {

namespace {

std::size_t pair_index(IntensityPair p) { return static_cast<std::size_t>(p); }

double poisson_cdf(double alpha, int n_max) {
  double term = std::exp(-alpha);
  double sum = term;
  for (int n = 1; n <= n_max; ++n) {
    term *= alpha / n;
    sum += term;
  }
  return sum;
}

std::array<double, 7> gains_for(const GainRecord& gains, const StateLabel& x, const StateLabel& y) {
  std::array<double, 7> q{};
  for (IntensityPair p : kIntensityPairs) q[pair_index(p)] = gains.at(x, y, p).gain;
  return q;
}

bool has_all_pairs(const GainRecord& gains, const StateLabel& x, const StateLabel& y) {
  return std::all_of(kIntensityPairs.begin(), kIntensityPairs.end(),
                     [&](IntensityPair p) { return gains.find(x, y, p) != nullptr; });
}

void require_vacuum_decoy(const IntensitySet& s) {
  s.validate();
  if (s.omega != 0.0) throw ConfigError("single-photon bounds assume a vacuum decoy (omega = 0)");
}

}  // namespace

void IntensitySet::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(nu) || !std::isfinite(omega)) {
    throw ConfigError("intensities must be finite");
  }
  if (omega < 0.0) throw ConfigError("intensities must be non-negative");
  if (mu == nu) throw ConfigError("signal and decoy intensities coincide (mu = nu)");
  if (!(mu > nu && nu > omega)) throw ConfigError("intensities must satisfy mu > nu > omega >= 0");
}

std::string to_string(IntensityPair p) {
  static const std::array<const char*, 7> names{"mu-mu", "nu-nu", "mu-omega", "omega-mu",
                                                "nu-omega", "omega-nu", "omega-omega"};
  return names[pair_index(p)];
}

std::pair<double, double> intensities_of(IntensityPair p, const IntensitySet& s) {
  switch (p) {
    case IntensityPair::MuMu:
      return {s.mu, s.mu};
    case IntensityPair::NuNu:
      return {s.nu, s.nu};
    case IntensityPair::MuOmega:
      return {s.mu, s.omega};
    case IntensityPair::OmegaMu:
      return {s.omega, s.mu};
    case IntensityPair::NuOmega:
      return {s.nu, s.omega};
    case IntensityPair::OmegaNu:
      return {s.omega, s.nu};
    case IntensityPair::OmegaOmega:
      return {s.omega, s.omega};
  }
  return {0.0, 0.0};
}

GainEntry GainEntry::counted(std::int64_t trials, std::int64_t clicks) {
  if (trials <= 0 || clicks < 0 || clicks > trials) {
    throw ConfigError("need 0 <= clicks <= trials and trials > 0");
  }
  return {static_cast<double>(clicks) / static_cast<double>(trials), trials, clicks};
}

GainEntry GainEntry::exact(double gain) { return {gain, 0, 0}; }

bool operator==(const GainEntry& a, const GainEntry& b) {
  return a.gain == b.gain && a.trials == b.trials && a.clicks == b.clicks;
}

GainRecord::GainRecord(IntensitySet intensities) : intensities_(intensities) { intensities_.validate(); }

void GainRecord::set(const StateLabel& x, const StateLabel& y, IntensityPair pair, const GainEntry& entry) {
  if (!(entry.gain >= 0.0 && entry.gain <= 1.0)) throw ConfigError("gain must lie in [0, 1]");
  if (entry.trials < 0 || entry.clicks < 0 || entry.clicks > entry.trials) {
    throw ConfigError("clicks must lie in [0, trials] for setting " + to_string(x) + "," + to_string(y));
  }
  if (entry.trials > 0 && entry.gain != static_cast<double>(entry.clicks) / static_cast<double>(entry.trials)) {
    throw ConfigError("gain differs from clicks / trials for setting " + to_string(x) + "," + to_string(y));
  }
  entries_[{x, y, pair}] = entry;
}

const GainEntry* GainRecord::find(const StateLabel& x, const StateLabel& y, IntensityPair pair) const {
  auto it = entries_.find({x, y, pair});
  return it == entries_.end() ? nullptr : &it->second;
}

const GainEntry& GainRecord::at(const StateLabel& x, const StateLabel& y, IntensityPair pair) const {
  if (const GainEntry* e = find(x, y, pair)) return *e;
  throw ConfigError("missing gain for setting " + to_string(x) + "," + to_string(y) + " at " + to_string(pair));
}

void GainRecord::require_complete(const PayoffTable& table) const {
  for (const auto& e : table.nonzero_entries())
    for (IntensityPair p : kIntensityPairs) (void)at(e.x_label, e.y_label, p);
}

bool operator==(const GainRecord& a, const GainRecord& b) {
  return a.intensities_ == b.intensities_ && a.entries_ == b.entries_;
}

GainExpansion expected_gain(double alpha_xi, double alpha_psi, const Eigen::MatrixXd& yields, int truncation) {
  if (!(alpha_xi >= 0.0) || !(alpha_psi >= 0.0)) throw ConfigError("intensities must be non-negative");
  if (truncation < 0 || yields.rows() <= truncation || yields.cols() <= truncation) {
    throw ConfigError("yield table does not cover the truncation order");
  }
  // Poisson weights e^{-a} a^n / n!, built by recurrence.
  Eigen::VectorXd wx(truncation + 1), wy(truncation + 1);
  wx(0) = std::exp(-alpha_xi);
  wy(0) = std::exp(-alpha_psi);
  for (int n = 1; n <= truncation; ++n) {
    wx(n) = wx(n - 1) * alpha_xi / n;
    wy(n) = wy(n - 1) * alpha_psi / n;
  }
  const Eigen::MatrixXd y = yields.topLeftCorner(truncation + 1, truncation + 1);
  GainExpansion out;
  out.gain = wx.dot(y * wy);
  out.tail_bound = std::max(0.0, 1.0 - poisson_cdf(alpha_xi, truncation) * poisson_cdf(alpha_psi, truncation));
  return out;
}

std::array<double, 7> y11_lower_weights(const IntensitySet& s) {
  require_vacuum_decoy(s);
  const double mu = s.mu, nu = s.nu;
  const double mu3 = mu * mu * mu, nu3 = nu * nu * nu;
  const double denom = mu * mu * nu * nu * (mu - nu);
  std::array<double, 7> w{};
  w[pair_index(IntensityPair::MuMu)] = -nu3 * std::exp(2.0 * mu) / denom;
  w[pair_index(IntensityPair::NuNu)] = mu3 * std::exp(2.0 * nu) / denom;
  w[pair_index(IntensityPair::MuOmega)] = nu3 * std::exp(mu) / denom;
  w[pair_index(IntensityPair::OmegaMu)] = nu3 * std::exp(mu) / denom;
  w[pair_index(IntensityPair::NuOmega)] = -mu3 * std::exp(nu) / denom;
  w[pair_index(IntensityPair::OmegaNu)] = -mu3 * std::exp(nu) / denom;
  w[pair_index(IntensityPair::OmegaOmega)] = (mu3 - nu3) / denom;
  return w;
}

double y11_upper_gap(const IntensitySet& s) {
  require_vacuum_decoy(s);
  const double mu = s.mu, nu = s.nu;
  const double denom = mu * mu * nu * nu * (mu - nu);
  // sum over n, m >= 1 with n + m >= 4 of x^(n+m) / (n! m!)
  auto tail = [](double x) {
    const double e = std::expm1(x);
    return (e - x) * (e + x) - x * x * x;
  };
  return (nu * nu * nu * tail(mu) - mu * mu * mu * tail(nu)) / denom;
}

YieldInterval y11_interval(const std::array<double, 7>& q, const IntensitySet& s) {
  require_vacuum_decoy(s);
  const double mu = s.mu, nu = s.nu;
  auto g = [&](IntensityPair p) { return q[pair_index(p)]; };
  const double j1 = g(IntensityPair::NuNu) * std::exp(2.0 * nu) + g(IntensityPair::OmegaOmega) -
                    g(IntensityPair::NuOmega) * std::exp(nu) - g(IntensityPair::OmegaNu) * std::exp(nu);
  const double j2 = g(IntensityPair::MuMu) * std::exp(2.0 * mu) + g(IntensityPair::OmegaOmega) -
                    g(IntensityPair::MuOmega) * std::exp(mu) - g(IntensityPair::OmegaMu) * std::exp(mu);
  const double denom = mu * mu * nu * nu * (mu - nu);
  YieldInterval out;
  out.raw_lower = (mu * mu * mu * j1 - nu * nu * nu * j2) / denom;
  out.raw_upper = out.raw_lower + y11_upper_gap(s);
  out.lower = std::clamp(out.raw_lower, 0.0, 1.0);
  out.upper = std::clamp(out.raw_upper, 0.0, 1.0);
  return out;
}

YieldBounds y11_bounds(const GainRecord& gains, const IntensitySet& intensities) {
  require_vacuum_decoy(intensities);
  if (!(gains.intensities() == intensities)) {
    throw ConfigError("gain record was taken at different intensities");
  }
  YieldBounds out;
  for (const auto& [key, entry] : gains.entries()) {
    (void)entry;
    const auto xy = std::pair(key.x, key.y);
    if (out.contains(xy) || !has_all_pairs(gains, key.x, key.y)) continue;
    const YieldInterval iv = y11_interval(gains_for(gains, key.x, key.y), intensities);
    if (iv.lower > iv.upper) {
      throw InconsistentStatisticsError("single-photon yield bounds cross for setting " + to_string(key.x) + "," +
                                        to_string(key.y));
    }
    out.emplace(xy, iv);
  }
  return out;
}

double payoff_lower_bound(const YieldBounds& bounds, const PayoffTable& table) {
  double total = 0.0;
  for (const auto& e : table.nonzero_entries()) {
    auto it = bounds.find({e.x_label, e.y_label});
    if (it == bounds.end()) {
      throw ConfigError("no yield bounds for setting " + to_string(e.x_label) + "," + to_string(e.y_label));
    }
    total += e.payoff * (e.payoff > 0.0 ? it->second.lower : it->second.upper);
  }
  return total;
}

double raw_gain_payoff(const GainRecord& gains, const PayoffTable& table) {
  double total = 0.0;
  for (const auto& e : table.nonzero_entries())
    total += e.payoff * gains.at(e.x_label, e.y_label, IntensityPair::MuMu).gain;
  return total;
}

CertificationVerdict certify(const GainRecord& gains, const IntensitySet& intensities, const PayoffTable& table,
                             const EBBoundResult& bound, const CertifyOptions& options) {
  gains.require_complete(table);
  const YieldBounds bounds = y11_bounds(gains, intensities);
  const std::array<double, 7> weights = y11_lower_weights(intensities);

  double variance = 0.0;
  for (const auto& e : table.nonzero_entries()) {
    const YieldInterval& iv = bounds.at({e.x_label, e.y_label});
    const double raw = e.payoff > 0.0 ? iv.raw_lower : iv.raw_upper;
    if (raw < 0.0 || raw > 1.0) continue;
    for (IntensityPair p : kIntensityPairs) {
      const GainEntry& g = gains.at(e.x_label, e.y_label, p);
      const std::int64_t n = g.trials > 0 ? g.trials : options.nominal_trials;
      if (n <= 0) continue;
      const double c = e.payoff * weights[pair_index(p)];
      variance += c * c * g.gain * (1.0 - g.gain) / static_cast<double>(n);
    }
  }

  CertificationVerdict v;
  v.payoff_lower = payoff_lower_bound(bounds, table);
  v.eb_bound = bound.threshold();
  v.certified = v.payoff_lower > v.eb_bound;
  v.std_error = std::sqrt(variance);
  return v;
}

}  // namespace nebcert
