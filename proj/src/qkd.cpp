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

#include "nebcert/qkd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nebcert/errors.hpp"

namespace nebcert {

namespace {

void require_key_basis(Basis basis) {
  if (basis == Basis::Y) throw ConfigError("key-rate statistics use the Z or X basis only");
}

const YieldInterval& bounds_at(const YieldBounds& bounds, Basis basis, int xb, int yb) {
  const StateLabel x{basis, xb}, y{basis, yb};
  auto it = bounds.find({x, y});
  if (it == bounds.end()) throw ConfigError("no yield bounds for setting " + to_string(x) + "," + to_string(y));
  return it->second;
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("binary entropy argument must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

void KeyRateInputs::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  auto in_half = [](double v) { return v >= 0.0 && v <= 0.5; };
  if (!in_unit(q11_z) || !in_unit(q_z)) throw ConfigError("key-rate gains must lie in [0, 1]");
  if (!in_half(e_z) || !in_half(e11_x)) throw ConfigError("key-rate error rates must lie in [0, 0.5]");
  if (!(f >= 1.0)) throw ConfigError("error-correction inefficiency must be >= 1");
}

double key_rate(const KeyRateInputs& in) {
  in.validate();
  return in.q11_z * (1.0 - binary_entropy(in.e11_x)) - in.q_z * in.f * binary_entropy(in.e_z);
}

BasisStatistics qber_from_gains(const GainRecord& gains, Basis basis) {
  require_key_basis(basis);
  double correct = 0.0, wrong = 0.0;
  for (int xb = 0; xb < 2; ++xb) {
    for (int yb = 0; yb < 2; ++yb) {
      const double q = gains.at({basis, xb}, {basis, yb}, IntensityPair::MuMu).gain;
      (xb == yb ? wrong : correct) += q;
    }
  }
  BasisStatistics s;
  s.gain = (correct + wrong) / 4.0;
  s.qber = correct + wrong > 0.0 ? wrong / (correct + wrong) : 0.0;
  return s;
}

double single_photon_error_upper(const YieldBounds& bounds, Basis basis) {
  require_key_basis(basis);
  const double err_upper = bounds_at(bounds, basis, 0, 0).upper + bounds_at(bounds, basis, 1, 1).upper;
  const double ok_lower = bounds_at(bounds, basis, 0, 1).lower + bounds_at(bounds, basis, 1, 0).lower;
  if (err_upper + ok_lower <= 0.0) return 0.5;
  return std::min(0.5, err_upper / (err_upper + ok_lower));
}

double single_photon_yield_lower(const YieldBounds& bounds, Basis basis) {
  require_key_basis(basis);
  double sum = 0.0;
  for (int xb = 0; xb < 2; ++xb)
    for (int yb = 0; yb < 2; ++yb) sum += bounds_at(bounds, basis, xb, yb).lower;
  return sum / 4.0;
}

KeyRateInputs key_rate_inputs(const GainRecord& gains, const YieldBounds& bounds, const IntensitySet& intensities,
                              double f) {
  const BasisStatistics z = qber_from_gains(gains, Basis::Z);
  const double mu = intensities.mu;
  KeyRateInputs in;
  in.q11_z = std::exp(-2.0 * mu) * mu * mu * single_photon_yield_lower(bounds, Basis::Z);
  in.q_z = z.gain;
  in.e_z = std::min(0.5, z.qber);
  in.e11_x = single_photon_error_upper(bounds, Basis::X);
  in.f = f;
  return in;
}

}  // namespace nebcert
