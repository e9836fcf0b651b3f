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

#include "nebcert/decoy.hpp"
#include "nebcert/qubit.hpp"

namespace nebcert {

/// Default error-correction inefficiency.
inline constexpr double kDefaultEcInefficiency = 1.16;

/// H(x) = -x log2 x - (1 - x) log2 (1 - x), with H(0) = H(1) = 0.
double binary_entropy(double x);

struct KeyRateInputs {
  /// Single-photon gain in Z at mu-mu.
  double q11_z = 0.0;
  /// Overall gain in Z at mu-mu.
  double q_z = 0.0;
  /// Bit error rate in Z at mu-mu.
  double e_z = 0.0;
  /// Single-photon phase error rate estimated from X.
  double e11_x = 0.0;
  double f = kDefaultEcInefficiency;

  void validate() const;
};

/// R = Q11_Z (1 - H(e11_X)) - Q_Z f H(E_Z). Negative means no key.
double key_rate(const KeyRateInputs& in);

struct BasisStatistics {
  double gain = 0.0;
  double qber = 0.0;
};

/// Gain and error rate of one basis at mu-mu.
///
/// The gain is the mean over the four (x_bit, y_bit) settings, i.e. the gain
/// given both parties picked this basis. A Psi- herald means "anti-correlated"
/// in both Z and X, so correlated settings count as errors in either basis.
BasisStatistics qber_from_gains(const GainRecord& gains, Basis basis);

/// Upper bound on the single-photon error rate of a basis:
/// U_err / (U_err + L_ok), capped at 1/2.
double single_photon_error_upper(const YieldBounds& bounds, Basis basis);

/// Mean single-photon yield lower bound over the four settings of a basis.
double single_photon_yield_lower(const YieldBounds& bounds, Basis basis);

/// Assembles the key-rate inputs from one gain record: Q11_Z =
/// e^{-2 mu} mu^2 Y11_Z with Y11_Z from the decoy lower bound, e11_X from the
/// decoy upper bound.
KeyRateInputs key_rate_inputs(const GainRecord& gains, const YieldBounds& bounds, const IntensitySet& intensities,
                              double f = kDefaultEcInefficiency);

}  // namespace nebcert
