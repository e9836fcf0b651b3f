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

#include <vector>

#include "nebcert/qubit.hpp"

namespace nebcert {

/// Measure-and-prepare description of an entanglement-breaking channel:
/// rho -> sum_k tr[E_k rho] gamma_k.
struct EBChannelSpec {
  std::vector<Mat2> povm;
  std::vector<DensityMatrix> outputs;

  /// Throws ConfigError if the effects are not a PSD resolution of the
  /// identity (tolerance 1e-10) or the list lengths differ.
  void validate() const;
};

/// Qubit CPTP map in Kraus form. Immutable after construction.
class Channel {
 public:
  /// Throws ConfigError unless sum_k K^dag K = I within 1e-10.
  explicit Channel(std::vector<Mat2> kraus_ops);

  static Channel identity();

  const std::vector<Mat2>& kraus_ops() const { return kraus_; }

 private:
  std::vector<Mat2> kraus_;
};

/// D_gamma(rho) = (1 - gamma) rho + gamma (|0><0| rho_00 + |1><1| rho_11).
///
/// Stored as K0 = sqrt(1 - gamma/2) I, K1 = sqrt(gamma/2) Z; the Z conjugation
/// flips the coherences, so the mixture scales them by exactly (1 - gamma).
Channel decoherence(double gamma);

/// Kraus form of a measure-and-prepare channel. Each pair of eigenvectors
/// e_i of E_k (weight l_i) and g_j of gamma_k (weight p_j) contributes
/// sqrt(l_i p_j) |g_j><e_i|.
Channel from_eb_spec(const EBChannelSpec& spec);

Mat2 apply(const Channel& ch, const Mat2& rho);
DensityMatrix apply(const Channel& ch, const DensityMatrix& rho);

/// Trace-one Choi state (ch (x) id)(|Phi+><Phi+|), channel acting on the
/// first tensor factor, |Phi+> = (|00> + |11>)/sqrt(2).
DensityMatrix choi_state(const Channel& ch);

/// Partial transpose on the second tensor factor of a 4x4 matrix.
Mat4 partial_transpose(const Mat4& m);

/// Smallest eigenvalue of the partial transpose. Negative iff the two-qubit
/// state is entangled (PPT criterion is exact for 2x2).
double min_partial_transpose_eigenvalue(const DensityMatrix& rho4);

/// Logarithm-free negativity: sum of |negative eigenvalues| of rho^{T_B}.
double negativity(const DensityMatrix& rho4);

}  // namespace nebcert
