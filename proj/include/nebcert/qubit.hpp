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
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace nebcert {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Tolerances shared by the state invariants.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;
inline constexpr double kBlochNormTol = 1e-10;

/// Allowed |<P>| overshoot of raw tomography expectation values.
inline constexpr double kTomographySlack = 0.05;

const Mat2& pauli_x();
const Mat2& pauli_y();
const Mat2& pauli_z();

/// Real expectation values (<X>, <Y>, <Z>) of a qubit state.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const BlochVector& other) const { return x * other.x + y * other.y + z * other.z; }
  BlochVector scaled(double s) const { return {x * s, y * s, z * s}; }
};

enum class Basis { Z, X, Y };

/// One of the six Pauli eigenstates, e.g. (Z, 0) = |0>, (Y, 1) = |-i>.
struct StateLabel {
  Basis basis = Basis::Z;
  int bit = 0;

  friend bool operator==(const StateLabel&, const StateLabel&) = default;
  friend auto operator<=>(const StateLabel& a, const StateLabel& b) {
    return std::pair(static_cast<int>(a.basis), a.bit) <=>
           std::pair(static_cast<int>(b.basis), b.bit);
  }
};

/// The six labels in canonical order (Z0, Z1, X0, X1, Y0, Y1).
const std::array<StateLabel, 6>& all_labels();

std::string to_string(Basis b);
std::string to_string(const StateLabel& l);
Basis parse_basis(std::string_view s);
StateLabel parse_label(std::string_view s);
StateLabel make_label(std::string_view basis, int bit);

/// Dense Hermitian, unit-trace, positive semidefinite 2x2 or 4x4 matrix.
///
/// Construction validates the invariants; instances are immutable values.
class DensityMatrix {
 public:
  /// Maximally mixed qubit.
  DensityMatrix();

  /// Throws InvalidStateError unless `m` is a 2x2 or 4x4 physical state.
  explicit DensityMatrix(Eigen::MatrixXcd m);

  const Eigen::MatrixXcd& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  Complex operator()(int r, int c) const { return m_(r, c); }

  double purity() const;
  /// Qubit only.
  Mat2 as_mat2() const;

 private:
  Eigen::MatrixXcd m_;
};

/// Checks the DensityMatrix invariants without throwing.
bool is_physical(const Eigen::MatrixXcd& m);

DensityMatrix ideal_state(const StateLabel& label);
BlochVector ideal_bloch(const StateLabel& label);

/// rho = (I + x X + y Y + z Z) / 2. Throws on non-finite components or |v| > 1.
DensityMatrix from_bloch(const BlochVector& v);
BlochVector to_bloch(const DensityMatrix& rho);

/// Builds a state from measured Pauli expectation values.
///
/// Each value may overshoot [-1, 1] by kTomographySlack; a Bloch vector longer
/// than 1 is rescaled onto the unit sphere. Values beyond the slack throw
/// ConfigError, since they indicate corrupt data rather than shot noise.
DensityMatrix reconstruct_tomography(double exp_x, double exp_y, double exp_z);

/// Uhlmann fidelity F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0, 1].
/// For pure sigma it reduces to tr(rho sigma).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// (1 - p) rho + p I/d.
DensityMatrix mix_with_identity(const DensityMatrix& rho, double p);

/// Depolarizes the ideal eigenstate for `label` until its fidelity with the
/// ideal state equals `target` (target in [1/2, 1]).
DensityMatrix depolarized_state(const StateLabel& label, double target_fidelity);

Mat4 kron(const Mat2& a, const Mat2& b);

/// Hermitian square root of a PSD matrix (negative eigenvalues clipped).
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m);

}  // namespace nebcert
