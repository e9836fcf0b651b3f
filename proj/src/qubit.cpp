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

#include "nebcert/qubit.hpp"

#include <algorithm>
#include <cmath>

#include "nebcert/errors.hpp"

namespace nebcert {

namespace {

const Complex kI{0.0, 1.0};

Mat2 make_mat2(Complex a, Complex b, Complex c, Complex d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

const Mat2& pauli_x() {
  static const Mat2 m = make_mat2(0.0, 1.0, 1.0, 0.0);
  return m;
}

const Mat2& pauli_y() {
  static const Mat2 m = make_mat2(0.0, -kI, kI, 0.0);
  return m;
}

const Mat2& pauli_z() {
  static const Mat2 m = make_mat2(1.0, 0.0, 0.0, -1.0);
  return m;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

const std::array<StateLabel, 6>& all_labels() {
  static const std::array<StateLabel, 6> labels{{{Basis::Z, 0},
                                                 {Basis::Z, 1},
                                                 {Basis::X, 0},
                                                 {Basis::X, 1},
                                                 {Basis::Y, 0},
                                                 {Basis::Y, 1}}};
  return labels;
}

std::string to_string(Basis b) {
  switch (b) {
    case Basis::Z:
      return "Z";
    case Basis::X:
      return "X";
    case Basis::Y:
      return "Y";
  }
  return "?";
}

std::string to_string(const StateLabel& l) { return to_string(l.basis) + std::to_string(l.bit); }

Basis parse_basis(std::string_view s) {
  if (s == "Z" || s == "z") return Basis::Z;
  if (s == "X" || s == "x") return Basis::X;
  if (s == "Y" || s == "y") return Basis::Y;
  throw ConfigError("unknown basis '" + std::string(s) + "'");
}

StateLabel make_label(std::string_view basis, int bit) {
  if (bit != 0 && bit != 1) throw ConfigError("state bit must be 0 or 1, got " + std::to_string(bit));
  return {parse_basis(basis), bit};
}

StateLabel parse_label(std::string_view s) {
  if (s.size() != 2 || (s[1] != '0' && s[1] != '1')) {
    throw ConfigError("state label must look like Z0, X1, Y0; got '" + std::string(s) + "'");
  }
  return make_label(s.substr(0, 1), s[1] - '0');
}

bool is_physical(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) return false;
  if (!m.allFinite()) return false;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) return false;
  if (std::abs(m.trace() - Complex(1.0)) > kTraceTol) return false;
  const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -kEigenTol;
}

DensityMatrix::DensityMatrix() : m_(Eigen::MatrixXcd::Identity(2, 2) * 0.5) {}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (!is_physical(m_)) throw InvalidStateError("matrix is not a physical 2x2 or 4x4 density matrix");
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

Mat2 DensityMatrix::as_mat2() const {
  if (dim() != 2) throw InvalidStateError("expected a qubit state");
  return m_;
}

BlochVector ideal_bloch(const StateLabel& label) {
  const double s = label.bit == 0 ? 1.0 : -1.0;
  switch (label.basis) {
    case Basis::Z:
      return {0.0, 0.0, s};
    case Basis::X:
      return {s, 0.0, 0.0};
    case Basis::Y:
      return {0.0, s, 0.0};
  }
  return {};
}

DensityMatrix ideal_state(const StateLabel& label) {
  // Entries are exact in binary (0, 1, 1/2, +-i/2), so purity is exactly 1.
  const double h = 0.5;
  const double s = label.bit == 0 ? 1.0 : -1.0;
  Mat2 m;
  switch (label.basis) {
    case Basis::Z:
      m = label.bit == 0 ? make_mat2(1.0, 0.0, 0.0, 0.0) : make_mat2(0.0, 0.0, 0.0, 1.0);
      break;
    case Basis::X:
      m = make_mat2(h, s * h, s * h, h);
      break;
    case Basis::Y:
      m = make_mat2(h, -s * h * kI, s * h * kI, h);
      break;
  }
  return DensityMatrix(m);
}

DensityMatrix from_bloch(const BlochVector& v) {
  if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
    throw InvalidStateError("Bloch vector has non-finite components");
  }
  if (v.norm() > 1.0 + kBlochNormTol) throw InvalidStateError("Bloch vector norm exceeds 1");
  const Mat2 m = 0.5 * (Mat2::Identity() + v.x * pauli_x() + v.y * pauli_y() + v.z * pauli_z());
  return DensityMatrix(m);
}

BlochVector to_bloch(const DensityMatrix& rho) {
  const Mat2 m = rho.as_mat2();
  return {(m * pauli_x()).trace().real(), (m * pauli_y()).trace().real(), (m * pauli_z()).trace().real()};
}

DensityMatrix reconstruct_tomography(double exp_x, double exp_y, double exp_z) {
  for (double e : {exp_x, exp_y, exp_z}) {
    if (!std::isfinite(e) || std::abs(e) > 1.0 + kTomographySlack) {
      throw ConfigError("tomography expectation value " + std::to_string(e) +
                        " lies outside [-1, 1] beyond measurement slack");
    }
  }
  BlochVector v{exp_x, exp_y, exp_z};
  const double n = v.norm();
  if (n > 1.0) v = v.scaled(1.0 / n);
  return from_bloch(v);
}

namespace {

// Eigenvalues at round-off level are treated as exact zeros before the square root.
constexpr double kRootFloor = 1e-13;

double floored_sqrt(double v) { return v > kRootFloor ? std::sqrt(v) : 0.0; }

}  // namespace

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  const Eigen::VectorXd roots = es.eigenvalues().unaryExpr(&floored_sqrt);
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw InvalidStateError("fidelity of states with different dimensions");
  const Eigen::MatrixXcd root = psd_sqrt(rho.matrix());
  const Eigen::MatrixXcd inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().unaryExpr(&floored_sqrt).sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

DensityMatrix mix_with_identity(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("mixing weight must lie in [0, 1]");
  const int d = rho.dim();
  return DensityMatrix((1.0 - p) * rho.matrix() + p * Eigen::MatrixXcd::Identity(d, d) / d);
}

DensityMatrix depolarized_state(const StateLabel& label, double target_fidelity) {
  if (!(target_fidelity >= 0.5 && target_fidelity <= 1.0)) {
    throw ConfigError("depolarized fidelity must lie in [0.5, 1]");
  }
  // F = (1 + r) / 2 for a Bloch vector of length r along the ideal direction.
  return from_bloch(ideal_bloch(label).scaled(2.0 * target_fidelity - 1.0));
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace nebcert
