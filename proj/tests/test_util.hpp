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

#include <cmath>
#include <random>
#include <vector>

#include "nebcert/channels.hpp"
#include "nebcert/game.hpp"
#include "nebcert/qubit.hpp"

namespace nebcert::testing {

inline BlochVector random_bloch(std::mt19937_64& rng, bool pure = false) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BlochVector v{n(rng), n(rng), n(rng)};
  const double len = v.norm();
  const double r = pure ? 1.0 : std::cbrt(u(rng));
  return v.scaled(r / len);
}

inline DensityMatrix random_qubit(std::mt19937_64& rng, bool pure = false) {
  return from_bloch(random_bloch(rng, pure));
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

/// Random CPTP map from a Haar isometry C^2 -> C^2 (x) C^k.
inline Channel random_channel(std::mt19937_64& rng, int kraus_count = 3) {
  const Eigen::MatrixXcd u = random_unitary(2 * kraus_count, rng);
  std::vector<Mat2> ops;
  for (int k = 0; k < kraus_count; ++k) ops.push_back(u.block(2 * k, 0, 2, 2));
  return Channel(std::move(ops));
}

/// Random measure-and-prepare spec: a random rank-one or mixed POVM built
/// from a random unitary, with random output states.
inline EBChannelSpec random_eb_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  const int k = count(rng);
  // Columns of a 2k x 2k unitary restricted to the first two rows give a
  // resolution of the identity on C^2: sum_j v_j v_j^dag = I.
  const Eigen::MatrixXcd u = random_unitary(std::max(2, k), rng);
  EBChannelSpec spec;
  for (int j = 0; j < k; ++j) {
    Mat2 e = Mat2::Zero();
    if (k == 1) {
      e = Mat2::Identity();
    } else {
      Eigen::Vector2cd v = u.block(0, j, 2, 1);
      e = v * v.adjoint();
    }
    spec.povm.push_back(e);
    spec.outputs.push_back(random_qubit(rng));
  }
  // Rank-one effects from k columns only sum to I when k == 2; renormalize.
  Mat2 sum = Mat2::Zero();
  for (const auto& e : spec.povm) sum += e;
  Eigen::SelfAdjointEigenSolver<Mat2> es(sum);
  const Mat2 inv_root =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  for (auto& e : spec.povm) e = inv_root * e * inv_root;
  return spec;
}

/// Random table on Pauli-eigenstate labels with payoffs in [-1, 1].
inline PayoffTable random_table(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto labels = table_labels(TableKind::SixState);
  Eigen::MatrixXd payoff(6, 6);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) payoff(x, y) = u(rng);
  std::vector<DensityMatrix> xi, psi;
  for (int i = 0; i < 6; ++i) {
    xi.push_back(random_qubit(rng));
    psi.push_back(random_qubit(rng));
  }
  return PayoffTable(labels, xi, labels, psi, payoff);
}

/// Qubit fidelity in closed form: tr(rho sigma) + 2 sqrt(det rho det sigma).
inline double qubit_fidelity_closed_form(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const Mat2 a = rho.as_mat2(), b = sigma.as_mat2();
  auto det = [](const Mat2& m) {
    const double d = m.determinant().real();
    return d > 1e-13 ? d : 0.0;
  };
  const double dets = det(a) * det(b);
  return (a * b).trace().real() + 2.0 * std::sqrt(dets);
}

}  // namespace nebcert::testing
