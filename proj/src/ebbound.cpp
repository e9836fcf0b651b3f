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

#include "nebcert/ebbound.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace nebcert {

namespace {

// M[j, l] = sum_ik W(2i + j, 2k + l) a(k, i), so tr[W (a (x) b)] = tr[M b].
Mat2 condition_on_first(const Mat4& w, const Mat2& a) {
  Mat2 m = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) m += a(k, i) * w.block<2, 2>(2 * i, 2 * k);
  return m;
}

// M[i, k] = sum_jl W(2i + j, 2k + l) b(l, j).
Mat2 condition_on_second(const Mat4& w, const Mat2& b) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) m(i, k) = (w.block<2, 2>(2 * i, 2 * k) * b).trace();
  return m;
}

Mat2 top_projector(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (m + m.adjoint()));
  const Eigen::Vector2cd v = es.eigenvectors().col(1);
  return v * v.adjoint();
}

Mat2 pure_from_bloch(const BlochVector& v) {
  return 0.5 * (Mat2::Identity() + v.x * pauli_x() + v.y * pauli_y() + v.z * pauli_z());
}

BlochVector bloch_of(const Mat2& m) {
  return {(m * pauli_x()).trace().real(), (m * pauli_y()).trace().real(), (m * pauli_z()).trace().real()};
}

double objective(const Mat4& w, const Mat2& a, const Mat2& b) {
  return 4.0 * (condition_on_first(w, a) * b).trace().real();
}

BlochVector random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    BlochVector v{normal(rng), normal(rng), normal(rng)};
    const double n = v.norm();
    if (n > 1e-8) return v.scaled(1.0 / n);
  }
}

struct AscentResult {
  double value;
  Mat2 a;
  Mat2 b;
  bool converged;
};

AscentResult ascend(const Mat4& w, Mat2 a, const EBBoundOptions& opt) {
  Mat2 b = top_projector(condition_on_first(w, a));
  double value = objective(w, a, b);
  for (int it = 0; it < opt.max_iterations; ++it) {
    a = top_projector(condition_on_second(w, b));
    b = top_projector(condition_on_first(w, a));
    const double next = objective(w, a, b);
    const double gain = next - value;
    value = std::max(value, next);
    if (gain < opt.tol) return {value, a, b, true};
  }
  return {value, a, b, false};
}

}  // namespace

std::string to_string(BoundMethod m) { return m == BoundMethod::Multistart ? "multistart" : "grid-oracle"; }

WitnessOperator build_witness(const PayoffTable& table) {
  WitnessOperator w;
  for (const auto& e : table.nonzero_entries()) {
    w.matrix += e.payoff * kron(table.xi_states()[e.x].as_mat2().transpose(),
                                table.psi_states()[e.y].as_mat2().transpose());
  }
  w.matrix = 0.5 * (w.matrix + w.matrix.adjoint());
  return w;
}

double product_objective(const WitnessOperator& w, const BlochVector& a, const BlochVector& b) {
  return objective(w.matrix, pure_from_bloch(a), pure_from_bloch(b));
}

EBBoundResult eb_bound(const PayoffTable& table, const EBBoundOptions& options) {
  return eb_bound(build_witness(table), options);
}

EBBoundResult eb_bound(const WitnessOperator& w, const EBBoundOptions& options) {
  if (options.restarts < 1) throw ConfigError("eb_bound needs at least one restart");
  std::mt19937_64 rng(options.seed);
  std::vector<BlochVector> starts;
  starts.reserve(options.restarts);
  for (int r = 0; r < options.restarts; ++r) starts.push_back(random_direction(rng));

  EBBoundResult best;
  best.value = -std::numeric_limits<double>::infinity();
  best.restarts = options.restarts;
  bool all_converged = true;
  bool best_converged = false;
  for (const BlochVector& start : starts) {
    const AscentResult r = ascend(w.matrix, pure_from_bloch(start), options);
    all_converged = all_converged && r.converged;
    if (r.value > best.value) {
      best.value = r.value;
      best.argmax_a = bloch_of(r.a);
      best.argmax_b = bloch_of(r.b);
      best_converged = r.converged;
    }
  }
  best.converged = all_converged;
  if (!best_converged) {
    throw ConvergenceError("separable-state optimization hit the iteration cap of " +
                               std::to_string(options.max_iterations),
                           best);
  }
  return best;
}

double eb_bound_oracle(const PayoffTable& table, int grid_n) { return eb_bound_oracle(build_witness(table), grid_n); }

double eb_bound_oracle(const WitnessOperator& w, int grid_n) {
  if (grid_n < 20) throw ConfigError("grid oracle needs grid_n >= 20");
  std::vector<BlochVector> grid;
  for (int i = 0; i <= grid_n; ++i) {
    const double theta = std::numbers::pi * i / grid_n;
    for (int j = 0; j < 2 * grid_n; ++j) {
      const double phi = std::numbers::pi * j / grid_n;
      grid.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
  }
  // tr[M rho_b] = (tr M + b . m) / 2 with m_k = tr[M sigma_k].
  double best = -std::numeric_limits<double>::infinity();
  for (const BlochVector& a : grid) {
    const Mat2 m = condition_on_first(w.matrix, pure_from_bloch(a));
    const double m0 = m.trace().real();
    const BlochVector mv = bloch_of(m);
    for (const BlochVector& b : grid) best = std::max(best, 2.0 * (m0 + b.dot(mv)));
  }
  return best;
}

}  // namespace nebcert
