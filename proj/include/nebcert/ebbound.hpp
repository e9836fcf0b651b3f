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

#include <cstdint>
#include <string>

#include "nebcert/errors.hpp"
#include "nebcert/game.hpp"

namespace nebcert {

/// W = sum_xy p(0, x, y) xi_x^T (x) psi_y^T.
struct WitnessOperator {
  Mat4 matrix = Mat4::Zero();
};

WitnessOperator build_witness(const PayoffTable& table);

enum class BoundMethod { Multistart, GridOracle };

std::string to_string(BoundMethod m);

struct EBBoundOptions {
  int restarts = 64;
  double tol = 1e-10;
  int max_iterations = 500;
  std::uint64_t seed = 0x5eedULL;
};

/// Largest payoff any entanglement-breaking channel can reach on the table's
/// (possibly imperfect) question states.
struct EBBoundResult {
  /// 4 * max over product pure states a (x) b of tr[W (a (x) b)].
  double value = 0.0;
  BlochVector argmax_a;
  BlochVector argmax_b;
  BoundMethod method = BoundMethod::Multistart;
  int restarts = 0;
  bool converged = true;

  /// Value to beat for certification. A measurement that never reports
  /// b = 0 earns payoff 0 with any channel, so the bound is never below 0.
  double threshold() const { return value > 0.0 ? value : 0.0; }
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, EBBoundResult best) : Error(what), best_(best) {}
  const EBBoundResult& best() const { return best_; }

 private:
  EBBoundResult best_;
};

/// 4 * tr[W (rho_a (x) rho_b)] for qubit states with Bloch vectors a and b.
/// 4 tr[W (a (x) b)] for the pure states with Bloch vectors a and b.
double product_objective(const WitnessOperator& w, const BlochVector& a, const BlochVector& b);

/// Maximizes tr[W omega] over separable omega and scales by d^2 = 4.
///
/// The objective is linear in omega, so the maximum over the separable set is
/// attained at an extreme point, i.e. a pure product state. We therefore
/// alternate: for fixed a the best b is the top eigenvector of the 2x2
/// operator tr_A[(a (x) I) W], and vice versa. Each sweep cannot decrease the
/// objective; a restart stops when the gain drops below `tol`.
///
/// Taking W with transposed states but optimizing over untransposed product
/// states is harmless: transposition maps pure states onto pure states.
///
/// Throws ConvergenceError (carrying the best point found) when the restart
/// holding the maximum hits `max_iterations` before converging.
EBBoundResult eb_bound(const PayoffTable& table, const EBBoundOptions& options = {});
EBBoundResult eb_bound(const WitnessOperator& w, const EBBoundOptions& options = {});

/// Brute-force check: 4 * max of tr[W (a (x) b)] over a (theta, phi) grid on
/// each Bloch sphere, grid_n + 1 polar by 2 grid_n azimuthal points per side.
double eb_bound_oracle(const PayoffTable& table, int grid_n);
double eb_bound_oracle(const WitnessOperator& w, int grid_n);

}  // namespace nebcert
