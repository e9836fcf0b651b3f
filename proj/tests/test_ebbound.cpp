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

#include <doctest.h>

#include <cmath>
#include <random>

#include "nebcert/ebbound.hpp"
#include "nebcert/errors.hpp"
#include "test_util.hpp"

using namespace nebcert;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

PayoffTable single_entry_table(const StateLabel& x, const StateLabel& y, double value) {
  return PayoffTable({x}, {ideal_state(x)}, {y}, {ideal_state(y)}, Eigen::MatrixXd::Constant(1, 1, value));
}

Mat2 transposed(const DensityMatrix& d) { return d.as_mat2().transpose(); }

}  // namespace

TEST_CASE("build_witness examples") {
  const PayoffTable t = ideal_six_state_table();
  const WitnessOperator w = build_witness(t);
  CHECK(max_diff(w.matrix, w.matrix.adjoint()) < 1e-12);

  // Independent assembly from the table's own entries.
  Mat4 expect = Mat4::Zero();
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      expect += t.payoff(x, y) * kron(transposed(t.xi_states()[x]), transposed(t.psi_states()[y]));
  CHECK(max_diff(w.matrix, expect) < 1e-15);

  // For the identity channel the joint effect is the singlet projector.
  CHECK((w.matrix * singlet_projector()).trace().real() == doctest::Approx(0.5).epsilon(1e-12));

  const PayoffTable empty({}, {}, {}, {}, Eigen::MatrixXd(0, 0));
  CHECK(build_witness(empty).matrix.isZero());

  const WitnessOperator single = build_witness(single_entry_table({Basis::Z, 0}, {Basis::Z, 0}, 1.0));
  Mat4 p00 = Mat4::Zero();
  p00(0, 0) = 1.0;
  CHECK(max_diff(single.matrix, p00) < 1e-15);
}

TEST_CASE("witness reproduces ideal_payoff through the pulled-back singlet effect") {
  // P(xi, psi) = tr[(xi (x) psi) S] with S = (N^dag (x) id)(Psi-), so the
  // payoff is tr[W S^T].
  std::mt19937_64 rng(31);
  for (int k = 0; k < 50; ++k) {
    const PayoffTable t = testing::random_table(rng);
    const Channel ch = testing::random_channel(rng, 2);
    Mat4 s = Mat4::Zero();
    for (const Mat2& op : ch.kraus_ops()) {
      const Mat4 big = kron(op, Mat2::Identity());
      s += big.adjoint() * singlet_projector() * big;
    }
    const double via_witness = (build_witness(t).matrix * s.transpose()).trace().real();
    CHECK(via_witness == doctest::Approx(ideal_payoff(ch, t)).epsilon(1e-10));
  }
}

TEST_CASE("eb_bound vanishes for ideal tables") {
  for (const PayoffTable& t : {ideal_six_state_table(), ideal_four_state_table()}) {
    const EBBoundResult r = eb_bound(t);
    CHECK(std::abs(r.value) <= 1e-6);
    CHECK(r.converged);
    CHECK(r.method == BoundMethod::Multistart);
    CHECK(eb_bound_oracle(t, 60) <= 1e-3);
  }
}

TEST_CASE("eb_bound on a single projector entry") {
  const PayoffTable t = single_entry_table({Basis::Z, 0}, {Basis::Z, 0}, 1.0);
  const EBBoundResult r = eb_bound(t);
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.argmax_a.z == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.argmax_b.z == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eb_bound_oracle(t, 20) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("reported value matches the objective at the argmax") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const PayoffTable t = testing::random_table(rng);
    const EBBoundResult r = eb_bound(t);
    CHECK(std::abs(r.value - product_objective(build_witness(t), r.argmax_a, r.argmax_b)) < 1e-9);
    CHECK(r.argmax_a.norm() == doctest::Approx(1.0));
    CHECK(r.argmax_b.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("multistart never loses to the grid oracle") {
  std::mt19937_64 rng(123);
  const int grid_n = 40;
  for (int k = 0; k < 50; ++k) {
    const PayoffTable t = testing::random_table(rng);
    const double opt = eb_bound(t).value;
    const double grid = eb_bound_oracle(t, grid_n);
    CHECK(grid <= opt + 1e-9);
    CHECK(grid >= opt - 3.0 / grid_n * t.payoff().cwiseAbs().sum());
  }
}

TEST_CASE("eb_bound is invariant under local unitaries on the question states") {
  std::mt19937_64 rng(64);
  for (int k = 0; k < 20; ++k) {
    const PayoffTable t = testing::random_table(rng);
    const Mat2 u = testing::random_unitary(2, rng);
    const Mat2 v = testing::random_unitary(2, rng);
    std::vector<DensityMatrix> xi, psi;
    for (const auto& s : t.xi_states()) xi.emplace_back(Mat2(u * s.as_mat2() * u.adjoint()));
    for (const auto& s : t.psi_states()) psi.emplace_back(Mat2(v * s.as_mat2() * v.adjoint()));
    CHECK(std::abs(eb_bound(t).value - eb_bound(t.with_states(xi, psi)).value) < 1e-6);
  }
}

TEST_CASE("eb_bound bounds every measure-and-prepare channel") {
  std::mt19937_64 rng(9001);
  for (int ti = 0; ti < 10; ++ti) {
    const PayoffTable t = testing::random_table(rng);
    const double bound = eb_bound(t).value;
    for (int ci = 0; ci < 100; ++ci) {
      const Channel ch = from_eb_spec(testing::random_eb_spec(rng));
      CHECK(ideal_payoff(ch, t) <= bound + 1e-7);
    }
  }
}

TEST_CASE("eb_bound is deterministic for a fixed seed") {
  std::mt19937_64 rng(1);
  const PayoffTable t = testing::random_table(rng);
  const EBBoundResult a = eb_bound(t);
  const EBBoundResult b = eb_bound(t);
  CHECK(a.value == b.value);
  CHECK(a.argmax_a.x == b.argmax_a.x);
}

TEST_CASE("threshold clamps negative bounds at zero") {
  EBBoundResult r;
  r.value = -0.02;
  CHECK(r.threshold() == 0.0);
  r.value = 0.047;
  CHECK(r.threshold() == 0.047);
}

TEST_CASE("option and argument validation") {
  const PayoffTable t = ideal_six_state_table();
  EBBoundOptions bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(eb_bound(t, bad), ConfigError);
  CHECK_THROWS_AS(eb_bound_oracle(t, 19), ConfigError);
}

TEST_CASE("iteration cap raises ConvergenceError with the best value") {
  std::mt19937_64 rng(2);
  const PayoffTable t = testing::random_table(rng);
  EBBoundOptions opts;
  opts.max_iterations = 1;
  opts.tol = -1.0;
  try {
    eb_bound(t, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK_FALSE(e.best().converged);
    CHECK(e.best().value <= eb_bound(t).value + 1e-12);
  }
}
