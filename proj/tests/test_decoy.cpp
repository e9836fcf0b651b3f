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
#include <functional>
#include <map>
#include <random>

#include "nebcert/decoy.hpp"
#include "nebcert/errors.hpp"
#include "test_util.hpp"

using namespace nebcert;

namespace {

constexpr int kTrunc = 20;

// Direct double sum with factorials from tgamma, independent of the
// recurrence used by expected_gain.
double poisson_gain(double a, double b, const Eigen::MatrixXd& y) {
  double s = 0.0;
  for (int n = 0; n <= kTrunc; ++n)
    for (int m = 0; m <= kTrunc; ++m)
      s += std::pow(a, n) * std::pow(b, m) / (std::tgamma(n + 1.0) * std::tgamma(m + 1.0)) * y(n, m);
  return std::exp(-a - b) * s;
}

double tail_mass(double a, double b) {
  double ca = 0.0, cb = 0.0;
  for (int n = 0; n <= kTrunc; ++n) {
    ca += std::exp(-a) * std::pow(a, n) / std::tgamma(n + 1.0);
    cb += std::exp(-b) * std::pow(b, n) / std::tgamma(n + 1.0);
  }
  return std::max(0.0, 1.0 - ca * cb);
}

std::array<double, 7> synth_gains(const Eigen::MatrixXd& y, const IntensitySet& s) {
  std::array<double, 7> q{};
  for (std::size_t i = 0; i < kIntensityPairs.size(); ++i) {
    const auto [a, b] = intensities_of(kIntensityPairs[i], s);
    q[i] = poisson_gain(a, b, y);
  }
  return q;
}

Eigen::MatrixXd random_yields(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd y(kTrunc + 1, kTrunc + 1);
  for (int n = 0; n <= kTrunc; ++n)
    for (int m = 0; m <= kTrunc; ++m) y(n, m) = u(rng);
  return y;
}

GainRecord record_for(const PayoffTable& t, const IntensitySet& s, const std::function<double(int, int, IntensityPair)>& f) {
  GainRecord r(s);
  for (const auto& e : t.nonzero_entries())
    for (IntensityPair p : kIntensityPairs) r.set(e.x_label, e.y_label, p, GainEntry::exact(f(e.x, e.y, p)));
  return r;
}

}  // namespace

TEST_CASE("IntensitySet validation") {
  CHECK_NOTHROW(IntensitySet{}.validate());
  CHECK_THROWS_AS((IntensitySet{0.1, 0.1, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((IntensitySet{0.1, 0.2, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((IntensitySet{0.2, 0.1, -0.1}.validate()), ConfigError);
  CHECK_THROWS_AS((IntensitySet{0.2, 0.1, 0.1}.validate()), ConfigError);
  CHECK_THROWS_AS((IntensitySet{NAN, 0.1, 0.0}.validate()), ConfigError);
}

TEST_CASE("expected_gain examples") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(kTrunc + 1, kTrunc + 1);
  CHECK(expected_gain(0.2, 0.1, zero).gain == 0.0);

  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(kTrunc + 1, kTrunc + 1);
  const GainExpansion vac = expected_gain(0.0, 0.0, ones);
  CHECK(vac.gain == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(vac.tail_bound == 0.0);

  Eigen::MatrixXd y11 = zero;
  y11(1, 1) = 0.5;
  CHECK(expected_gain(0.1, 0.1, y11).gain == doctest::Approx(std::exp(-0.2) * 0.01 * 0.5).epsilon(1e-14));
  CHECK(expected_gain(0.1, 0.1, y11).gain == doctest::Approx(0.0040937).epsilon(1e-5));

  CHECK_THROWS_AS(expected_gain(-0.1, 0.1, zero), ConfigError);
  CHECK_THROWS_AS(expected_gain(0.1, 0.1, Eigen::MatrixXd::Zero(5, 5)), ConfigError);
}

TEST_CASE("expected_gain agrees with a direct Poisson sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Eigen::MatrixXd y = random_yields(rng);
    const double ax = a(rng), ay = a(rng);
    const GainExpansion g = expected_gain(ax, ay, y, kTrunc);
    CHECK(std::abs(g.gain - poisson_gain(ax, ay, y)) < 1e-13);
    CHECK(g.tail_bound == doctest::Approx(tail_mass(ax, ay)).epsilon(1e-6));
    CHECK(g.tail_bound < 1e-15);
  }
}

TEST_CASE("y11 bounds examples") {
  const IntensitySet s{0.2, 0.05, 0.0};
  const std::array<double, 7> zero{};
  const YieldInterval iv = y11_interval(zero, s);
  CHECK(iv.lower == 0.0);
  CHECK(iv.upper > 0.0);  // gap term is positive
  CHECK(y11_upper_gap(s) > 0.0);

  CHECK_THROWS_AS(y11_interval(zero, IntensitySet{0.2, 0.2, 0.0}), ConfigError);
}

TEST_CASE("y11 lower bound is exact when only cancelled yields and Y11 are present") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const IntensitySet s{0.2, 0.05, 0.0};
  for (int k = 0; k < 50; ++k) {
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(kTrunc + 1, kTrunc + 1);
    for (int n = 0; n <= kTrunc; ++n) {
      y(n, 0) = u(rng);
      y(0, n) = u(rng);
    }
    y(1, 1) = u(rng);
    y(1, 2) = u(rng);
    y(2, 1) = u(rng);
    const YieldInterval iv = y11_interval(synth_gains(y, s), s);
    CHECK(std::abs(iv.raw_lower - y(1, 1)) < 1e-9);
  }
}

TEST_CASE("y11 sandwich on random yield maps") {
  std::mt19937_64 rng(200);
  for (const IntensitySet& s : {IntensitySet{0.2, 0.05, 0.0}, IntensitySet{0.2, 0.01, 0.0}, IntensitySet{0.5, 0.1, 0.0}}) {
    for (int k = 0; k < 200; ++k) {
      const Eigen::MatrixXd y = random_yields(rng);
      const double eps = tail_mass(s.mu, s.mu) + 1e-9;
      const YieldInterval iv = y11_interval(synth_gains(y, s), s);
      CHECK(iv.lower - eps <= y(1, 1));
      CHECK(y(1, 1) <= iv.upper + eps);
    }
  }
  // Extreme case from the examples: every higher-order yield saturated.
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(kTrunc + 1, kTrunc + 1);
  for (int n = 2; n <= kTrunc; ++n)
    for (int m = 2; m <= kTrunc; ++m) y(n, m) = 1.0;
  y(1, 1) = 0.3;
  const IntensitySet s{0.2, 0.05, 0.0};
  const YieldInterval iv = y11_interval(synth_gains(y, s), s);
  CHECK(iv.lower <= 0.3 + 1e-9);
  CHECK(iv.upper >= 0.3 - 1e-9);
}

TEST_CASE("y11 lower weights reproduce the J combination") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.01);
  const IntensitySet s{0.2, 0.01, 0.0};
  const auto w = y11_lower_weights(s);
  for (int k = 0; k < 20; ++k) {
    std::array<double, 7> q{};
    for (auto& v : q) v = u(rng);
    double lin = 0.0;
    for (int i = 0; i < 7; ++i) lin += w[i] * q[i];
    CHECK(lin == doctest::Approx(y11_interval(q, s).raw_lower).epsilon(1e-9));
  }
}

TEST_CASE("y11_bounds over a record") {
  const PayoffTable t = ideal_six_state_table();
  const IntensitySet s{0.2, 0.05, 0.0};
  const GainRecord zeros = record_for(t, s, [](int, int, IntensityPair) { return 0.0; });
  const YieldBounds b = y11_bounds(zeros, s);
  CHECK(b.size() == t.nonzero_entries().size());
  for (const auto& [k, iv] : b) {
    CHECK(iv.lower == 0.0);
    CHECK(iv.lower <= iv.upper);
  }
  CHECK_THROWS_AS(y11_bounds(zeros, IntensitySet{0.2, 0.01, 0.0}), ConfigError);
  CHECK_THROWS_AS(y11_bounds(zeros, IntensitySet{0.2, 0.05, 0.01}), ConfigError);

  const GainRecord extreme = record_for(t, s, [](int, int, IntensityPair p) {
    return p == IntensityPair::NuNu ? 1.0 : 0.0;
  });
  for (const auto& [k, iv] : y11_bounds(extreme, s)) {
    CHECK(iv.lower == 1.0);
    CHECK(iv.upper == 1.0);
  }
}

TEST_CASE("payoff_lower_bound examples") {
  const PayoffTable t = ideal_six_state_table();
  for (double p : {0.0, 0.1, 0.37}) {
    YieldBounds b;
    for (const auto& e : t.nonzero_entries()) b[{e.x_label, e.y_label}] = {p, p, p, p};
    CHECK(payoff_lower_bound(b, t) == doctest::Approx(-p).epsilon(1e-14));
  }
  YieldBounds ideal;
  for (const auto& e : t.nonzero_entries()) {
    const double q = ideal_probability(Channel::identity(), t.xi_states()[e.x], t.psi_states()[e.y]);
    ideal[{e.x_label, e.y_label}] = {q, q, q, q};
  }
  CHECK(payoff_lower_bound(ideal, t) == doctest::Approx(0.5).epsilon(1e-12));

  YieldBounds partial = ideal;
  partial.erase(partial.begin());
  CHECK_THROWS_AS(payoff_lower_bound(partial, t), ConfigError);
}

TEST_CASE("payoff lower bound never exceeds the single-photon payoff it bounds") {
  std::mt19937_64 rng(55);
  const PayoffTable t = ideal_six_state_table();
  const IntensitySet s{0.2, 0.05, 0.0};
  for (int k = 0; k < 20; ++k) {
    std::map<std::pair<int, int>, Eigen::MatrixXd> ys;
    double truth = 0.0, eps = 0.0;
    for (const auto& e : t.nonzero_entries()) {
      ys[{e.x, e.y}] = random_yields(rng);
      truth += e.payoff * ys[{e.x, e.y}](1, 1);
      eps += std::abs(e.payoff) * (tail_mass(s.mu, s.mu) + 1e-9);
    }
    const GainRecord r = record_for(t, s, [&](int x, int y, IntensityPair p) {
      const auto [a, b] = intensities_of(p, s);
      return poisson_gain(a, b, ys[{x, y}]);
    });
    CHECK(payoff_lower_bound(y11_bounds(r, s), t) <= truth + eps);
  }
}

TEST_CASE("GainRecord bookkeeping") {
  GainRecord r(IntensitySet{});
  const StateLabel z0{Basis::Z, 0};
  CHECK_THROWS_AS(r.set(z0, z0, IntensityPair::MuMu, GainEntry::exact(1.5)), ConfigError);
  CHECK_THROWS_AS(r.set(z0, z0, IntensityPair::MuMu, GainEntry{0.5, 10, 3}), ConfigError);
  CHECK_THROWS_AS(GainEntry::counted(10, 11), ConfigError);
  r.set(z0, z0, IntensityPair::MuMu, GainEntry::counted(1000, 7));
  CHECK(r.at(z0, z0, IntensityPair::MuMu).gain == 0.007);
  CHECK(r.find(z0, z0, IntensityPair::NuNu) == nullptr);
  CHECK_THROWS_AS(r.at(z0, z0, IntensityPair::NuNu), ConfigError);
  CHECK_THROWS_AS(r.require_complete(ideal_four_state_table()), ConfigError);
}

TEST_CASE("certify examples") {
  const PayoffTable t = ideal_six_state_table();
  const IntensitySet s{0.2, 0.05, 0.0};
  const EBBoundResult bound = eb_bound(t);

  // Ideal single-photon statistics: Y11 equals the singlet overlap, every
  // other yield vanishes.
  const GainRecord ideal = record_for(t, s, [&](int x, int y, IntensityPair p) {
    const auto [a, b] = intensities_of(p, s);
    return std::exp(-a - b) * a * b *
           ideal_probability(Channel::identity(), t.xi_states()[x], t.psi_states()[y]);
  });
  const CertificationVerdict v = certify(ideal, s, t, bound);
  // Negative-payoff settings use the upper bound Y11 + gap; their weights sum to -2.
  CHECK(v.payoff_lower == doctest::Approx(0.5 - 2.0 * y11_upper_gap(s)).epsilon(1e-9));
  CHECK(v.certified);
  CHECK(v.eb_bound == bound.threshold());

  const GainRecord zeros = record_for(t, s, [](int, int, IntensityPair) { return 0.0; });
  const CertificationVerdict z = certify(zeros, s, t, bound);
  CHECK(z.payoff_lower <= 0.0);
  CHECK_FALSE(z.certified);
  CHECK(z.std_error == 0.0);
}

TEST_CASE("certify propagates binomial errors") {
  const PayoffTable t = ideal_four_state_table();
  const IntensitySet s{0.2, 0.05, 0.0};
  const GainRecord exact = record_for(t, s, [&](int x, int y, IntensityPair p) {
    const auto [a, b] = intensities_of(p, s);
    return 0.01 + std::exp(-a - b) * a * b * ideal_probability(Channel::identity(), t.xi_states()[x], t.psi_states()[y]);
  });
  const EBBoundResult bound = eb_bound(t);
  CHECK(certify(exact, s, t, bound).std_error == 0.0);
  const double se1 = certify(exact, s, t, bound, {1'000'000}).std_error;
  const double se4 = certify(exact, s, t, bound, {4'000'000}).std_error;
  CHECK(se1 > 0.0);
  CHECK(se1 / se4 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("raw gain payoff") {
  const PayoffTable t = ideal_six_state_table();
  const IntensitySet s{0.2, 0.05, 0.0};
  const GainRecord r = record_for(t, s, [](int, int, IntensityPair p) { return p == IntensityPair::MuMu ? 0.1 : 0.0; });
  CHECK(raw_gain_payoff(r, t) == doctest::Approx(-0.1));
}
