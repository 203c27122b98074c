// Copyright 2026 The Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sensel/bandit.hpp"
#include "sensel/stats.hpp"
#include "sensel/types.hpp"

using namespace sensel;

namespace {

Exp3State with_weights(std::vector<double> w, double gamma, double eta = 0.1) {
  Exp3State s(w.size(), gamma, eta);
  s.set_weights(std::move(w));
  return s;
}

}  // namespace

TEST_CASE("exp3 probabilities") {
  const auto uniform = Exp3State(4, 0.2, 0.1).probabilities();
  for (double p : uniform) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));

  const auto p = with_weights({1.0, 3.0}, 0.1).probabilities();
  CHECK(p[0] == doctest::Approx(0.275).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.725).epsilon(1e-14));

  const auto explore = with_weights({1.0, 5.0}, 1.0).probabilities();
  CHECK(explore[0] == doctest::Approx(0.5));
  CHECK(explore[1] == doctest::Approx(0.5));
}

TEST_CASE("exp3 probabilities stay on the simplex with floor gamma/n") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(uniform01(rng) * 20);
    const double gamma = 0.01 + 0.9 * uniform01(rng);
    std::vector<double> w(n);
    for (auto& x : w) x = std::exp(40.0 * uniform01(rng));
    const auto p = with_weights(w, gamma).probabilities();
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : p) CHECK(x >= gamma / static_cast<double>(n) - 1e-15);
  }
}

TEST_CASE("exp3 sampling") {
  Rng rng(1);
  const Exp3State single(1, 0.3, 0.1);
  for (int i = 0; i < 100; ++i) CHECK(single.sample(rng) == 0);

  const auto s = with_weights({1.0, 3.0}, 0.1);
  constexpr std::int64_t draws = 100000;
  std::int64_t zeros = 0;
  Rng rng2(17);
  for (std::int64_t i = 0; i < draws; ++i) zeros += s.sample(rng2) == 0 ? 1 : 0;
  CHECK(stats::within_binomial_band(zeros, draws, 0.275));

  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 1000; ++i) CHECK(s.sample(a) == s.sample(b));
}

TEST_CASE("exp3 update") {
  Exp3State s(2, 0.2, 0.1);
  s.update(0, 1.0, 0.5);
  CHECK(s.weights()[0] == doctest::Approx(1.221402758).epsilon(1e-9));
  CHECK(s.weights()[0] == std::exp(0.2));
  CHECK(s.weights()[1] == 1.0);

  const auto before = s.weights();
  s.update(1, 0.0, 0.3);
  CHECK(s.weights() == before);

  CHECK_THROWS_AS(s.update(0, 1.5, 0.5), ContractViolation);
  CHECK_THROWS_AS(s.update(0, 0.5, 0.0), ContractViolation);
  CHECK_THROWS_AS(s.update(2, 0.5, 0.5), ContractViolation);
}

TEST_CASE("rescaling leaves probabilities unchanged") {
  auto s = with_weights({0.5, 2.0, 7.0, 1e-3}, 0.05);
  const auto p = s.probabilities();
  for (double c : {1e-80, 0.5, 3.0, 1e90}) {
    auto t = s;
    t.rescale(c);
    const auto q = t.probabilities();
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(q[i] - p[i]) <= 1e-12);
  }
}

TEST_CASE("overflow guard keeps long runs finite") {
  Exp3State s(3, 0.01, 5.0);
  for (int i = 0; i < 10000; ++i) s.update(0, 1.0, 0.01);
  CHECK(std::isfinite(s.weight_sum()));
  CHECK(s.weight_sum() <= kWeightOverflowGuard * 1.0000001);
  const auto p = s.probabilities();
  CHECK(p[0] == doctest::Approx(1.0 - 0.01 * 2.0 / 3.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.01 / 3.0).epsilon(1e-9));
}

TEST_CASE("exp3 learns a fixed best arm") {
  constexpr std::size_t n = 10;
  constexpr std::int64_t rounds = 100000;
  const double rate = default_exp3_rate(n, static_cast<double>(rounds));
  Exp3State s(n, rate, rate);
  Rng rng(2024);
  double total = 0.0;
  for (std::int64_t t = 0; t < rounds; ++t) {
    const auto p = s.probabilities();
    const std::size_t arm = s.sample(rng);
    const double reward = bernoulli(rng, arm == 3 ? 0.9 : 0.1) ? 1.0 : 0.0;
    total += reward;
    s.update(arm, reward, p[arm]);
  }
  CHECK(total / static_cast<double>(rounds) >= 0.9 - 0.05);
}

TEST_CASE("default rates") {
  CHECK(default_exp3_rate(10, 1e6) == doctest::Approx(std::sqrt(10 * std::log(10.0) / 1e6)));
  CHECK(default_exp3_rate(10, 1.0) == 1.0);
  CHECK(default_exp3_rate(1, 100.0) == 1.0);
}

TEST_CASE("threshold grid") {
  const auto g = threshold_grid(16);
  REQUIRE(g.size() == 16);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[1] == doctest::Approx(1.0 / 15.0));
  CHECK(threshold_grid(1) == std::vector<double>{0.0});
}

TEST_CASE("wmr selection") {
  Rng rng(5);
  WmrState one({0.5}, 1.0);
  CHECK(one.select(rng) == 0);

  constexpr std::int64_t draws = 100000;
  WmrState four(threshold_grid(4), 1.0);
  std::vector<std::int64_t> counts(4, 0);
  for (std::int64_t i = 0; i < draws; ++i) ++counts[four.select(rng)];
  for (auto c : counts) CHECK(stats::within_binomial_band(c, draws, 0.25));

  WmrState two({0.0, 1.0}, 1.0);
  const std::vector<double> psi{-0.5, 0.5};
  const std::vector<double> q{1.0, 1.0};
  two.update(psi, q, true);  // weights (e^-1/2, e^1/2), ratio e
  std::int64_t ones = 0;
  for (std::int64_t i = 0; i < draws; ++i) ones += two.select(rng) == 1 ? 1 : 0;
  const double e = std::exp(1.0);
  CHECK(stats::within_binomial_band(ones, draws, e / (1.0 + e)));
}

TEST_CASE("wmr update") {
  WmrState s({0.0, 1.0}, 1.0);
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> ones{1.0, 1.0};
  s.update(zero, ones, true);
  CHECK(s.weights() == std::vector<double>{1.0, 1.0});

  const std::vector<double> psi{1.0, -1.0};
  s.update(psi, ones, false);
  CHECK(s.weights() == std::vector<double>{1.0, 1.0});

  s.update(psi, ones, true);
  const auto p = s.probabilities();
  const double e = std::exp(1.0);
  CHECK(p[0] == doctest::Approx(e / (e + 1.0 / e)).epsilon(1e-14));
  CHECK(s.weights()[0] / s.weights()[1] == doctest::Approx(e * e).epsilon(1e-14));

  WmrState plain({0.0, 1.0}, 1.0);
  plain.update(psi, ones, true);
  CHECK(plain.weights()[0] == doctest::Approx(e).epsilon(1e-14));
  CHECK(plain.weights()[1] == doctest::Approx(1.0 / e).epsilon(1e-14));

  const std::vector<double> bad_q{1.0, 0.0};
  CHECK_THROWS_AS(plain.update(psi, bad_q, true), ContractViolation);
}

TEST_CASE("threshold reward") {
  CHECK(threshold_reward(0.8, 0.5, 0.1, 0.9, 0.5) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(threshold_reward(0.8, 0.5, 0.1, 0.9, 0.95) == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(threshold_reward(0.3, 0.5, 0.1, 0.9, 0.5) == doctest::Approx(-0.1));
  for (double own : {0.0, 0.2, 0.7}) {
    for (double other : {0.0, 0.4}) {
      CHECK(threshold_reward(own, other, 0.15, 0.5, 0.2) ==
            -threshold_reward(own, other, 0.15, 0.5, 0.8));
    }
  }
}

TEST_CASE("threshold activation probability") {
  CHECK(threshold_activation_probability(0.6, 0.5, 0.1) == 1.0);
  CHECK(threshold_activation_probability(0.5, 0.5, 0.1) == 1.0);
  CHECK(threshold_activation_probability(0.4, 0.5, 0.1) == 0.1);
}
