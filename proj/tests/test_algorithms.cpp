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

#include "sensel/algorithms.hpp"
#include "sensel/objectives.hpp"

using namespace sensel;

namespace {

// A -> {1,2}, B -> {2,3}, C -> {3,4}, unit weights.
ObjectivePtr example_coverage() {
  return std::make_shared<CoverageObjective>(std::vector<double>{1.0, 1.0, 1.0, 1.0},
                                             std::vector<std::vector<int>>{{0, 1}, {1, 2}, {2, 3}});
}

RunConfig config(Algorithm algo, std::size_t n, std::size_t k, std::int64_t rounds,
                 std::uint64_t seed = 1) {
  RunConfig c;
  c.algorithm = algo;
  c.n = n;
  c.k = k;
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("offline greedy on the coverage example") {
  const auto f = example_coverage();
  const auto s = offline_greedy(*f, 2);
  CHECK(s == SensorSet{0, 2});
  CHECK(f->evaluate(s) == doctest::Approx(1.0));
  CHECK(offline_greedy(*f, 0).empty());
  const auto all = offline_greedy(*f, 3);
  CHECK(all.size() == 3);
  CHECK(f->evaluate(all) == doctest::Approx(1.0));
}

TEST_CASE("greedy breaks ties toward the smaller id") {
  const FunctionObjective flat(4, [](std::span<const SensorId> s) {
    return static_cast<double>(s.size()) / 4.0;
  });
  CHECK(offline_greedy(flat, 2) == SensorSet{0, 1});
}

TEST_CASE("brute force optimum") {
  const auto f = example_coverage();
  const auto opt = brute_force_opt(*f, 2);
  CHECK(opt.value == doctest::Approx(1.0));
  CHECK(opt.set == SensorSet{0, 2});
  const auto none = brute_force_opt(*f, 0);
  CHECK(none.set.empty());
  CHECK(none.value == 0.0);
  CHECK_THROWS_AS(brute_force_opt(*make_random_coverage({16, 10, 0.2, 1}), 2), SizeError);
}

TEST_CASE("greedy reaches 1 - 1/e of the optimum") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto f = make_random_coverage({10, 10, 0.2, seed});
    for (std::size_t k = 1; k <= 4; ++k) {
      const double opt = brute_force_opt(*f, k).value;
      CHECK(f->evaluate(offline_greedy(*f, k)) >= (1.0 - std::exp(-1.0)) * opt - 1e-12);
    }
  }
}

TEST_CASE("stage feedbacks are marginal gains") {
  const auto f = example_coverage();
  const std::vector<SensorId> ac{0, 2};
  CHECK(stage_feedbacks(*f, ac) == std::vector<double>{0.5, 0.5});
  const std::vector<SensorId> aa{0, 0};
  CHECK(stage_feedbacks(*f, aa) == std::vector<double>{0.5, 0.0});
  const std::vector<SensorId> abc{0, 1, 2};
  const auto fb = stage_feedbacks(*f, abc);
  CHECK(std::accumulate(fb.begin(), fb.end(), 0.0) == doctest::Approx(f->evaluate({0, 1, 2})));
}

TEST_CASE("one-stage online greedy is EXP3 on singletons") {
  const auto f = example_coverage();
  std::vector<Exp3State> bandits{Exp3State(3, 0.3, 0.2)};
  Rng rng(4);
  const auto before = bandits[0].probabilities();
  const auto round = og_unit_round(bandits, *f, rng);
  REQUIRE(round.choices.size() == 1);
  const SensorId v = round.choices[0];
  CHECK(round.feedbacks[0] == doctest::Approx(f->evaluate({v})));
  const double expected = std::exp(0.2 * round.feedbacks[0] / before[static_cast<std::size_t>(v)]);
  CHECK(bandits[0].weights()[static_cast<std::size_t>(v)] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("single sensor DOG always selects it") {
  const auto seq = ObjectiveSequence::constant(make_random_coverage({1, 10, 0.3, 1}));
  const auto r = dog_run(config(Algorithm::kDog, 1, 1, 1), seq);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].selected == SensorSet{0});
}

TEST_CASE("runs are deterministic in the seed") {
  const auto seq = ObjectiveSequence::constant(make_random_coverage({8, 10, 0.25, 2}));
  for (auto algo : {Algorithm::kDog, Algorithm::kLazyDog, Algorithm::kOdDog}) {
    CAPTURE(to_string(algo));
    const auto a = run(config(algo, 8, 2, 200, 7), seq);
    const auto b = run(config(algo, 8, 2, 200, 7), seq);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t t = 0; t < a.records.size(); ++t) {
      CHECK(a.records[t].selected == b.records[t].selected);
      CHECK(a.records[t].messages == b.records[t].messages);
    }
    const auto c = run(config(algo, 8, 2, 200, 8), seq);
    bool differs = false;
    for (std::size_t t = 0; t < a.records.size(); ++t) {
      differs = differs || a.records[t].selected != c.records[t].selected;
    }
    CHECK(differs);
  }
}

TEST_CASE("no-rerun stage count") {
  CHECK(no_rerun_stage_count(2, 1.0) == 4);
  CHECK(no_rerun_stage_count(3, 20.0) == 3);
  CHECK(no_rerun_stage_count(1, std::log(2.0)) == 2);
}

TEST_CASE("lazyDOG without rerun runs k' stages and never exceeds them") {
  const auto seq = ObjectiveSequence::constant(make_random_coverage({10, 10, 0.25, 3}));
  auto c = config(Algorithm::kLazyDog, 10, 2, 300);
  c.rerun = false;
  const auto r = lazydog_run(c, seq);
  CHECK(r.params.stages == 4);
  for (const auto& rec : r.records) CHECK(rec.selected.size() <= 4);
  CHECK(r.server_state_size == 4);
}

TEST_CASE("OD-DOG single sensor with zero cost is always selected") {
  const auto seq = ObjectiveSequence::constant(make_random_coverage({1, 10, 0.3, 4}));
  auto c = config(Algorithm::kOdDog, 1, 1, 200);
  c.costs = {0.0};
  const auto r = oddog_run(c, seq);
  for (const auto& rec : r.records) CHECK(rec.selected == SensorSet{0});
}

TEST_CASE("OD-DOG with thresholds fixed at 0 plays offline greedy") {
  const auto f = make_random_detection({9, 20, 0.9, 0.25, 5});
  const auto seq = ObjectiveSequence::constant(f);
  auto c = config(Algorithm::kOdDog, 9, 3, 50);
  c.fixed_threshold = 0.0;
  const auto greedy = offline_greedy(*f, 3);
  const auto r = oddog_run(c, seq);
  for (const auto& rec : r.records) CHECK(rec.selected == greedy);
}

TEST_CASE("regret against the optimum") {
  const auto f = example_coverage();
  const auto seq = ObjectiveSequence::constant(f);
  std::vector<RoundRecord> optimal(10);
  std::vector<RoundRecord> empty(10);
  for (std::size_t t = 0; t < 10; ++t) {
    optimal[t].round = empty[t].round = static_cast<std::int64_t>(t + 1);
    optimal[t].selected = {0, 2};
    optimal[t].reward = 1.0;
  }
  const auto good = regret_1e(optimal, seq, 2);
  CHECK(good.benchmark == doctest::Approx(10.0));
  CHECK_FALSE(good.benchmark_is_proxy);
  CHECK(good.regret <= 0.0);
  CHECK(good.greedy_ratio == doctest::Approx(1.0));
  const auto bad = regret_1e(empty, seq, 2);
  CHECK(bad.regret == doctest::Approx((1.0 - std::exp(-1.0)) * 10.0));
  CHECK(bad.regret_per_round == doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("regret uses a flagged greedy proxy above the brute force limit") {
  const auto seq = ObjectiveSequence::constant(make_random_coverage({20, 10, 0.2, 6}));
  std::vector<RoundRecord> recs(3);
  for (std::size_t t = 0; t < 3; ++t) recs[t].round = static_cast<std::int64_t>(t + 1);
  const auto rep = regret_1e(recs, seq, 2);
  CHECK(rep.benchmark_is_proxy);
  CHECK(rep.benchmark == doctest::Approx(rep.greedy_benchmark));
}

TEST_CASE("parameter validation and defaults") {
  auto c = config(Algorithm::kDog, 10, 2, 1000);
  const auto p = resolve_params(c);
  const double rate = default_exp3_rate(10, 2000.0);
  CHECK(p.gamma == doctest::Approx(rate));
  CHECK(p.eta == doctest::Approx(rate));
  CHECK(p.stages == 2);

  c.gamma = 0.3;
  CHECK(resolve_params(c).eta == doctest::Approx(0.3));

  auto bad = config(Algorithm::kDog, 10, 11, 10);
  CHECK_THROWS_AS(resolve_params(bad), std::invalid_argument);
  bad = config(Algorithm::kDog, 10, 0, 10);
  CHECK_THROWS_AS(resolve_params(bad), std::invalid_argument);
  bad = config(Algorithm::kDog, 10, 2, 0);
  CHECK_THROWS_AS(resolve_params(bad), std::invalid_argument);
  bad = config(Algorithm::kDog, 10, 2, 10);
  bad.alpha = 0.0;
  CHECK_THROWS_AS(resolve_params(bad), std::invalid_argument);
  bad.alpha = 1.0;
  bad.gamma = 1.5;
  CHECK_THROWS_AS(resolve_params(bad), std::invalid_argument);
}

TEST_CASE("DOG rewards match the objective of the selected set") {
  const auto f = make_random_coverage({8, 10, 0.25, 9});
  const auto seq = ObjectiveSequence::constant(f);
  const auto r = dog_run(config(Algorithm::kDog, 8, 3, 100), seq);
  double sum = 0.0;
  for (const auto& rec : r.records) {
    CHECK(rec.reward == doctest::Approx(f->evaluate(rec.selected)).epsilon(1e-12));
    CHECK(rec.selected.size() <= 3);
    sum += rec.reward;
  }
  CHECK(r.records.back().average_reward == doctest::Approx(sum / 100.0).epsilon(1e-12));
}
