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
#include <sstream>
#include <string>
#include <vector>

#include "sensel/experiment.hpp"
#include "sensel/metrics.hpp"
#include "sensel/scenario.hpp"
#include "sensel/stats.hpp"

using namespace sensel;

namespace {

constexpr const char* kTiny = R"(# small coverage run
[objective]
family = coverage
n = 8
seed = 3

[run]
algorithm = dog
k = 2
rounds = 300
seed = 11

[experiment]
trials = 3
every = 100
)";

std::string error_of(std::string_view text) {
  try {
    parse_scenario(text, "s.cfg");
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto s = parse_scenario(kTiny);
  CHECK(s.objective.family == "coverage");
  CHECK(s.objective.n == 8);
  CHECK(s.run.n == 8);
  CHECK(s.run.k == 2);
  CHECK(s.run.rounds == 300);
  CHECK(s.run.seed == 11);
  CHECK(s.run.algorithm == Algorithm::kDog);
  CHECK(s.experiment.trials == 3);
  CHECK(s.experiment.every == 100);
}

TEST_CASE("scenario errors carry the line number") {
  CHECK(error_of("[run]\nk = 2\nspeed = 3\n") == "s.cfg:3: unknown key 'speed' in [run]");
  CHECK(error_of("[run]\nk = 2\nk = 3\n").rfind("s.cfg:3:", 0) == 0);
  CHECK(error_of("[bogus]\n").rfind("s.cfg:1:", 0) == 0);
  CHECK(error_of("[run]\nk 2\n").rfind("s.cfg:2:", 0) == 0);
  CHECK(error_of("[run]\nk = two\n").rfind("s.cfg:2:", 0) == 0);
}

TEST_CASE("scenario validation names the field") {
  CHECK(error_of("[objective]\nn = 4\n[run]\nk = 5\n").find("run.k") != std::string::npos);
  CHECK(error_of("[run]\nalpha = -1\n").find("run.alpha") != std::string::npos);
  CHECK(error_of("[run]\nrounds = 0\n").find("run.rounds") != std::string::npos);
  CHECK(error_of("[objective]\nfamily = lattice\n").find("objective.family") != std::string::npos);
}

TEST_CASE("format and parse round trip") {
  auto s = parse_scenario(kTiny);
  s.run.alpha = 0.1 + 0.2;
  s.run.gamma = 1.0 / 3.0;
  const auto again = parse_scenario(format_scenario(s));
  CHECK(format_scenario(again) == format_scenario(s));
  CHECK(again.run.alpha == s.run.alpha);
  CHECK(again.run.gamma == s.run.gamma);
}

TEST_CASE("csv output") {
  const std::vector<MetricsRow> one{{0, 1, 0.5, 0.9, 3, 2, 0.1}};
  const auto text = to_csv(one);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind(kCsvHeader, 0) == 0);

  const std::vector<MetricsRow> empty;
  std::ostringstream os;
  CHECK_THROWS_AS(write_csv(empty, os), std::invalid_argument);

  CHECK_THROWS_AS(write_csv(one, std::filesystem::path("/nonexistent/dir/out.csv")),
                  std::runtime_error);
  try {
    write_csv(one, std::filesystem::path("/nonexistent/dir/out.csv"));
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("csv round trip is exact") {
  std::vector<MetricsRow> rows;
  for (int i = 0; i < 20; ++i) {
    rows.push_back({i % 3, i + 1, std::sqrt(2.0) / (i + 1), 1.0 / 3.0 + i, 7 * i, 3 * i,
                    -std::exp(-static_cast<double>(i))});
  }
  std::istringstream in(to_csv(rows));
  const auto back = read_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].trial == rows[i].trial);
    CHECK(back[i].round == rows[i].round);
    CHECK(back[i].avg_reward == rows[i].avg_reward);
    CHECK(back[i].greedy_ratio == rows[i].greedy_ratio);
    CHECK(back[i].messages_cum == rows[i].messages_cum);
    CHECK(back[i].activations_cum == rows[i].activations_cum);
    CHECK(back[i].regret_avg == rows[i].regret_avg);
  }
}

TEST_CASE("experiments are reproducible across job counts") {
  auto s = parse_scenario(kTiny);
  const auto serial = run_experiment(s);
  s.experiment.jobs = 3;
  const auto parallel = run_experiment(s);
  CHECK(to_csv(serial.rows) == to_csv(parallel.rows));
  REQUIRE(serial.trials.size() == 3);
  CHECK(serial.trials[0].seed == trial_seed(11, 0));
  CHECK(serial.trials[0].seed != serial.trials[1].seed);
  // rows at rounds 100, 200, 300 for each trial
  CHECK(serial.rows.size() == 9);
  CHECK(serial.rows.back().round == 300);
  CHECK(serial.mean_trailing_reward > 0.0);
  CHECK(serial.benchmarks.greedy_per_round > 0.0);
  CHECK_FALSE(serial.benchmarks.optimum_is_proxy);
}

TEST_CASE("running mean") {
  stats::RunningMean m;
  for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
  CHECK(m.count() == 4);
  CHECK(m.mean() == doctest::Approx(2.5));
  CHECK(m.variance() == doctest::Approx(5.0 / 3.0));
  CHECK(m.standard_error() == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("binomial band and chi-square") {
  CHECK(stats::binomial_sigma(0.5, 100) == doctest::Approx(0.05));
  CHECK(stats::within_binomial_band(50, 100, 0.5));
  CHECK_FALSE(stats::within_binomial_band(80, 100, 0.5));
  const std::vector<std::int64_t> obs{25, 25, 50};
  const std::vector<double> p{0.25, 0.25, 0.5};
  CHECK(stats::chi_square_statistic(obs, p) == doctest::Approx(0.0));
  const std::vector<std::int64_t> skew{40, 10, 50};
  CHECK(stats::chi_square_statistic(skew, p) == doctest::Approx(18.0));
  CHECK(stats::chi_square_pvalue(0.0, 2.0) == doctest::Approx(1.0));
  CHECK(stats::chi_square_pvalue(5.991464547, 2.0) == doctest::Approx(0.05).epsilon(1e-6));
}
