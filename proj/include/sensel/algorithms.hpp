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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sensel/bandit.hpp"
#include "sensel/netsim.hpp"
#include "sensel/objectives.hpp"
#include "sensel/random.hpp"

namespace sensel {

// Greedy maximization of f under |S| <= k: each step adds the element of
// V \ S with the largest marginal gain, ties to the smaller id.
SensorSet offline_greedy(const Objective& f, std::size_t k);

struct OptimumResult {
  SensorSet set;  // sorted
  double value = 0.0;
};

inline constexpr std::size_t kBruteForceLimit = 15;

// Exact max over |S| <= k. Ties go to the lexicographically smallest sorted
// id list. Throws SizeError when f.size() > 15.
OptimumResult brute_force_opt(const Objective& f, std::size_t k);

// Marginal feedback of the k stage choices: f({v_j : j <= i}) - f({v_j : j < i}).
std::vector<double> stage_feedbacks(const Objective& f, std::span<const SensorId> choices);

struct OgUnitRound {
  SensorSet choices;           // stage picks in order (may repeat)
  std::vector<double> feedbacks;
};

// One round of the centralized online greedy meta-algorithm with one EXP3
// instance per stage. Updates the bandits in place.
OgUnitRound og_unit_round(std::vector<Exp3State>& bandits, const Objective& f, Rng& rng);

enum class Algorithm { kDog, kLazyDog, kOdDog };

std::string to_string(Algorithm a);

struct RunConfig {
  std::size_t n = 0;
  std::size_t k = 1;
  std::int64_t rounds = 1;
  double alpha = 1.0;
  std::optional<double> gamma;         // default: default_exp3_rate(n, g)
  std::optional<double> eta;           // default: same as gamma
  std::optional<double> reward_guess;  // g; default T*k
  Algorithm algorithm = Algorithm::kDog;
  bool rerun = true;                   // lazyDOG / OD-DOG
  std::uint64_t seed = 1;
  double n_estimate_factor = 1.0;
  // OD-DOG
  std::vector<double> costs;           // one per sensor, or one shared value
  std::size_t threshold_count = 16;
  double threshold_eta = 0.5;
  std::optional<double> fixed_threshold;
  bool trace = false;
};

// Resolved numeric parameters of a run.
struct ResolvedParams {
  double gamma = 0.0;
  double eta = 0.0;
  std::size_t stages = 0;
};

// Validates the config (1 <= k <= n, T >= 1, gamma in (0,1], alpha > 0) and
// fills in defaults. Throws std::invalid_argument on bad input.
ResolvedParams resolve_params(const RunConfig& config);

// ceil(k / (1 - e^-alpha)), with a 1e-6 allowance so that alpha large gives k.
std::size_t no_rerun_stage_count(std::size_t k, double alpha);

struct RoundRecord {
  std::int64_t round = 0;
  SensorSet selected;
  double reward = 0.0;
  std::int64_t messages = 0;
  std::int64_t activations = 0;
  std::int64_t boosted = 0;
  double average_reward = 0.0;  // running mean up to this round
};

struct RunResult {
  std::vector<RoundRecord> records;
  MessageStats stats;
  ResolvedParams params;
  std::vector<TraceEntry> trace;
  std::size_t server_state_size = 0;  // star model only
};

// Distributed online greedy in the broadcast model.
RunResult dog_run(const RunConfig& config, const ObjectiveSequence& objectives);

// Lazy renormalization in the star model. With config.rerun every stage
// selects; otherwise the run uses no_rerun_stage_count(k, alpha) stages that
// may come back empty.
RunResult lazydog_run(const RunConfig& config, const ObjectiveSequence& objectives);

// Observation-dependent variant: sensors whose local marginal estimate reaches
// their learned threshold activate with probability 1.
RunResult oddog_run(const RunConfig& config, const ObjectiveSequence& objectives);

RunResult run(const RunConfig& config, const ObjectiveSequence& objectives);

struct RegretReport {
  double benchmark = 0.0;        // max_{|S|<=k} sum_t f_t(S) (or greedy proxy)
  bool benchmark_is_proxy = false;
  double greedy_benchmark = 0.0; // sum_t f_t(greedy on the sum)
  double cumulative_reward = 0.0;
  double regret = 0.0;           // (1 - 1/e) benchmark - cumulative reward
  double regret_per_round = 0.0;
  double greedy_ratio = 0.0;     // cumulative reward / greedy benchmark
  std::int64_t rounds = 0;
};

// (1 - 1/e)-regret of realized rewards. Brute force benchmark when n <= 15,
// else greedy on the aggregate objective, flagged as a proxy.
RegretReport regret_1e(std::span<const RoundRecord> records, const ObjectiveSequence& objectives,
                       std::size_t k);

}  // namespace sensel
