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
#include <vector>

#include "sensel/algorithms.hpp"
#include "sensel/metrics.hpp"
#include "sensel/scenario.hpp"

namespace sensel {

struct TrialSummary {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  double average_reward = 0.0;       // over all T rounds
  double trailing_reward = 0.0;      // over the last `window` rounds
  double messages_per_round = 0.0;
  double activations_per_round = 0.0;
  double boosted_per_round = 0.0;
  double regret_per_round = 0.0;     // (1 - 1/e) benchmark / T - average_reward
};

// Benchmarks computed once from the objective sequence over T rounds.
struct Benchmarks {
  double greedy_per_round = 0.0;     // greedy on sum_t f_t, divided by T
  double optimum_per_round = 0.0;    // brute force (or greedy proxy), divided by T
  bool optimum_is_proxy = false;
};

struct ExperimentResult {
  Benchmarks benchmarks;
  ResolvedParams params;
  std::vector<TrialSummary> trials;
  std::vector<MetricsRow> rows;      // trial-major, then round order
  std::vector<TraceEntry> trace;     // trial 0, when requested
  double mean_trailing_reward = 0.0;
  double trailing_reward_stderr = 0.0;
  double mean_regret_per_round = 0.0;
  double regret_per_round_stderr = 0.0;
};

// Seed of trial i: derive_seed(base_seed, i).
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

Benchmarks compute_benchmarks(const ObjectiveSequence& objectives, std::size_t k,
                              std::int64_t rounds);

// Runs scenario.experiment.trials independent trials of scenario.run on a
// bounded pool of scenario.experiment.jobs workers. Each trial owns its
// network and random source, so the result depends on the scenario only.
ExperimentResult run_experiment(const Scenario& scenario);

// Writes the CSV and trace files named in the scenario, if any.
void write_outputs(const Scenario& scenario, const ExperimentResult& result);

}  // namespace sensel
