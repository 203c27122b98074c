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

#include "sensel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sensel/random.hpp"
#include "sensel/stats.hpp"

namespace sensel {

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return derive_seed(base_seed, trial);
}

Benchmarks compute_benchmarks(const ObjectiveSequence& objectives, std::size_t k,
                              std::int64_t rounds) {
  Benchmarks b;
  const auto sum = objectives.aggregate(rounds);
  const double T = static_cast<double>(rounds);
  b.greedy_per_round = sum->evaluate(offline_greedy(*sum, k)) / T;
  if (sum->size() <= kBruteForceLimit) {
    b.optimum_per_round = brute_force_opt(*sum, k).value / T;
  } else {
    b.optimum_per_round = b.greedy_per_round;
    b.optimum_is_proxy = true;
  }
  return b;
}

namespace {

struct TrialOutput {
  TrialSummary summary;
  std::vector<MetricsRow> rows;
  std::vector<TraceEntry> trace;
};

TrialOutput run_trial(const Scenario& scenario, const ObjectiveSequence& objectives,
                      const Benchmarks& bench, std::size_t trial) {
  RunConfig config = scenario.run;
  config.seed = trial_seed(scenario.run.seed, trial);
  config.trace = trial == 0 && scenario.experiment.trace.has_value();
  RunResult result = run(config, objectives);

  const double scaled_opt = (1.0 - std::exp(-1.0)) * bench.optimum_per_round;
  TrialOutput out;
  out.summary.trial = static_cast<std::int64_t>(trial);
  out.summary.seed = config.seed;
  const auto& recs = result.records;
  const std::int64_t T = config.rounds;
  const std::int64_t window = std::min(scenario.experiment.window, T);
  const std::int64_t every = scenario.experiment.every;
  std::int64_t messages = 0;
  std::int64_t activations = 0;
  std::int64_t boosted = 0;
  double trailing = 0.0;
  for (const auto& r : recs) {
    messages += r.messages;
    activations += r.activations;
    boosted += r.boosted;
    if (r.round > T - window) trailing += r.reward;
    if (r.round % every == 0 || r.round == T) {
      MetricsRow row;
      row.trial = static_cast<std::int64_t>(trial);
      row.round = r.round;
      row.avg_reward = r.average_reward;
      row.greedy_ratio =
          bench.greedy_per_round > 0.0 ? r.average_reward / bench.greedy_per_round : 0.0;
      row.messages_cum = messages;
      row.activations_cum = activations;
      row.regret_avg = scaled_opt - r.average_reward;
      out.rows.push_back(row);
    }
  }
  const double Td = static_cast<double>(T);
  out.summary.average_reward = recs.back().average_reward;
  out.summary.trailing_reward = trailing / static_cast<double>(window);
  out.summary.messages_per_round = static_cast<double>(messages) / Td;
  out.summary.activations_per_round = static_cast<double>(activations) / Td;
  out.summary.boosted_per_round = static_cast<double>(boosted) / Td;
  out.summary.regret_per_round = scaled_opt - out.summary.average_reward;
  out.trace = std::move(result.trace);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const Scenario& scenario) {
  Scenario checked = scenario;
  validate_scenario(checked);
  const ObjectiveSequence objectives = build_sequence(checked.objective);

  ExperimentResult result;
  result.params = resolve_params(checked.run);
  result.benchmarks = compute_benchmarks(objectives, checked.run.k, checked.run.rounds);

  const std::size_t trials = checked.experiment.trials;
  const std::size_t workers = std::min(checked.experiment.jobs, trials);
  std::vector<TrialOutput> outputs(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        outputs[i] = run_trial(checked, objectives, result.benchmarks, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(trials);
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  stats::RunningMean trailing;
  stats::RunningMean regret;
  for (auto& o : outputs) {
    trailing.add(o.summary.trailing_reward);
    regret.add(o.summary.regret_per_round);
    result.trials.push_back(o.summary);
    result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
  }
  result.trace = std::move(outputs.front().trace);
  result.mean_trailing_reward = trailing.mean();
  result.trailing_reward_stderr = trailing.standard_error();
  result.mean_regret_per_round = regret.mean();
  result.regret_per_round_stderr = regret.standard_error();
  return result;
}

void write_outputs(const Scenario& scenario, const ExperimentResult& result) {
  if (scenario.experiment.output) write_csv(result.rows, *scenario.experiment.output);
  if (scenario.experiment.trace) {
    const auto& path = *scenario.experiment.trace;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    write_trace(result.trace, out);
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
  }
}

}  // namespace sensel
