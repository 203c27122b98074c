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

#include "sensel/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "sensel/sampling.hpp"

namespace sensel {

SensorSet offline_greedy(const Objective& f, std::size_t k) {
  const std::size_t n = f.size();
  if (k > n) throw std::invalid_argument("greedy: k exceeds the number of sensors");
  SensorSet chosen;
  std::vector<char> taken(n, 0);
  for (std::size_t step = 0; step < k; ++step) {
    SensorId best = -1;
    double best_gain = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (taken[v]) continue;
      const double g = f.marginal_gain(chosen, static_cast<SensorId>(v));
      if (best < 0 || g > best_gain) {
        best = static_cast<SensorId>(v);
        best_gain = g;
      }
    }
    chosen.push_back(best);
    taken[best] = 1;
  }
  return chosen;
}

OptimumResult brute_force_opt(const Objective& f, std::size_t k) {
  const std::size_t n = f.size();
  if (n > kBruteForceLimit) {
    throw SizeError("brute force refused: n = " + std::to_string(n) + " exceeds " +
                    std::to_string(kBruteForceLimit));
  }
  OptimumResult best;
  bool have = false;
  SensorSet current;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > k) continue;
    current.clear();
    for (std::size_t v = 0; v < n; ++v) {
      if (mask >> v & 1U) current.push_back(static_cast<SensorId>(v));
    }
    const double value = f.evaluate(current);
    if (!have || value > best.value || (value == best.value && current < best.set)) {
      best.set = current;
      best.value = value;
      have = true;
    }
  }
  return best;
}

std::vector<double> stage_feedbacks(const Objective& f, std::span<const SensorId> choices) {
  std::vector<double> out;
  out.reserve(choices.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const double value = f.evaluate(choices.subspan(0, i + 1));
    out.push_back(value - previous);
    previous = value;
  }
  return out;
}

OgUnitRound og_unit_round(std::vector<Exp3State>& bandits, const Objective& f, Rng& rng) {
  OgUnitRound round;
  std::vector<double> used;
  for (auto& bandit : bandits) {
    if (bandit.arms() != f.size()) throw ContractViolation("bandit arms do not match objective");
    const auto p = bandit.probabilities();
    const std::size_t arm = bandit.sample(rng);
    round.choices.push_back(static_cast<SensorId>(arm));
    used.push_back(p[arm]);
  }
  round.feedbacks = stage_feedbacks(f, round.choices);
  for (std::size_t i = 0; i < bandits.size(); ++i) {
    bandits[i].update(static_cast<std::size_t>(round.choices[i]),
                      std::clamp(round.feedbacks[i], 0.0, 1.0), used[i]);
  }
  return round;
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kDog: return "dog";
    case Algorithm::kLazyDog: return "lazydog";
    case Algorithm::kOdDog: return "oddog";
  }
  return "?";
}

std::size_t no_rerun_stage_count(std::size_t k, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double exact = static_cast<double>(k) / -std::expm1(-alpha);
  return static_cast<std::size_t>(std::ceil(exact - 1e-6));
}

ResolvedParams resolve_params(const RunConfig& c) {
  if (c.n == 0) throw std::invalid_argument("n must be at least 1");
  if (c.k < 1 || c.k > c.n) throw std::invalid_argument("k must satisfy 1 <= k <= n");
  if (c.rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (!(c.alpha > 0.0) || c.alpha > kMaxPoissonMean) {
    throw std::invalid_argument("alpha must lie in (0, 64]");
  }
  if (!(c.n_estimate_factor > 0.0)) throw std::invalid_argument("n estimate factor must be positive");
  ResolvedParams p;
  const double g = c.reward_guess.value_or(static_cast<double>(c.rounds) * static_cast<double>(c.k));
  if (!(g > 0.0)) throw std::invalid_argument("reward guess must be positive");
  p.gamma = c.gamma.value_or(default_exp3_rate(c.n, g));
  p.eta = c.eta.value_or(p.gamma);
  if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (!(p.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  p.stages = (c.algorithm == Algorithm::kLazyDog && !c.rerun) ? no_rerun_stage_count(c.k, c.alpha)
                                                               : c.k;
  if (c.algorithm == Algorithm::kOdDog) {
    if (!c.costs.empty() && c.costs.size() != 1 && c.costs.size() != c.n) {
      throw std::invalid_argument("costs: give one shared value or one per sensor");
    }
    if (c.threshold_count == 0) throw std::invalid_argument("threshold grid needs at least one value");
    if (!(c.threshold_eta > 0.0)) throw std::invalid_argument("threshold eta must be positive");
  }
  return p;
}

namespace {

RunResult drive(const RunConfig& config, const ObjectiveSequence& objectives, Network& net,
                StageMode mode, const ResolvedParams& params) {
  if (objectives.universe_size() != config.n) {
    throw std::invalid_argument("objective universe size differs from n");
  }
  Rng rng(config.seed);
  net.enable_trace(config.trace);
  StageParams stage{config.alpha, params.gamma, params.eta, config.rerun, config.fixed_threshold};
  RunResult result;
  result.params = params;
  result.records.reserve(static_cast<std::size_t>(config.rounds));
  double total = 0.0;
  for (std::int64_t t = 1; t <= config.rounds; ++t) {
    const Objective& f = objectives.at(t);
    net.begin_round();
    RoundRecord rec;
    rec.round = t;
    for (std::size_t i = 0; i < params.stages; ++i) {
      const StageOutcome o = run_stage(net, i, f, mode, stage, rng);
      rec.messages += o.messages;
      rec.activations += o.activations;
      rec.boosted += o.boosted;
    }
    rec.selected = net.round_selection();
    rec.reward = f.evaluate(rec.selected);
    total += rec.reward;
    rec.average_reward = total / static_cast<double>(t);
    result.records.push_back(std::move(rec));
  }
  result.stats = net.stats();
  result.trace = net.trace();
  return result;
}

}  // namespace

RunResult dog_run(const RunConfig& config, const ObjectiveSequence& objectives) {
  RunConfig c = config;
  c.algorithm = Algorithm::kDog;
  const auto params = resolve_params(c);
  BroadcastNetwork net(c.n, params.stages, c.n_estimate_factor);
  return drive(c, objectives, net, StageMode::kDogBroadcast, params);
}

RunResult lazydog_run(const RunConfig& config, const ObjectiveSequence& objectives) {
  RunConfig c = config;
  c.algorithm = Algorithm::kLazyDog;
  const auto params = resolve_params(c);
  StarNetwork net(c.n, params.stages, c.n_estimate_factor);
  auto result = drive(c, objectives, net,
                      c.rerun ? StageMode::kLazyStar : StageMode::kLazyStarNoRerun, params);
  result.server_state_size = net.server_state_size();
  return result;
}

RunResult oddog_run(const RunConfig& config, const ObjectiveSequence& objectives) {
  RunConfig c = config;
  c.algorithm = Algorithm::kOdDog;
  const auto params = resolve_params(c);
  StarNetwork net(c.n, params.stages, c.n_estimate_factor);
  std::vector<double> costs(c.n, 0.0);
  if (c.costs.size() == 1) std::fill(costs.begin(), costs.end(), c.costs.front());
  if (c.costs.size() == c.n) costs = c.costs;
  net.enable_thresholds(threshold_grid(c.threshold_count), c.threshold_eta, costs);
  auto result = drive(c, objectives, net, StageMode::kOdDog, params);
  result.server_state_size = net.server_state_size();
  return result;
}

RunResult run(const RunConfig& config, const ObjectiveSequence& objectives) {
  switch (config.algorithm) {
    case Algorithm::kDog: return dog_run(config, objectives);
    case Algorithm::kLazyDog: return lazydog_run(config, objectives);
    case Algorithm::kOdDog: return oddog_run(config, objectives);
  }
  throw std::invalid_argument("unknown algorithm");
}

RegretReport regret_1e(std::span<const RoundRecord> records, const ObjectiveSequence& objectives,
                       std::size_t k) {
  RegretReport rep;
  rep.rounds = static_cast<std::int64_t>(records.size());
  for (const auto& r : records) rep.cumulative_reward += r.reward;
  if (records.empty()) return rep;
  const auto sum = objectives.aggregate(rep.rounds);
  const std::size_t kk = std::min(k, sum->size());
  rep.greedy_benchmark = sum->evaluate(offline_greedy(*sum, kk));
  if (sum->size() <= kBruteForceLimit) {
    rep.benchmark = brute_force_opt(*sum, kk).value;
  } else {
    rep.benchmark = rep.greedy_benchmark;
    rep.benchmark_is_proxy = true;
  }
  rep.regret = (1.0 - std::exp(-1.0)) * rep.benchmark - rep.cumulative_reward;
  rep.regret_per_round = rep.regret / static_cast<double>(rep.rounds);
  rep.greedy_ratio = rep.greedy_benchmark > 0.0 ? rep.cumulative_reward / rep.greedy_benchmark : 0.0;
  return rep;
}

}  // namespace sensel
