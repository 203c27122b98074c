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

#include "sensel/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sensel/algorithms.hpp"
#include "sensel/experiment.hpp"
#include "sensel/metrics.hpp"
#include "sensel/netsim.hpp"
#include "sensel/objectives.hpp"
#include "sensel/sampling.hpp"
#include "sensel/scenario.hpp"
#include "sensel/stats.hpp"

namespace sensel::checks {

namespace {

constexpr double kZ = 3.0;           // width of statistical bands, in sigmas
constexpr double kSignificance = 1e-3;
const double kE = std::exp(1.0);

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::int64_t scaled(std::int64_t base, const CheckOptions& o) {
  const auto n = static_cast<std::int64_t>(std::llround(static_cast<double>(base) * o.scale));
  return std::max<std::int64_t>(std::min<std::int64_t>(base, 1000), n);
}

CheckResult result(int criterion, std::string name, bool passed, std::string detail) {
  return {criterion, std::move(name), passed, std::move(detail)};
}

// f(S) = 0 everywhere: stages never change any weight, so repeated stages
// sample from one frozen distribution.
std::shared_ptr<const Objective> zero_objective(std::size_t n) {
  return std::make_shared<FunctionObjective>(
      n, [](std::span<const SensorId>) { return 0.0; }, "zero");
}

}  // namespace

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  for (auto& x : p) x = -std::log1p(-uniform01(rng));
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= sum;
  return p;
}

std::vector<double> simple_protocol_exact(const std::vector<double>& p) {
  const std::size_t n = p.size();
  if (n > 20) throw std::invalid_argument("simple_protocol_exact: at most 20 sensors");
  std::vector<double> out(n, 0.0);
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    double prob = 1.0;
    for (std::size_t v = 0; v < n; ++v) prob *= (mask >> v & 1U) ? p[v] : 1.0 - p[v];
    const double share = prob / std::popcount(mask);
    for (std::size_t v = 0; v < n; ++v) {
      if (mask >> v & 1U) out[v] += share;
    }
  }
  return out;
}

std::vector<CheckResult> pms_selection_law(const CheckOptions& o) {
  constexpr std::size_t n = 8;
  constexpr double alpha = 1.0;
  Rng rng(derive_seed(o.seed, 1));
  const auto p = random_simplex(n, rng);
  const std::int64_t trials = scaled(200000, o);
  std::vector<std::int64_t> counts(n, 0);
  std::int64_t none = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto out = pms_protocol(p, alpha, rng);
    if (out.selected) {
      ++counts[static_cast<std::size_t>(*out.selected)];
    } else {
      ++none;
    }
  }
  double worst = 0.0;
  bool ok = true;
  for (std::size_t v = 0; v < n; ++v) {
    const double expected = -std::expm1(-alpha) * p[v];
    const double freq = static_cast<double>(counts[v]) / static_cast<double>(trials);
    worst = std::max(worst, std::abs(freq - expected) / stats::binomial_sigma(expected, trials));
    ok = ok && stats::within_binomial_band(counts[v], trials, expected, kZ);
  }
  const double p_none = std::exp(-alpha);
  const double f_none = static_cast<double>(none) / static_cast<double>(trials);
  return {
      result(1, "PMS P{selected = v} = (1 - e^-1) p_v", ok,
             format("n=%zu, %lld trials, max |z| = %.3f", n, static_cast<long long>(trials), worst)),
      result(1, "PMS P{none} = e^-1", stats::within_binomial_band(none, trials, p_none, kZ),
             format("empirical %.5f vs %.5f (3 sigma = %.5f)", f_none, p_none,
                    kZ * stats::binomial_sigma(p_none, trials))),
  };
}

std::vector<CheckResult> pms_message_budget(const CheckOptions& o) {
  constexpr std::size_t n = 8;
  constexpr double alpha = 1.0;
  Rng rng(derive_seed(o.seed, 2));
  const auto p = random_simplex(n, rng);
  const std::int64_t trials = scaled(200000, o);
  stats::RunningMean acts;
  for (std::int64_t i = 0; i < trials; ++i) {
    acts.add(static_cast<double>(pms_protocol(p, alpha, rng).activations));
  }
  const double bound = alpha + kZ * acts.standard_error();
  return {result(2, "PMS mean activations <= alpha", acts.mean() <= bound,
                 format("mean %.5f <= %.5f (alpha + 3 sigma)", acts.mean(), bound))};
}

std::vector<CheckResult> rerun_activation_bound(const CheckOptions& o) {
  constexpr double alpha = 1.0;
  std::vector<CheckResult> out;
  {
    Rng rng(derive_seed(o.seed, 3));
    const auto p = random_simplex(8, rng);
    const std::int64_t trials = scaled(200000, o);
    stats::RunningMean acts;
    for (std::int64_t i = 0; i < trials; ++i) {
      acts.add(static_cast<double>(pms_until_selected(p, alpha, rng).activations));
    }
    const double limit = kE / (kE - 1.0);
    const double bound = limit + kZ * acts.standard_error();
    out.push_back(result(3, "rerun PMS mean activations <= e/(e-1)", acts.mean() <= bound,
                         format("mean %.5f <= %.5f (1.58198 + 3 sigma)", acts.mean(), bound)));
  }
  {
    RunConfig config;
    config.n = 10;
    config.k = 3;
    config.rounds = scaled(200000, o) / 3;
    config.seed = derive_seed(o.seed, 4);
    const auto f = make_random_coverage({config.n, 10, 0.25, derive_seed(o.seed, 5)});
    const auto res = dog_run(config, ObjectiveSequence::constant(f));
    stats::RunningMean per_stage;
    for (const auto& r : res.records) {
      per_stage.add(static_cast<double>(r.messages) / static_cast<double>(config.k));
    }
    const double limit = kE / (kE - 1.0) + 2.0;
    const double bound = limit + kZ * per_stage.standard_error();
    out.push_back(result(3, "DOG broadcasts per stage <= e/(e-1) + 2", per_stage.mean() <= bound,
                         format("mean %.5f <= %.5f (3.58198 + 3 sigma), %lld stages",
                                per_stage.mean(), bound,
                                static_cast<long long>(config.rounds * 3))));
  }
  return out;
}

std::vector<CheckResult> simple_protocol_ratio(const CheckOptions& o) {
  const std::vector<double> p{0.01, 0.99};
  const double exact = simple_protocol_exact(p)[0];
  Rng rng(derive_seed(o.seed, 6));
  const std::int64_t trials = scaled(200000, o);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto out = simple_protocol(p, rng);
    if (out.selected && *out.selected == 0) ++hits;
  }
  const double ratio = static_cast<double>(hits) / static_cast<double>(trials) / p[0];
  const double sigma = stats::binomial_sigma(exact, trials) / p[0];
  const double oracle = exact / p[0];
  return {
      result(4, "simple protocol p1_hat/p1 matches enumeration",
             std::abs(ratio - oracle) <= kZ * sigma,
             format("ratio %.5f vs oracle %.5f (3 sigma = %.5f)", ratio, oracle, kZ * sigma)),
      result(4, "simple protocol p1_hat/p1 >= 1/2", ratio >= 0.5 - kZ * sigma,
             format("ratio %.5f >= %.5f", ratio, 0.5 - kZ * sigma)),
  };
}

std::vector<CheckResult> distribution_equivalence(const CheckOptions& o) {
  constexpr std::size_t n = 16;
  constexpr double gamma = 0.1;
  constexpr double alpha = 1.0;
  const std::int64_t trials = scaled(200000, o);
  Rng setup(derive_seed(o.seed, 7));
  std::vector<double> log_w(n);
  for (auto& x : log_w) x = 3.0 * uniform01(setup);
  std::vector<double> w(n);
  std::transform(log_w.begin(), log_w.end(), w.begin(), [](double x) { return std::exp(x); });
  const double log_z = std::log(std::accumulate(w.begin(), w.end(), 0.0));
  Exp3State central(n, gamma, gamma);
  central.set_weights(w);
  const auto expected = central.probabilities();
  const auto zero = zero_objective(n);
  const StageParams params{alpha, gamma, gamma, true, std::nullopt};

  auto verdict = [&](const std::vector<std::int64_t>& counts, const char* name) {
    const double chi2 = stats::chi_square_statistic(counts, expected);
    const double pvalue = stats::chi_square_pvalue(chi2, static_cast<double>(n - 1));
    return result(5, name, pvalue >= kSignificance,
                  format("chi2 = %.2f, dof %zu, p = %.4f (needs >= 0.001), %lld trials", chi2,
                         n - 1, pvalue, static_cast<long long>(trials)));
  };

  std::vector<CheckResult> out;
  {
    BroadcastNetwork net(n, 1);
    for (std::size_t v = 0; v < n; ++v) {
      net.nodes()[v].log_weights[0] = log_w[v];
      net.nodes()[v].log_normalizers[0] = log_z;
    }
    Rng rng(derive_seed(o.seed, 8));
    std::vector<std::int64_t> counts(n, 0);
    for (std::int64_t i = 0; i < trials; ++i) {
      net.begin_round();
      const auto s = run_stage(net, 0, *zero, StageMode::kDogBroadcast, params, rng);
      ++counts[static_cast<std::size_t>(s.selected.value())];
    }
    out.push_back(verdict(counts, "broadcast PMS-until-selected matches EXP3 law"));
  }
  {
    StarNetwork net(n, 1);
    net.set_server_log_normalizer(0, log_z);
    for (std::size_t v = 0; v < n; ++v) net.nodes()[v].log_weights[0] = log_w[v];
    Rng rng(derive_seed(o.seed, 9));
    std::vector<std::int64_t> counts(n, 0);
    for (std::int64_t i = 0; i < trials; ++i) {
      // Fresh stale lower bounds every trial.
      for (auto& node : net.nodes()) {
        node.log_normalizers[0] = log_z + std::log(0.25 + 0.75 * uniform01(rng));
      }
      net.begin_round();
      const auto s = run_stage(net, 0, *zero, StageMode::kLazyStar, params, rng);
      ++counts[static_cast<std::size_t>(s.selected.value())];
    }
    out.push_back(verdict(counts, "star lazy + server resolve + rerun matches EXP3 law"));
  }
  return out;
}

std::vector<CheckResult> lazy_over_activation(const CheckOptions& o) {
  constexpr std::size_t n = 32;
  const std::int64_t rounds = scaled(20000, o);
  const auto f = make_random_coverage({n, 10, 0.2, derive_seed(o.seed, 10)});
  const double gamma = default_exp3_rate(n, static_cast<double>(rounds));
  const double eta = gamma / static_cast<double>(n);
  std::vector<CheckResult> out;
  struct Case {
    double alpha;
    StageMode mode;
    const char* name;
    const char* bound_name;
  };
  const Case cases[] = {
      {1.0, StageMode::kLazyStarNoRerun, "lazy activations per round <= alpha + (e-1), alpha = 1",
       "1 + (e-1)"},
      {std::log(static_cast<double>(n)), StageMode::kLazyStar,
       "lazy activations per round <= ln n + (e-1), alpha = ln n, rerun", "ln n + (e-1)"},
  };
  std::uint64_t stream = 11;
  for (const auto& c : cases) {
    StarNetwork net(n, 1);
    Rng rng(derive_seed(o.seed, stream++));
    const StageParams params{c.alpha, gamma, eta, c.mode == StageMode::kLazyStar, std::nullopt};
    stats::RunningMean acts;
    for (std::int64_t t = 0; t < rounds; ++t) {
      net.begin_round();
      acts.add(static_cast<double>(run_stage(net, 0, *f, c.mode, params, rng).activations));
    }
    const double limit = c.alpha + (kE - 1.0);
    const double bound = limit + kZ * acts.standard_error();
    out.push_back(result(6, c.name, acts.mean() <= bound,
                         format("n=32, T=%lld, gamma=%.4f, eta=gamma/n: mean %.4f <= %.4f (%s + 3 sigma)",
                                static_cast<long long>(rounds), gamma, acts.mean(), bound,
                                c.bound_name)));
  }
  return out;
}

std::vector<CheckResult> greedy_guarantee(const CheckOptions& o) {
  constexpr int kInstances = 200;
  const double factor = 1.0 - std::exp(-1.0);
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kInstances; ++i) {
    const std::size_t n = 4 + static_cast<std::size_t>(i % 7);
    const std::size_t k = 1 + static_cast<std::size_t>((i / 3) % 3);
    const auto seed = derive_seed(o.seed, 1000 + static_cast<std::uint64_t>(i));
    ObjectivePtr f;
    switch (i % 3) {
      case 0: f = make_random_coverage({n, 10, 0.2, seed}); break;
      case 1: f = make_random_detection({n, 20, 0.9, 0.25, seed}); break;
      default: f = make_random_gaussian({n, 3, 0.1, 1.0, kDefaultJitter, seed}); break;
    }
    const double greedy = f->evaluate(offline_greedy(*f, k));
    const double opt = brute_force_opt(*f, k).value;
    if (greedy < factor * opt - 1e-9) ++failures;
    if (opt > 0.0) worst = std::min(worst, greedy / opt);
  }
  return {result(7, "greedy >= (1 - 1/e) brute-force optimum", failures == 0,
                 format("%d instances (n 4..10, k 1..3), %d failures, worst ratio %.4f", kInstances,
                        failures, worst))};
}

std::vector<CheckResult> submodularity_oracle(const CheckOptions& o) {
  constexpr std::size_t n = 10;
  constexpr int kSeeds = 5;
  struct Family {
    const char* name;
    std::function<ObjectivePtr(std::uint64_t)> make;
  };
  const Family families[] = {
      {"coverage", [](std::uint64_t s) { return make_random_coverage({n, 10, 0.2, s}); }},
      {"detection", [](std::uint64_t s) { return make_random_detection({n, 20, 0.9, 0.25, s}); }},
      {"detection realization",
       [](std::uint64_t s) { return make_random_detection({n, 20, 0.9, 0.25, s})->realize(s + 1); }},
      {"gaussian emse",
       [](std::uint64_t s) { return make_random_gaussian({n, 3, 0.1, 1.0, kDefaultJitter, s}); }},
      {"weighted sum",
       [](std::uint64_t s) -> ObjectivePtr {
         std::vector<std::pair<double, ObjectivePtr>> terms;
         terms.emplace_back(0.5, make_random_coverage({n, 10, 0.2, s}));
         terms.emplace_back(2.0, make_random_detection({n, 20, 0.9, 0.25, s}));
         return std::make_shared<WeightedSumObjective>(std::move(terms));
       }},
  };
  std::vector<CheckResult> out;
  for (const auto& fam : families) {
    int failures = 0;
    std::string first;
    for (int i = 0; i < kSeeds; ++i) {
      const auto f = fam.make(derive_seed(o.seed, 2000 + static_cast<std::uint64_t>(i)));
      const auto rep = check_monotone_submodular(*f, n);
      if (!rep.is_monotone || !rep.is_submodular) {
        ++failures;
        if (first.empty() && rep.first_violation) first = ", first violation: " + rep.first_violation->kind;
      }
    }
    out.push_back(result(8, std::string("monotone submodular: ") + fam.name, failures == 0,
                         format("n=%zu, %d seeds, %d failures", n, kSeeds, failures) + first));
  }
  return out;
}

std::vector<CheckResult> dog_convergence(const CheckOptions& o) {
  Scenario s;
  s.objective.family = "coverage";
  s.objective.n = 30;
  s.objective.seed = derive_seed(o.seed, 3000);
  s.run.algorithm = Algorithm::kDog;
  s.run.k = 3;
  s.run.rounds = 20000;
  s.run.seed = derive_seed(o.seed, 3001);
  s.experiment.trials = static_cast<std::size_t>(std::max<long long>(2, std::llround(10 * std::min(1.0, o.scale))));
  s.experiment.window = 2000;
  s.experiment.every = 1000;
  const auto start = std::chrono::steady_clock::now();
  const auto res = run_experiment(s);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double greedy = res.benchmarks.greedy_per_round;
  const double ratio = res.mean_trailing_reward / greedy;
  return {
      result(9, "DOG trailing-2000 reward >= 0.9 x greedy", ratio >= 0.9,
             format("n=30, k=3, T=20000, %zu trials: trailing %.4f, greedy %.4f, ratio %.4f",
                    s.experiment.trials, res.mean_trailing_reward, greedy, ratio)),
      result(9, "DOG convergence runtime <= 300 s", seconds <= 300.0,
             format("%.1f s", seconds)),
  };
}

std::vector<CheckResult> oddog_extremes(const CheckOptions& o) {
  std::vector<CheckResult> out;
  {
    constexpr std::size_t n = 12;
    constexpr std::size_t k = 3;
    ObjectiveSpec spec;
    spec.family = "detection-realized";
    spec.n = n;
    spec.seed = derive_seed(o.seed, 4000);
    spec.sequence = SequenceMode::kRandomDraw;
    spec.pool = 8;
    spec.sequence_seed = derive_seed(o.seed, 4001);
    const auto seq = build_sequence(spec);
    constexpr int kSeeds = 5;
    const std::int64_t rounds = scaled(400, o);
    std::int64_t mismatches = 0;
    std::int64_t checked = 0;
    for (int i = 0; i < kSeeds; ++i) {
      RunConfig c;
      c.n = n;
      c.k = k;
      c.rounds = rounds;
      c.algorithm = Algorithm::kOdDog;
      c.fixed_threshold = 0.0;
      c.costs = {0.0};
      c.seed = derive_seed(o.seed, 4100 + static_cast<std::uint64_t>(i));
      const auto res = oddog_run(c, seq);
      for (const auto& r : res.records) {
        ++checked;
        if (r.selected != offline_greedy(seq.at(r.round), k)) ++mismatches;
      }
    }
    out.push_back(result(10, "OD-DOG with thresholds 0 equals offline greedy every round",
                         mismatches == 0,
                         format("%d seeds x %lld rounds, varying f_t: %lld mismatches", kSeeds,
                                static_cast<long long>(rounds), static_cast<long long>(mismatches))));
  }
  {
    constexpr std::size_t n = 20;
    constexpr int kTrials = 5;
    constexpr int kWindows = 4;
    const std::int64_t rounds = 2000;
    const auto f = make_random_coverage({n, 10, 0.2, derive_seed(o.seed, 4200)});
    const auto seq = ObjectiveSequence::constant(f);
    std::vector<double> rate(kWindows, 0.0);
    const std::int64_t width = rounds / kWindows;
    for (int i = 0; i < kTrials; ++i) {
      RunConfig c;
      c.n = n;
      c.k = 2;
      c.rounds = rounds;
      c.algorithm = Algorithm::kOdDog;
      c.costs = {1.0};
      c.seed = derive_seed(o.seed, 4300 + static_cast<std::uint64_t>(i));
      const auto res = oddog_run(c, seq);
      for (const auto& r : res.records) {
        const auto w = static_cast<std::size_t>((r.round - 1) / width);
        rate[w] += static_cast<double>(r.boosted) / static_cast<double>(width * kTrials);
      }
    }
    bool monotone = rate.back() < rate.front();
    for (int w = 1; w < kWindows; ++w) monotone = monotone && rate[w] <= rate[w - 1];
    out.push_back(result(10, "OD-DOG with large cost: boosted rate decreases across windows",
                         monotone,
                         format("boosted per round in 4 windows of %lld: %.4f, %.4f, %.4f, %.4f",
                                static_cast<long long>(width), rate[0], rate[1], rate[2],
                                rate[3])));
  }
  return out;
}

std::vector<CheckResult> determinism(const CheckOptions& o) {
  std::vector<CheckResult> out;
  for (const auto algo : {Algorithm::kDog, Algorithm::kLazyDog, Algorithm::kOdDog}) {
    Scenario s;
    s.objective.family = "detection-realized";
    s.objective.n = 10;
    s.objective.seed = derive_seed(o.seed, 5000);
    s.objective.sequence = SequenceMode::kRandomDraw;
    s.objective.pool = 4;
    s.run.algorithm = algo;
    s.run.k = 2;
    s.run.rounds = 300;
    s.run.costs = {0.05};
    s.run.seed = derive_seed(o.seed, 5001);
    s.experiment.trials = 3;
    s.experiment.jobs = 1;
    const std::string first = to_csv(run_experiment(s).rows);
    s.experiment.jobs = 3;
    const std::string parallel = to_csv(run_experiment(s).rows);
    s.experiment.jobs = 1;
    const std::string again = to_csv(run_experiment(s).rows);
    s.run.seed += 1;
    const std::string other = to_csv(run_experiment(s).rows);
    const bool same = first == again && first == parallel;
    out.push_back(result(11, to_string(algo) + " runs are byte-reproducible", same && other != first,
                         format("%zu CSV bytes; rerun %s, 3 workers %s, other seed %s",
                                first.size(), first == again ? "identical" : "DIFFERENT",
                                first == parallel ? "identical" : "DIFFERENT",
                                other != first ? "differs" : "IDENTICAL")));
  }
  return out;
}

namespace {

std::vector<CheckResult> no_rerun_selection_budget(const CheckOptions& o) {
  RunConfig c;
  c.n = 10;
  c.k = 2;
  c.rounds = scaled(5000, o);
  c.alpha = 1.0;
  c.rerun = false;
  c.seed = derive_seed(o.seed, 6000);
  const auto f = make_random_coverage({c.n, 10, 0.2, derive_seed(o.seed, 6001)});
  const auto res = lazydog_run(c, ObjectiveSequence::constant(f));
  stats::RunningMean size;
  for (const auto& r : res.records) size.add(static_cast<double>(r.selected.size()));
  const double limit = static_cast<double>(res.params.stages) * -std::expm1(-c.alpha);
  const double bound = limit + kZ * size.standard_error();
  return {result(0, "lazyDOG without rerun: mean |S_t| <= k'(1 - e^-alpha) <= k'",
                 res.params.stages == 4 && size.mean() <= bound,
                 format("k=2, alpha=1: k' = %zu, mean |S_t| %.4f <= %.4f", res.params.stages,
                        size.mean(), bound))};
}

std::vector<CheckResult> no_rerun_large_alpha(const CheckOptions& o) {
  const auto f = make_random_coverage({10, 10, 0.2, derive_seed(o.seed, 6100)});
  const auto seq = ObjectiveSequence::constant(f);
  constexpr int kTrials = 10;
  stats::RunningMean rerun;
  stats::RunningMean no_rerun;
  std::size_t stages = 0;
  for (int i = 0; i < kTrials; ++i) {
    RunConfig c;
    c.n = 10;
    c.k = 2;
    c.rounds = scaled(1000, o);
    c.alpha = 20.0;
    c.seed = derive_seed(o.seed, 6200 + static_cast<std::uint64_t>(i));
    c.rerun = true;
    rerun.add(lazydog_run(c, seq).records.back().average_reward);
    c.rerun = false;
    c.seed = derive_seed(o.seed, 6300 + static_cast<std::uint64_t>(i));
    const auto res = lazydog_run(c, seq);
    stages = res.params.stages;
    no_rerun.add(res.records.back().average_reward);
  }
  const double se = std::hypot(rerun.standard_error(), no_rerun.standard_error());
  const double diff = std::abs(rerun.mean() - no_rerun.mean());
  return {result(0, "lazyDOG alpha=20: no-rerun uses k stages and matches rerun",
                 stages == 2 && diff <= kZ * std::max(se, 1e-12),
                 format("k' = %zu; mean reward %.4f vs %.4f, |diff| %.4f <= %.4f", stages,
                        no_rerun.mean(), rerun.mean(), diff, kZ * se))};
}

std::vector<CheckResult> monotone_reward_sanity(const CheckOptions& o) {
  RunConfig c;
  c.n = 12;
  c.k = 3;
  c.rounds = scaled(300, o);
  c.seed = derive_seed(o.seed, 6400);
  ObjectiveSpec spec;
  spec.family = "detection-realized";
  spec.n = c.n;
  spec.seed = derive_seed(o.seed, 6401);
  spec.sequence = SequenceMode::kCyclic;
  spec.pool = 5;
  const auto seq = build_sequence(spec);
  std::int64_t violations = 0;
  for (const auto algo : {Algorithm::kDog, Algorithm::kLazyDog, Algorithm::kOdDog}) {
    c.algorithm = algo;
    for (const auto& r : run(c, seq).records) {
      const auto& f = seq.at(r.round);
      for (SensorId v = 0; v < static_cast<SensorId>(c.n); ++v) {
        if (f.marginal_gain(r.selected, v) < -1e-12) ++violations;
      }
    }
  }
  return {result(0, "adding a forced sensor never lowers f_t(S_t)", violations == 0,
                 format("3 algorithms x %lld rounds x 12 sensors: %lld violations",
                        static_cast<long long>(c.rounds), static_cast<long long>(violations)))};
}

std::vector<CheckResult> server_state_independent_of_n(const CheckOptions& o) {
  std::vector<std::size_t> sizes;
  for (const std::size_t n : {8, 40}) {
    RunConfig c;
    c.n = n;
    c.k = 3;
    c.rounds = 20;
    c.seed = derive_seed(o.seed, 6500 + n);
    const auto f = make_random_coverage({n, 10, 0.2, c.seed});
    sizes.push_back(lazydog_run(c, ObjectiveSequence::constant(f)).server_state_size);
  }
  return {result(0, "star server state depends on k only", sizes[0] == 3 && sizes[1] == 3,
                 format("k=3: n=8 -> %zu values, n=40 -> %zu values", sizes[0], sizes[1]))};
}

std::vector<CheckResult> emse_permutation_invariance(const CheckOptions& o) {
  constexpr std::size_t n = 8;
  Rng rng(derive_seed(o.seed, 6600));
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = make_random_gaussian({n, 3, 0.1, 1.0, kDefaultJitter, rng()});
    const auto& cov = f->covariance();
    std::vector<SensorId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i + 1))]);
    }
    Eigen::MatrixXd permuted(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        permuted(perm[i], perm[j]) = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    SensorSet set;
    SensorSet mapped;
    for (std::size_t v = 0; v < n; ++v) {
      if (uniform01(rng) < 0.5) {
        set.push_back(static_cast<SensorId>(v));
        mapped.push_back(perm[v]);
      }
    }
    worst = std::max(worst, std::abs(emse_reduction(cov, set) - emse_reduction(permuted, mapped)));
  }
  return {result(0, "EMSE reduction is invariant under relabeling", worst <= 1e-10,
                 format("20 instances, max |difference| %.3g", worst))};
}

std::vector<CheckResult> small_instance_regret(const CheckOptions& o) {
  Scenario s;
  s.objective.family = "coverage";
  s.objective.n = 8;
  s.objective.seed = derive_seed(o.seed, 6700);
  s.run.k = 2;
  s.run.rounds = 20000;
  s.run.seed = derive_seed(o.seed, 6701);
  s.experiment.trials = 3;
  s.experiment.every = 20000;
  const auto res = run_experiment(s);
  return {result(0, "DOG (1 - 1/e)-regret per round below 0.05 on a small instance",
                 !res.benchmarks.optimum_is_proxy && res.mean_regret_per_round < 0.05,
                 format("n=8, k=2, T=20000, brute-force benchmark: R_T/T = %.4f",
                        res.mean_regret_per_round))};
}

}  // namespace

const std::vector<CheckSuite>& acceptance_suites() {
  static const std::vector<CheckSuite> suites{
      {1, "PMS selection law", pms_selection_law},
      {2, "PMS message budget", pms_message_budget},
      {3, "rerun activation bound", rerun_activation_bound},
      {4, "simple protocol ratio", simple_protocol_ratio},
      {5, "distribution equivalence", distribution_equivalence},
      {6, "lazy over-activation", lazy_over_activation},
      {7, "greedy guarantee", greedy_guarantee},
      {8, "submodularity oracle", submodularity_oracle},
      {9, "DOG convergence", dog_convergence},
      {10, "OD-DOG extremes", oddog_extremes},
      {11, "determinism", determinism},
  };
  return suites;
}

const std::vector<CheckSuite>& invariant_suites() {
  static const std::vector<CheckSuite> suites{
      {0, "no-rerun selection budget", no_rerun_selection_budget},
      {0, "no-rerun at large alpha", no_rerun_large_alpha},
      {0, "monotone reward sanity", monotone_reward_sanity},
      {0, "server state size", server_state_independent_of_n},
      {0, "EMSE relabeling", emse_permutation_invariance},
      {0, "small-instance regret", small_instance_regret},
  };
  return suites;
}

SampleBenchReport sample_bench(const std::string& protocol, std::vector<double> p, double alpha,
                               std::int64_t improved_n, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (p.empty()) throw std::invalid_argument("sample_bench: empty distribution");
  require_simplex(p);
  const std::size_t n = p.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> theory(n, nan);
  double theory_none = nan;
  double theory_acts = nan;
  if (protocol == "pms") {
    for (std::size_t v = 0; v < n; ++v) theory[v] = -std::expm1(-alpha) * p[v];
    theory_none = std::exp(-alpha);
    theory_acts = 0.0;
    for (double x : p) theory_acts += -std::expm1(-alpha * x);
  } else if (protocol == "rerun") {
    theory = p;
    theory_none = 0.0;
    theory_acts = 0.0;
    for (double x : p) theory_acts += -std::expm1(-alpha * x);
    theory_acts /= -std::expm1(-alpha);
  } else if (protocol == "simple") {
    if (n <= 20) {
      theory = simple_protocol_exact(p);
      double none = 1.0;
      for (double x : p) none *= 1.0 - x;
      theory_none = none;
    }
    theory_acts = 1.0;
  } else if (protocol != "improved") {
    throw std::invalid_argument("unknown protocol '" + protocol + "'");
  }

  Rng rng(seed);
  std::vector<std::int64_t> counts(n, 0);
  std::int64_t none = 0;
  stats::RunningMean acts;
  for (std::int64_t i = 0; i < trials; ++i) {
    SamplingOutcome out;
    if (protocol == "pms") {
      out = pms_protocol(p, alpha, rng);
    } else if (protocol == "rerun") {
      out = pms_until_selected(p, alpha, rng);
    } else if (protocol == "simple") {
      out = simple_protocol(p, rng);
    } else {
      out = improved_protocol(p, improved_n, rng);
    }
    if (out.selected) {
      ++counts[static_cast<std::size_t>(*out.selected)];
    } else {
      ++none;
    }
    acts.add(static_cast<double>(out.activations));
  }

  SampleBenchReport rep;
  rep.protocol = protocol;
  rep.p = p;
  const auto row = [&](std::string label, double t, std::int64_t hits) {
    SampleBenchRow r;
    r.label = std::move(label);
    r.theoretical = t;
    r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    r.sigma = std::isnan(t) ? nan : stats::binomial_sigma(t, trials);
    return r;
  };
  for (std::size_t v = 0; v < n; ++v) rep.rows.push_back(row(std::to_string(v), theory[v], counts[v]));
  rep.rows.push_back(row("none", theory_none, none));
  rep.mean_activations = acts.mean();
  rep.activations_stderr = acts.standard_error();
  rep.theoretical_activations = theory_acts;
  return rep;
}

}  // namespace sensel::checks
