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

// Command-line front end: protocol benches, experiment runs, offline greedy
// and the invariant suite.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sensel/algorithms.hpp"
#include "sensel/checks.hpp"
#include "sensel/experiment.hpp"
#include "sensel/metrics.hpp"
#include "sensel/scenario.hpp"

namespace {

constexpr int kConfigError = 2;

struct Override {
  std::string section;
  std::string key;
  std::string value;
};

// Flag overrides are recorded in command-line order and applied through the
// scenario setter, so flags and files share one parser and one validator.
void add_override(CLI::App* app, std::vector<Override>& list, const std::string& flag,
                  const std::string& section, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&list, section, key](const std::string& v) { list.push_back({section, key, v}); },
      help);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SENSEL_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw sensel::ScenarioError(std::string("SENSEL_SEED: not an unsigned integer: '") + env + "'");
  }
  return 1;
}

struct RunOptions {
  std::string scenario;
  std::vector<Override> overrides;
  std::optional<std::uint64_t> seed;
};

sensel::Scenario build_scenario(const RunOptions& opt, std::optional<sensel::Algorithm> algo) {
  sensel::Scenario s = opt.scenario.empty() ? sensel::Scenario{} : sensel::load_scenario(opt.scenario);
  if (algo) s.run.algorithm = *algo;
  if (opt.seed) {
    s.run.seed = *opt.seed;
  } else if (std::getenv("SENSEL_SEED")) {
    s.run.seed = default_seed();
  }
  for (const auto& o : opt.overrides) {
    try {
      sensel::set_scenario_value(s, o.section, o.key, o.value);
    } catch (const sensel::ScenarioError& e) {
      throw sensel::ScenarioError(std::string("command line: ") + e.what());
    }
  }
  try {
    sensel::validate_scenario(s);
  } catch (const sensel::ScenarioError& e) {
    throw sensel::ScenarioError((opt.scenario.empty() ? std::string("configuration") : opt.scenario) +
                                ": " + e.what());
  }
  return s;
}

void add_objective_flags(CLI::App* app, RunOptions& opt) {
  app->add_option("--scenario", opt.scenario, "Scenario file")->check(CLI::ExistingFile);
  add_override(app, opt.overrides, "--family", "objective", "family",
               "coverage | detection | detection-realized | gaussian");
  add_override(app, opt.overrides, "--n", "objective", "n", "Number of sensors");
  add_override(app, opt.overrides, "--objective-seed", "objective", "seed", "Instance seed");
  add_override(app, opt.overrides, "--sequence", "objective", "sequence",
               "constant | cyclic | random");
  add_override(app, opt.overrides, "--pool", "objective", "pool", "Objective pool size");
  add_override(app, opt.overrides, "--k", "run", "k", "Sensors selected per round");
}

void add_run_flags(CLI::App* app, RunOptions& opt) {
  add_objective_flags(app, opt);
  app->add_option("--seed", opt.seed, "Base seed of the trials (default: SENSEL_SEED or scenario)");
  add_override(app, opt.overrides, "--rounds", "run", "rounds", "Rounds T");
  add_override(app, opt.overrides, "--alpha", "run", "alpha", "Poisson sampling mean");
  add_override(app, opt.overrides, "--gamma", "run", "gamma", "EXP3 exploration rate");
  add_override(app, opt.overrides, "--eta", "run", "eta", "EXP3 learning rate");
  add_override(app, opt.overrides, "--n-estimate-factor", "run", "n_estimate_factor",
               "Sensors believe n is this multiple of the true n");
  add_override(app, opt.overrides, "--trials", "experiment", "trials", "Independent trials");
  add_override(app, opt.overrides, "--jobs", "experiment", "jobs", "Worker threads");
  add_override(app, opt.overrides, "--window", "experiment", "window", "Trailing summary window");
  add_override(app, opt.overrides, "--every", "experiment", "every", "CSV row stride in rounds");
  add_override(app, opt.overrides, "--output", "experiment", "output", "CSV output path");
  add_override(app, opt.overrides, "--trace", "experiment", "trace",
               "Message trace of trial 0 (round,stage,type,src,dst)");
}

int run_command(const RunOptions& opt, sensel::Algorithm algo) {
  const auto scenario = build_scenario(opt, algo);
  const auto res = sensel::run_experiment(scenario);
  sensel::write_outputs(scenario, res);
  if (!scenario.experiment.output) sensel::write_csv(res.rows, std::cout);

  auto& log = std::cerr;
  char line[256];
  std::snprintf(line, sizeof line,
                "%s: n=%zu k=%zu T=%lld trials=%zu gamma=%.6g eta=%.6g stages=%zu\n",
                sensel::to_string(algo).c_str(), scenario.run.n, scenario.run.k,
                static_cast<long long>(scenario.run.rounds), scenario.experiment.trials,
                res.params.gamma, res.params.eta, res.params.stages);
  log << line;
  std::snprintf(line, sizeof line, "greedy value per round %.6f, optimum per round %.6f%s\n",
                res.benchmarks.greedy_per_round, res.benchmarks.optimum_per_round,
                res.benchmarks.optimum_is_proxy ? " (greedy proxy)" : " (brute force)");
  log << line;
  for (const auto& t : res.trials) {
    std::snprintf(line, sizeof line,
                  "trial %lld: avg %.6f trailing %.6f ratio %.4f msgs/round %.3f acts/round %.3f "
                  "boosted/round %.3f\n",
                  static_cast<long long>(t.trial), t.average_reward, t.trailing_reward,
                  res.benchmarks.greedy_per_round > 0 ? t.trailing_reward / res.benchmarks.greedy_per_round : 0.0,
                  t.messages_per_round, t.activations_per_round, t.boosted_per_round);
    log << line;
  }
  std::snprintf(line, sizeof line,
                "mean trailing reward %.6f +- %.6f, (1-1/e)-regret per round %.6f +- %.6f\n",
                res.mean_trailing_reward, res.trailing_reward_stderr, res.mean_regret_per_round,
                res.regret_per_round_stderr);
  log << line;
  return EXIT_SUCCESS;
}

int greedy_command(const RunOptions& opt) {
  const auto scenario = build_scenario(opt, std::nullopt);
  const auto seq = sensel::build_sequence(scenario.objective);
  const auto& f = seq.at(1);
  const std::size_t k = scenario.run.k;
  std::printf("objective %s, n=%zu, k=%zu, seed %llu\n", f.family().c_str(), f.size(), k,
              static_cast<unsigned long long>(scenario.objective.seed));
  const auto greedy = sensel::offline_greedy(f, k);
  sensel::SensorSet prefix;
  std::printf("greedy:\n");
  for (std::size_t i = 0; i < greedy.size(); ++i) {
    const double gain = f.marginal_gain(prefix, greedy[i]);
    prefix.push_back(greedy[i]);
    std::printf("  step %zu: sensor %d, gain %.17g, value %.17g\n", i + 1, greedy[i], gain,
                f.evaluate(prefix));
  }
  if (f.size() <= sensel::kBruteForceLimit) {
    const auto opt_res = sensel::brute_force_opt(f, k);
    std::printf("brute force: {");
    for (std::size_t i = 0; i < opt_res.set.size(); ++i) std::printf(i ? ", %d" : "%d", opt_res.set[i]);
    std::printf("}, value %.17g, greedy/optimum %.6f\n", opt_res.value,
                opt_res.value > 0 ? f.evaluate(greedy) / opt_res.value : 1.0);
  } else {
    std::printf("brute force: skipped (n > %zu)\n", sensel::kBruteForceLimit);
  }
  return EXIT_SUCCESS;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int sample_bench_command(const std::string& protocol, std::size_t n, const std::string& p_text,
                         bool random, double alpha, std::int64_t improved_n, std::int64_t trials,
                         std::uint64_t seed) {
  std::vector<double> p;
  if (!p_text.empty()) {
    p = parse_list(p_text);
  } else if (random) {
    sensel::Rng rng(sensel::derive_seed(seed, 0xB));
    p = sensel::checks::random_simplex(n, rng);
  } else {
    p.assign(n, 1.0 / static_cast<double>(n));
  }
  const auto rep = sensel::checks::sample_bench(protocol, p, alpha, improved_n, trials, seed);
  std::printf("protocol %s, alpha %.6g, %lld trials, seed %llu\n", protocol.c_str(), alpha,
              static_cast<long long>(trials), static_cast<unsigned long long>(seed));
  std::printf("%-8s %12s %12s %12s %8s\n", "sensor", "p", "theoretical", "empirical", "z");
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    const double z = std::isnan(r.theoretical) || r.sigma == 0.0
                         ? std::nan("")
                         : (r.empirical - r.theoretical) / r.sigma;
    if (i < p.size()) {
      std::printf("%-8s %12.6f %12.6f %12.6f %8.3f\n", r.label.c_str(), p[i], r.theoretical,
                  r.empirical, z);
    } else {
      std::printf("%-8s %12s %12.6f %12.6f %8.3f\n", r.label.c_str(), "-", r.theoretical,
                  r.empirical, z);
    }
  }
  std::printf("mean activations %.6f +- %.6f (theoretical %.6f)\n", rep.mean_activations,
              rep.activations_stderr, rep.theoretical_activations);
  return EXIT_SUCCESS;
}

int run_suites(const std::vector<const std::vector<sensel::checks::CheckSuite>*>& groups,
               const sensel::checks::CheckOptions& options) {
  int failed = 0;
  int total = 0;
  for (const auto* group : groups) {
    for (const auto& suite : *group) {
      ++total;
      bool all = true;
      std::vector<sensel::checks::CheckResult> results;
      try {
        results = suite.run(options);
      } catch (const std::exception& e) {
        results.push_back({suite.criterion, suite.title, false, std::string("error: ") + e.what()});
      }
      for (const auto& r : results) all = all && r.passed;
      if (suite.criterion > 0) {
        std::printf("%s criterion %2d: %s\n", all ? "PASS" : "FAIL", suite.criterion,
                    suite.title.c_str());
      } else {
        std::printf("%s invariant: %s\n", all ? "PASS" : "FAIL", suite.title.c_str());
      }
      for (const auto& r : results) {
        std::printf("    %s  %s: %s\n", r.passed ? "ok  " : "FAIL", r.name.c_str(), r.detail.c_str());
      }
      std::fflush(stdout);
      if (!all) ++failed;
    }
  }
  std::printf("%d of %d suites failed\n", failed, total);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed online sensor selection: protocols, algorithms and experiments"};
  app.require_subcommand(1);

  // sample-bench
  auto* sample = app.add_subcommand("sample-bench", "Monte Carlo of a one-of-n sampling protocol");
  std::string protocol = "pms";
  std::size_t bench_n = 3;
  std::string bench_p;
  bool bench_random = false;
  double bench_alpha = 1.0;
  std::int64_t bench_improved_n = 100;
  std::int64_t bench_trials = 200000;
  std::optional<std::uint64_t> bench_seed;
  sample->add_option("--protocol", protocol, "pms | rerun | simple | improved")
      ->check(CLI::IsMember({"pms", "rerun", "simple", "improved"}));
  sample->add_option("--n", bench_n, "Sensors (uniform p unless --p or --random)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  sample->add_option("--p", bench_p, "Comma-separated distribution");
  sample->add_flag("--random", bench_random, "Random point of the simplex");
  sample->add_option("--alpha", bench_alpha, "Poisson mean");
  sample->add_option("--N", bench_improved_n, "Binomial resolution of the improved protocol");
  sample->add_option("--trials", bench_trials, "Monte Carlo trials");
  sample->add_option("--seed", bench_seed, "Seed (default: SENSEL_SEED or 1)");

  // dexp3-bench
  auto* dexp3 = app.add_subcommand(
      "dexp3-bench", "Frozen-weight distribution equivalence and lazy activation bounds");
  double dexp3_scale = 1.0;
  std::optional<std::uint64_t> dexp3_seed;
  dexp3->add_option("--scale", dexp3_scale, "Sample size multiplier")->check(CLI::PositiveNumber);
  dexp3->add_option("--seed", dexp3_seed, "Seed (default: SENSEL_SEED or built in)");

  // *-run
  RunOptions dog_opt;
  RunOptions lazy_opt;
  RunOptions od_opt;
  auto* dog = app.add_subcommand("dog-run", "Distributed online greedy, broadcast model");
  add_run_flags(dog, dog_opt);
  auto* lazy = app.add_subcommand("lazydog-run", "Lazy renormalization, star model");
  add_run_flags(lazy, lazy_opt);
  add_override(lazy, lazy_opt.overrides, "--rerun", "run", "rerun",
               "true: rerun empty stages; false: use k' stages");
  auto* od = app.add_subcommand("oddog-run", "Observation-dependent variant, star model");
  add_run_flags(od, od_opt);
  add_override(od, od_opt.overrides, "--costs", "run", "costs",
               "Activation cost, shared or one per sensor (comma-separated)");
  add_override(od, od_opt.overrides, "--thresholds", "run", "thresholds", "Threshold grid size");
  add_override(od, od_opt.overrides, "--threshold-eta", "run", "threshold_eta",
               "Threshold learner rate");
  add_override(od, od_opt.overrides, "--fixed-threshold", "run", "fixed_threshold",
               "Use this threshold for every sensor");
  add_override(od, od_opt.overrides, "--rerun", "run", "rerun", "Rerun empty stages");

  // greedy
  RunOptions greedy_opt;
  auto* greedy = app.add_subcommand("greedy", "Offline greedy and brute-force selections");
  add_objective_flags(greedy, greedy_opt);

  // verify
  auto* verify = app.add_subcommand("verify", "Run every acceptance and invariant check");
  double verify_scale = 1.0;
  std::optional<std::uint64_t> verify_seed;
  verify->add_option("--scale", verify_scale, "Sample size multiplier")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "Seed (default: SENSEL_SEED or built in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      return sample_bench_command(protocol, bench_n, bench_p, bench_random, bench_alpha,
                                  bench_improved_n, bench_trials,
                                  bench_seed.value_or(default_seed()));
    }
    if (*dexp3 || *verify) {
      sensel::checks::CheckOptions options;
      const auto& seed = *dexp3 ? dexp3_seed : verify_seed;
      if (seed) {
        options.seed = *seed;
      } else if (std::getenv("SENSEL_SEED")) {
        options.seed = default_seed();
      }
      options.scale = *dexp3 ? dexp3_scale : verify_scale;
      if (*dexp3) {
        static const std::vector<sensel::checks::CheckSuite> suites{
            {5, "distribution equivalence", sensel::checks::distribution_equivalence},
            {6, "lazy over-activation", sensel::checks::lazy_over_activation},
        };
        return run_suites({&suites}, options);
      }
      return run_suites(
          {&sensel::checks::acceptance_suites(), &sensel::checks::invariant_suites()}, options);
    }
    if (*dog) return run_command(dog_opt, sensel::Algorithm::kDog);
    if (*lazy) return run_command(lazy_opt, sensel::Algorithm::kLazyDog);
    if (*od) return run_command(od_opt, sensel::Algorithm::kOdDog);
    if (*greedy) return greedy_command(greedy_opt);
  } catch (const sensel::ScenarioError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
