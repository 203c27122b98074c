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

#include "sensel/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "sensel/random.hpp"
#include "sensel/sampling.hpp"

namespace sensel {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view section, std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw ScenarioError(std::string(section) + "." + std::string(key) + ": expected " +
                      std::string(expected) + ", got '" + std::string(value) + "'");
}

template <typename T>
T parse_integer(std::string_view section, std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(section, key, value, "an integer");
  }
  return out;
}

std::size_t parse_count(std::string_view section, std::string_view key, std::string_view value) {
  return parse_integer<std::size_t>(section, key, value);
}

double parse_real(std::string_view section, std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(section, key, value, "a finite number");
  }
  return out;
}

bool parse_bool(std::string_view section, std::string_view key, std::string_view value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  bad_value(section, key, value, "true or false");
}

std::vector<double> parse_real_list(std::string_view section, std::string_view key,
                                    std::string_view value) {
  std::vector<double> out;
  while (true) {
    const auto comma = value.find(',');
    out.push_back(parse_real(section, key, trim(value.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    value = value.substr(comma + 1);
  }
  return out;
}

void set_objective(ObjectiveSpec& o, std::string_view key, std::string_view v) {
  constexpr std::string_view s = "objective";
  if (key == "family") {
    if (v != "coverage" && v != "detection" && v != "detection-realized" && v != "gaussian") {
      bad_value(s, key, v, "coverage, detection, detection-realized or gaussian");
    }
    o.family = std::string(v);
  } else if (key == "n") {
    o.n = parse_count(s, key, v);
  } else if (key == "seed") {
    o.seed = parse_integer<std::uint64_t>(s, key, v);
  } else if (key == "grid") {
    o.grid = parse_count(s, key, v);
  } else if (key == "radius") {
    o.radius = parse_real(s, key, v);
  } else if (key == "targets") {
    o.targets = parse_count(s, key, v);
  } else if (key == "max_prob") {
    o.max_prob = parse_real(s, key, v);
  } else if (key == "scale") {
    o.scale = parse_real(s, key, v);
  } else if (key == "clusters") {
    o.clusters = parse_count(s, key, v);
  } else if (key == "noise_min") {
    o.noise_min = parse_real(s, key, v);
  } else if (key == "noise_max") {
    o.noise_max = parse_real(s, key, v);
  } else if (key == "jitter") {
    o.jitter = parse_real(s, key, v);
  } else if (key == "sequence") {
    if (v == "constant") {
      o.sequence = SequenceMode::kConstant;
    } else if (v == "cyclic") {
      o.sequence = SequenceMode::kCyclic;
    } else if (v == "random") {
      o.sequence = SequenceMode::kRandomDraw;
    } else {
      bad_value(s, key, v, "constant, cyclic or random");
    }
  } else if (key == "pool") {
    o.pool = parse_count(s, key, v);
  } else if (key == "sequence_seed") {
    o.sequence_seed = parse_integer<std::uint64_t>(s, key, v);
  } else {
    throw ScenarioError("unknown key '" + std::string(key) + "' in [objective]");
  }
}

void set_run(RunConfig& r, std::string_view key, std::string_view v) {
  constexpr std::string_view s = "run";
  if (key == "algorithm") {
    if (v == "dog") {
      r.algorithm = Algorithm::kDog;
    } else if (v == "lazydog") {
      r.algorithm = Algorithm::kLazyDog;
    } else if (v == "oddog") {
      r.algorithm = Algorithm::kOdDog;
    } else {
      bad_value(s, key, v, "dog, lazydog or oddog");
    }
  } else if (key == "k") {
    r.k = parse_count(s, key, v);
  } else if (key == "rounds") {
    r.rounds = parse_integer<std::int64_t>(s, key, v);
  } else if (key == "alpha") {
    r.alpha = parse_real(s, key, v);
  } else if (key == "gamma") {
    r.gamma = parse_real(s, key, v);
  } else if (key == "eta") {
    r.eta = parse_real(s, key, v);
  } else if (key == "reward_guess") {
    r.reward_guess = parse_real(s, key, v);
  } else if (key == "rerun") {
    r.rerun = parse_bool(s, key, v);
  } else if (key == "seed") {
    r.seed = parse_integer<std::uint64_t>(s, key, v);
  } else if (key == "n_estimate_factor") {
    r.n_estimate_factor = parse_real(s, key, v);
  } else if (key == "costs") {
    r.costs = parse_real_list(s, key, v);
  } else if (key == "thresholds") {
    r.threshold_count = parse_count(s, key, v);
  } else if (key == "threshold_eta") {
    r.threshold_eta = parse_real(s, key, v);
  } else if (key == "fixed_threshold") {
    r.fixed_threshold = parse_real(s, key, v);
  } else {
    throw ScenarioError("unknown key '" + std::string(key) + "' in [run]");
  }
}

void set_experiment(ExperimentSpec& e, std::string_view key, std::string_view v) {
  constexpr std::string_view s = "experiment";
  if (key == "trials") {
    e.trials = parse_count(s, key, v);
  } else if (key == "jobs") {
    e.jobs = parse_count(s, key, v);
  } else if (key == "window") {
    e.window = parse_integer<std::int64_t>(s, key, v);
  } else if (key == "every") {
    e.every = parse_integer<std::int64_t>(s, key, v);
  } else if (key == "output") {
    if (v.empty()) bad_value(s, key, v, "a path");
    e.output = std::filesystem::path(std::string(v));
  } else if (key == "trace") {
    if (v.empty()) bad_value(s, key, v, "a path");
    e.trace = std::filesystem::path(std::string(v));
  } else {
    throw ScenarioError("unknown key '" + std::string(key) + "' in [experiment]");
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ScenarioError(message);
}

std::string real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view sequence_name(SequenceMode m) {
  switch (m) {
    case SequenceMode::kConstant: return "constant";
    case SequenceMode::kCyclic: return "cyclic";
    case SequenceMode::kRandomDraw: return "random";
  }
  return "constant";
}

}  // namespace

void set_scenario_value(Scenario& scenario, std::string_view section, std::string_view key,
                        std::string_view value) {
  if (section == "objective") {
    set_objective(scenario.objective, key, value);
  } else if (section == "run") {
    set_run(scenario.run, key, value);
  } else if (section == "experiment") {
    set_experiment(scenario.experiment, key, value);
  } else {
    throw ScenarioError("unknown section [" + std::string(section) + "]");
  }
}

void validate_scenario(Scenario& s) {
  const auto& o = s.objective;
  require(o.n >= 1, "objective.n must be at least 1");
  require(o.grid >= 1, "objective.grid must be at least 1");
  require(o.radius > 0.0, "objective.radius must be positive");
  require(o.targets >= 1, "objective.targets must be at least 1");
  require(o.max_prob > 0.0 && o.max_prob <= 1.0, "objective.max_prob must lie in (0, 1]");
  require(o.scale > 0.0, "objective.scale must be positive");
  require(o.clusters >= 1, "objective.clusters must be at least 1");
  require(o.noise_min > 0.0 && o.noise_min <= o.noise_max,
          "objective.noise_min must satisfy 0 < noise_min <= noise_max");
  require(o.jitter >= 0.0, "objective.jitter must be non-negative");
  require(o.pool >= 1, "objective.pool must be at least 1");
  require(o.sequence != SequenceMode::kConstant || o.pool == 1,
          "objective.pool must be 1 for a constant sequence");

  s.run.n = o.n;
  require(s.run.k >= 1 && s.run.k <= o.n, "run.k must satisfy 1 <= k <= n");
  require(s.run.rounds >= 1, "run.rounds must be at least 1");
  require(s.run.alpha > 0.0 && s.run.alpha <= kMaxPoissonMean, "run.alpha must lie in (0, 64]");
  require(!s.run.gamma || (*s.run.gamma > 0.0 && *s.run.gamma <= 1.0),
          "run.gamma must lie in (0, 1]");
  require(!s.run.eta || *s.run.eta > 0.0, "run.eta must be positive");
  require(!s.run.reward_guess || *s.run.reward_guess > 0.0, "run.reward_guess must be positive");
  require(s.run.n_estimate_factor > 0.0, "run.n_estimate_factor must be positive");
  require(s.run.costs.empty() || s.run.costs.size() == 1 || s.run.costs.size() == o.n,
          "run.costs must hold one shared value or one value per sensor");
  for (double c : s.run.costs) require(c >= 0.0, "run.costs must be non-negative");
  require(s.run.threshold_count >= 1, "run.thresholds must be at least 1");
  require(s.run.threshold_eta > 0.0, "run.threshold_eta must be positive");
  require(!s.run.fixed_threshold || (*s.run.fixed_threshold >= 0.0 && *s.run.fixed_threshold <= 1.0),
          "run.fixed_threshold must lie in [0, 1]");

  require(s.experiment.trials >= 1, "experiment.trials must be at least 1");
  require(s.experiment.jobs >= 1, "experiment.jobs must be at least 1");
  require(s.experiment.window >= 1, "experiment.window must be at least 1");
  require(s.experiment.every >= 1, "experiment.every must be at least 1");
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  Scenario scenario;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "objective" && section != "run" && section != "experiment") {
        throw ScenarioError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ScenarioError(where + "expected key = value");
    if (section.empty()) throw ScenarioError(where + "key outside of a section");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ScenarioError(where + "empty key");
    if (!seen.insert(section + "." + std::string(key)).second) {
      throw ScenarioError(where + "duplicate key '" + std::string(key) + "'");
    }
    try {
      set_scenario_value(scenario, section, key, value);
    } catch (const ScenarioError& e) {
      throw ScenarioError(where + e.what());
    }
  }
  try {
    validate_scenario(scenario);
  } catch (const ScenarioError& e) {
    throw ScenarioError(std::string(source) + ": " + e.what());
  }
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  const auto& o = s.objective;
  out << "[objective]\n"
      << "family = " << o.family << "\n"
      << "n = " << o.n << "\n"
      << "seed = " << o.seed << "\n"
      << "grid = " << o.grid << "\n"
      << "radius = " << real(o.radius) << "\n"
      << "targets = " << o.targets << "\n"
      << "max_prob = " << real(o.max_prob) << "\n"
      << "scale = " << real(o.scale) << "\n"
      << "clusters = " << o.clusters << "\n"
      << "noise_min = " << real(o.noise_min) << "\n"
      << "noise_max = " << real(o.noise_max) << "\n"
      << "jitter = " << real(o.jitter) << "\n"
      << "sequence = " << sequence_name(o.sequence) << "\n"
      << "pool = " << o.pool << "\n"
      << "sequence_seed = " << o.sequence_seed << "\n";
  const auto& r = s.run;
  out << "\n[run]\n"
      << "algorithm = " << to_string(r.algorithm) << "\n"
      << "k = " << r.k << "\n"
      << "rounds = " << r.rounds << "\n"
      << "alpha = " << real(r.alpha) << "\n";
  if (r.gamma) out << "gamma = " << real(*r.gamma) << "\n";
  if (r.eta) out << "eta = " << real(*r.eta) << "\n";
  if (r.reward_guess) out << "reward_guess = " << real(*r.reward_guess) << "\n";
  out << "rerun = " << (r.rerun ? "true" : "false") << "\n"
      << "seed = " << r.seed << "\n"
      << "n_estimate_factor = " << real(r.n_estimate_factor) << "\n";
  if (!r.costs.empty()) {
    out << "costs = ";
    for (std::size_t i = 0; i < r.costs.size(); ++i) out << (i ? "," : "") << real(r.costs[i]);
    out << "\n";
  }
  out << "thresholds = " << r.threshold_count << "\n"
      << "threshold_eta = " << real(r.threshold_eta) << "\n";
  if (r.fixed_threshold) out << "fixed_threshold = " << real(*r.fixed_threshold) << "\n";
  const auto& e = s.experiment;
  out << "\n[experiment]\n"
      << "trials = " << e.trials << "\n"
      << "jobs = " << e.jobs << "\n"
      << "window = " << e.window << "\n"
      << "every = " << e.every << "\n";
  if (e.output) out << "output = " << e.output->string() << "\n";
  if (e.trace) out << "trace = " << e.trace->string() << "\n";
  return out.str();
}

ObjectiveSequence build_sequence(const ObjectiveSpec& spec) {
  std::vector<ObjectivePtr> pool;
  pool.reserve(spec.pool);
  // The first member always uses the scenario seed; later members derive
  // their own so that pool = 1 and a constant sequence agree.
  auto member_seed = [&](std::size_t i) {
    return i == 0 ? spec.seed : derive_seed(spec.seed, i);
  };
  if (spec.family == "detection-realized") {
    const auto base = make_random_detection(
        {spec.n, spec.targets, spec.max_prob, spec.scale, spec.seed});
    for (std::size_t i = 0; i < spec.pool; ++i) pool.push_back(base->realize(derive_seed(spec.seed, i + 1)));
  } else {
    for (std::size_t i = 0; i < spec.pool; ++i) {
      const auto seed = member_seed(i);
      if (spec.family == "coverage") {
        pool.push_back(make_random_coverage({spec.n, spec.grid, spec.radius, seed}));
      } else if (spec.family == "detection") {
        pool.push_back(make_random_detection({spec.n, spec.targets, spec.max_prob, spec.scale, seed}));
      } else if (spec.family == "gaussian") {
        pool.push_back(make_random_gaussian(
            {spec.n, spec.clusters, spec.noise_min, spec.noise_max, spec.jitter, seed}));
      } else {
        throw ScenarioError("objective.family: unknown family '" + spec.family + "'");
      }
    }
  }
  return ObjectiveSequence(std::move(pool), spec.sequence, spec.sequence_seed);
}

}  // namespace sensel
