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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sensel/algorithms.hpp"
#include "sensel/objectives.hpp"

namespace sensel {

// Raised for malformed or invalid scenario text. The message carries the
// source name and line when one is known, else the offending field.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObjectiveSpec {
  // coverage | detection | detection-realized | gaussian
  std::string family = "coverage";
  std::size_t n = 10;
  std::uint64_t seed = 1;
  // coverage
  std::size_t grid = 10;
  double radius = 0.2;
  // detection
  std::size_t targets = 20;
  double max_prob = 0.9;
  double scale = 0.25;
  // gaussian
  std::size_t clusters = 3;
  double noise_min = 0.1;
  double noise_max = 1.0;
  double jitter = kDefaultJitter;
  // sequence over rounds
  SequenceMode sequence = SequenceMode::kConstant;
  std::size_t pool = 1;
  std::uint64_t sequence_seed = 1;
};

struct ExperimentSpec {
  std::size_t trials = 10;
  std::size_t jobs = 1;
  std::int64_t window = 2000;  // trailing window for summaries
  std::int64_t every = 1;      // CSV row stride in rounds
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> trace;
};

struct Scenario {
  ObjectiveSpec objective;
  RunConfig run;
  ExperimentSpec experiment;
};

// Parses the sectioned key = value format:
//
//   # comment
//   [objective]
//   family = coverage
//   n = 30
//   [run]
//   algorithm = dog
//   [experiment]
//   trials = 10
//
// Unknown sections or keys, duplicate keys and bad values raise
// ScenarioError naming `source` and the line. The result is validated.
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

// Sets `section.key` as the parser would. Throws ScenarioError.
void set_scenario_value(Scenario& scenario, std::string_view section, std::string_view key,
                        std::string_view value);

// Cross-field checks (n, k, rates, pool sizes). Throws ScenarioError.
void validate_scenario(Scenario& scenario);

// Canonical text form; parse_scenario(format_scenario(s)) reproduces s.
std::string format_scenario(const Scenario& scenario);

// Builds the objective pool and sequence described by `spec`.
ObjectiveSequence build_sequence(const ObjectiveSpec& spec);

}  // namespace sensel
