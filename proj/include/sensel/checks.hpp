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
#include <functional>
#include <string>
#include <vector>

#include "sensel/random.hpp"

namespace sensel::checks {

// Outcome of one statistical or exhaustive property check.
struct CheckResult {
  int criterion = 0;    // acceptance criterion number, 0 for extra invariants
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 20260101;
  // Multiplies Monte Carlo sample sizes (1 = full size). Values below 1 give
  // a faster, statistically weaker run.
  double scale = 1.0;
};

struct CheckSuite {
  int criterion = 0;
  std::string title;
  std::function<std::vector<CheckResult>(const CheckOptions&)> run;
};

// The eleven acceptance criteria, in order.
const std::vector<CheckSuite>& acceptance_suites();

// Further module invariants exercised by `verify`.
const std::vector<CheckSuite>& invariant_suites();

std::vector<CheckResult> pms_selection_law(const CheckOptions& options);
std::vector<CheckResult> pms_message_budget(const CheckOptions& options);
std::vector<CheckResult> rerun_activation_bound(const CheckOptions& options);
std::vector<CheckResult> simple_protocol_ratio(const CheckOptions& options);
std::vector<CheckResult> distribution_equivalence(const CheckOptions& options);
std::vector<CheckResult> lazy_over_activation(const CheckOptions& options);
std::vector<CheckResult> greedy_guarantee(const CheckOptions& options);
std::vector<CheckResult> submodularity_oracle(const CheckOptions& options);
std::vector<CheckResult> dog_convergence(const CheckOptions& options);
std::vector<CheckResult> oddog_extremes(const CheckOptions& options);
std::vector<CheckResult> determinism(const CheckOptions& options);

// Exact P{sensor v is selected} under the simple protocol, by enumerating
// every activation pattern. Requires p.size() <= 20.
std::vector<double> simple_protocol_exact(const std::vector<double>& p);

// A random point of the simplex (normalized exponentials).
std::vector<double> random_simplex(std::size_t n, Rng& rng);

// Empirical vs. theoretical law of a one-of-n protocol.
struct SampleBenchRow {
  std::string label;        // sensor id or "none"
  double theoretical = 0.0; // NaN when no closed form is known
  double empirical = 0.0;
  double sigma = 0.0;       // binomial standard deviation at the theoretical value
};

struct SampleBenchReport {
  std::string protocol;
  std::vector<double> p;
  std::vector<SampleBenchRow> rows;
  double mean_activations = 0.0;
  double activations_stderr = 0.0;
  double theoretical_activations = 0.0;  // NaN when unknown
};

// protocol: "pms", "rerun", "simple" or "improved". p empty: uniform.
SampleBenchReport sample_bench(const std::string& protocol, std::vector<double> p,
                               double alpha, std::int64_t improved_n, std::int64_t trials,
                               std::uint64_t seed);

}  // namespace sensel::checks
