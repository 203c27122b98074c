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
#include <span>

namespace sensel::stats {

// Streaming mean and variance (Welford).
class RunningMean {
 public:
  void add(double x);
  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const;          // sample variance
  double standard_error() const;    // sqrt(variance / count)

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Binomial standard deviation of an empirical frequency over `trials` draws.
double binomial_sigma(double p, std::int64_t trials);

// |hits/trials - p| <= z * binomial_sigma(p, trials)
bool within_binomial_band(std::int64_t hits, std::int64_t trials, double p, double z = 3.0);

// Pearson chi-square statistic of observed counts against expected
// probabilities (which must sum to 1).
double chi_square_statistic(std::span<const std::int64_t> observed,
                            std::span<const double> expected_probabilities);

// Upper tail P(X >= statistic) for X ~ chi-square(dof).
double chi_square_pvalue(double statistic, double dof);

}  // namespace sensel::stats
