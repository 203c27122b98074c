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

#include "sensel/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace sensel::stats {

void RunningMean::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

double RunningMean::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningMean::standard_error() const {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

double binomial_sigma(double p, std::int64_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

bool within_binomial_band(std::int64_t hits, std::int64_t trials, double p, double z) {
  const double freq = static_cast<double>(hits) / static_cast<double>(trials);
  return std::abs(freq - p) <= z * binomial_sigma(p, trials);
}

double chi_square_statistic(std::span<const std::int64_t> observed,
                            std::span<const double> expected_probabilities) {
  if (observed.size() != expected_probabilities.size()) {
    throw std::invalid_argument("chi-square: size mismatch");
  }
  const auto total = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::int64_t{0}));
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * expected_probabilities[i];
    if (e <= 0.0) {
      if (observed[i] != 0) return INFINITY;
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
  }
  return stat;
}

double chi_square_pvalue(double statistic, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi-square: dof must be positive");
  if (!std::isfinite(statistic)) return 0.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace sensel::stats
