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

#include "sensel/bandit.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "sensel/proportional.hpp"
#include "sensel/types.hpp"

namespace sensel {

double default_exp3_rate(std::size_t n, double reward_guess) {
  if (n <= 1) return 1.0;
  if (!(reward_guess > 0.0)) throw ContractViolation("reward guess must be positive");
  const double nd = static_cast<double>(n);
  return std::min(1.0, std::sqrt(nd * std::log(nd) / reward_guess));
}

Exp3State::Exp3State(std::size_t n, double gamma, double eta)
    : weights_(n, 1.0), gamma_(gamma), eta_(eta) {
  if (n == 0) throw ContractViolation("EXP3 needs at least one arm");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractViolation("gamma must lie in (0, 1]");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractViolation("eta must be positive");
}

double Exp3State::weight_sum() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::vector<double> Exp3State::probabilities() const {
  const double total = weight_sum();
  const double n = static_cast<double>(weights_.size());
  std::vector<double> p(weights_.size());
  for (std::size_t s = 0; s < p.size(); ++s) {
    p[s] = (1.0 - gamma_) * weights_[s] / total + gamma_ / n;
  }
  return p;
}

std::size_t Exp3State::sample(Rng& rng) const {
  const auto p = probabilities();
  return select_proportional<double>(p, uniform01(rng));
}

void Exp3State::update(std::size_t arm, double reward, double p_used) {
  if (arm >= weights_.size()) throw ContractViolation("arm index out of range");
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw ContractViolation("reward " + std::to_string(reward) + " outside [0, 1]");
  }
  if (!(p_used > 0.0)) throw ContractViolation("sampling probability must be positive");
  if (reward == 0.0) return;
  const double exponent = eta_ * reward / p_used;
  const double log_w = std::log(weights_[arm]) + exponent;
  const double others = weight_sum() - weights_[arm];
  const double log_guard = std::log(kWeightOverflowGuard);
  if (log_w < log_guard) {
    weights_[arm] *= std::exp(exponent);
    if (weights_[arm] + others <= kWeightOverflowGuard) return;
    rescale(1.0 / (weights_[arm] + others));
    return;
  }
  // Rescale so the updated arm lands at weight 1. Tiny weights are floored at
  // DBL_MIN to stay positive.
  const double shift = log_w;
  for (std::size_t s = 0; s < weights_.size(); ++s) {
    if (s == arm) continue;
    weights_[s] = std::max(std::exp(std::log(weights_[s]) - shift), DBL_MIN);
  }
  weights_[arm] = 1.0;
}

void Exp3State::rescale(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ContractViolation("rescale factor must be positive");
  for (double& w : weights_) w = std::max(w * c, DBL_MIN);
}

void Exp3State::set_weights(std::vector<double> weights) {
  if (weights.size() != weights_.size()) throw ContractViolation("weight count mismatch");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ContractViolation("weights must be positive");
  }
  weights_ = std::move(weights);
}

// ---------------------------------------------------------------------------

std::vector<double> threshold_grid(std::size_t m) {
  if (m == 0) throw ContractViolation("threshold grid needs at least one value");
  std::vector<double> grid(m);
  for (std::size_t i = 0; i < m; ++i) {
    grid[i] = m == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(m - 1);
  }
  return grid;
}

WmrState::WmrState(std::vector<double> thresholds, double eta)
    : thresholds_(std::move(thresholds)), weights_(thresholds_.size(), 1.0), eta_(eta) {
  if (thresholds_.empty()) throw ContractViolation("WMR needs at least one threshold");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractViolation("eta must be positive");
}

std::vector<double> WmrState::probabilities() const {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights_[i] / total;
  return p;
}

std::size_t WmrState::select(Rng& rng) {
  current_ = select_proportional<double>(weights_, uniform01(rng));
  return current_;
}

void WmrState::update(std::span<const double> psi, std::span<const double> q,
                      bool did_activate) {
  if (psi.size() != weights_.size() || q.size() != weights_.size()) {
    throw ContractViolation("WMR update: size mismatch");
  }
  for (double qi : q) {
    if (!(qi > 0.0)) throw ContractViolation("WMR update: activation probability must be positive");
  }
  if (!did_activate) return;
  // Work in the log domain and renormalize so the largest weight stays in a
  // representable range.
  std::vector<double> log_w(weights_.size());
  double top = -INFINITY;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    log_w[i] = std::log(weights_[i]) + eta_ * psi[i] / q[i];
    top = std::max(top, log_w[i]);
  }
  const double log_guard = std::log(kWeightOverflowGuard);
  const double shift = (top > log_guard || top < -log_guard) ? top : 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i] = std::max(std::exp(log_w[i] - shift), DBL_MIN);
  }
}

double threshold_reward(double own_gain, double best_other_gain, double cost,
                        double estimate, double tau) {
  const double gain = std::max(own_gain - best_other_gain, 0.0);
  return estimate < tau ? cost - gain : gain - cost;
}

double threshold_activation_probability(double estimate, double tau, double baseline) {
  return estimate >= tau ? 1.0 : baseline;
}

}  // namespace sensel
