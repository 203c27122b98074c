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

#include <cstddef>
#include <span>
#include <vector>

#include "sensel/random.hpp"

namespace sensel {

// Weight sums above this are rescaled by a common factor; probabilities are
// unchanged.
inline constexpr double kWeightOverflowGuard = 1e100;

// min(1, sqrt(n ln n / g)); used for both the exploration rate and the
// learning rate when none is given. `reward_guess` is a guess of the largest
// cumulative reward of a single arm.
double default_exp3_rate(std::size_t n, double reward_guess);

// EXP3 over n arms.
class Exp3State {
 public:
  Exp3State(std::size_t n, double gamma, double eta);

  std::size_t arms() const { return weights_.size(); }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight_sum() const;

  // p_s = (1 - gamma) w_s / sum(w) + gamma / n
  std::vector<double> probabilities() const;

  // Inversion over half-open cumulative intervals of probabilities().
  std::size_t sample(Rng& rng) const;

  // w_arm <- w_arm * exp(eta * reward / p_used). Rescales every weight when
  // the sum exceeds kWeightOverflowGuard.
  void update(std::size_t arm, double reward, double p_used);

  // Multiplies every weight by c > 0.
  void rescale(double c);

  void set_weights(std::vector<double> weights);

 private:
  std::vector<double> weights_;
  double gamma_;
  double eta_;
};

// Uniform grid {0, 1/(m-1), ..., 1}; {0} when m == 1.
std::vector<double> threshold_grid(std::size_t m);

// Randomized weighted majority over activation thresholds, with the
// importance-weighted update used when only activated rounds are observed.
class WmrState {
 public:
  WmrState(std::vector<double> thresholds, double eta);

  std::size_t size() const { return thresholds_.size(); }
  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<double>& weights() const { return weights_; }
  double eta() const { return eta_; }

  std::size_t current() const { return current_; }
  double current_threshold() const { return thresholds_[current_]; }

  std::vector<double> probabilities() const;

  // Draws an index proportionally to the weights and remembers it as the
  // threshold in play.
  std::size_t select(Rng& rng);

  // If did_activate: w_i <- w_i * exp(eta * psi_i / q_i) for every i.
  // Full-information play passes q = 1 everywhere.
  void update(std::span<const double> psi, std::span<const double> q, bool did_activate);

 private:
  std::vector<double> thresholds_;
  std::vector<double> weights_;
  double eta_;
  std::size_t current_ = 0;
};

// Payoff of playing threshold tau in the activation game:
//   gain = max(own_gain - best_other_gain, 0)
//   tau <= estimate (activates):  gain - cost
//   tau >  estimate (stays quiet): cost - gain
double threshold_reward(double own_gain, double best_other_gain, double cost,
                        double estimate, double tau);

// Probability that a sensor activates given threshold tau: 1 when the local
// estimate reaches tau, otherwise its baseline activation probability.
double threshold_activation_probability(double estimate, double tau, double baseline);

}  // namespace sensel
