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
#include <optional>
#include <span>
#include <vector>

#include "sensel/random.hpp"
#include "sensel/types.hpp"

namespace sensel {

// One sensor that activated in a protocol run, with the count it drew
// (Bernoulli, binomial or Poisson depending on the protocol) and the uniform
// draw behind it.
struct Activation {
  SensorId id = -1;
  std::int64_t count = 0;
  double draw = 0.0;
};

// Result of one invocation of a one-of-n sampling protocol.
//
// `activated` lists the sensors of the final run; `activations` and
// `messages` accumulate over reruns. Each activation is one announcement.
struct SamplingOutcome {
  std::optional<SensorId> selected;
  std::vector<Activation> activated;
  std::int64_t activations = 0;
  std::int64_t messages = 0;
  std::int64_t reruns = 0;
};

// Throws ContractViolation unless p is non-negative and sums to 1 (1e-9).
void require_simplex(std::span<const double> p);

// Each sensor activates with probability p_v; the minimum-id activator then
// picks one activator uniformly.
SamplingOutcome simple_protocol(std::span<const double> p, Rng& rng);

// X_v ~ Binomial(ceil(N p_v), 1/N); selection proportional to X_v.
SamplingOutcome improved_protocol(std::span<const double> p, std::int64_t N, Rng& rng);

// Poisson multinomial sampling: X_v ~ Poisson(alpha p_v), drawn by inversion;
// selection proportional to X_v. P{v selected} = (1 - e^-alpha) p_v.
SamplingOutcome pms_protocol(std::span<const double> p, double alpha, Rng& rng);

// Reruns pms_protocol with fresh draws until something is selected.
SamplingOutcome pms_until_selected(std::span<const double> p, double alpha, Rng& rng);

inline constexpr double kMaxPoissonMean = 64.0;

// min{x : P(X <= x) >= r} for X ~ Poisson(lambda), by compensated summation
// of the pmf in extended precision. Requires 0 < lambda <= 64, 0 <= r < 1.
std::int64_t poisson_inverse_cdf(double lambda, double r);

// rho(w, Z) = (1 - gamma) w / Z + gamma / n
double activation_mass(double weight, double normalizer, double gamma, double n);

// What a sensor knows locally under lazy renormalization.
struct LazySensorView {
  double weight = 1.0;
  double normalizer_estimate = 1.0;  // lower bound on the true normalizer
};

// r >= 1 - alpha * rho(w, Z_hat). Whenever the server-side Poisson draw from
// the same r is positive, this fires.
bool lazy_activation_decision(const LazySensorView& view, double gamma, double alpha,
                              double n, double r);

// What an activated sensor reports to the server.
struct LazyReport {
  SensorId id = -1;
  double draw = 0.0;
  double weight = 1.0;
};

struct ServerResolution {
  std::optional<SensorId> selected;
  std::vector<std::int64_t> counts;  // Y_v, aligned with the reports
};

// Y_v = poisson_inverse_cdf(alpha * rho(w_v, Z), r_v) with the true
// normalizer; selects proportionally to Y_v, or nothing if every Y_v is 0.
ServerResolution server_resolve(std::span<const LazyReport> reports, double normalizer,
                                double gamma, double alpha, double n, Rng& rng);

// One frozen-weight round of distributed EXP3 under lazy renormalization:
// every sensor draws r_v, activates on its local estimate, and the server
// resolves with `normalizer`. With `rerun`, repeats until a sensor is picked.
SamplingOutcome lazy_pms_round(std::span<const LazySensorView> views, double normalizer,
                               double gamma, double alpha, bool rerun, Rng& rng);

}  // namespace sensel
