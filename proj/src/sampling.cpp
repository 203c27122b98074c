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

#include "sensel/sampling.hpp"

#include <cmath>
#include <string>

#include "sensel/proportional.hpp"

namespace sensel {

namespace {

// Coordinator step shared by the count-based protocols.
void resolve_by_counts(SamplingOutcome& out, Rng& rng) {
  if (out.activated.empty()) return;
  std::vector<std::int64_t> counts;
  counts.reserve(out.activated.size());
  for (const auto& a : out.activated) counts.push_back(a.count);
  const auto idx = select_proportional<std::int64_t>(counts, uniform01(rng));
  out.selected = out.activated[idx].id;
}

}  // namespace

void require_simplex(std::span<const double> p) {
  if (p.empty()) throw ContractViolation("probability vector is empty");
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ContractViolation("probabilities must be finite and non-negative");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ContractViolation("probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

SamplingOutcome simple_protocol(std::span<const double> p, Rng& rng) {
  require_simplex(p);
  SamplingOutcome out;
  for (std::size_t v = 0; v < p.size(); ++v) {
    const double r = uniform01(rng);
    if (r < p[v]) out.activated.push_back({static_cast<SensorId>(v), 1, r});
  }
  out.activations = static_cast<std::int64_t>(out.activated.size());
  out.messages = out.activations;
  if (!out.activated.empty()) {
    const auto m = out.activated.size();
    auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(m));
    if (idx >= m) idx = m - 1;
    out.selected = out.activated[idx].id;
  }
  return out;
}

SamplingOutcome improved_protocol(std::span<const double> p, std::int64_t N, Rng& rng) {
  require_simplex(p);
  if (N < 1) throw ContractViolation("improved protocol needs N >= 1");
  SamplingOutcome out;
  const double trial_p = 1.0 / static_cast<double>(N);
  for (std::size_t v = 0; v < p.size(); ++v) {
    // guard against N*p landing a hair above an integer
    const double scaled = static_cast<double>(N) * p[v];
    const auto trials = static_cast<std::int64_t>(std::ceil(scaled - 1e-9 * scaled));
    std::int64_t x = 0;
    for (std::int64_t j = 0; j < trials; ++j) x += bernoulli(rng, trial_p) ? 1 : 0;
    if (x >= 1) out.activated.push_back({static_cast<SensorId>(v), x, 0.0});
  }
  out.activations = static_cast<std::int64_t>(out.activated.size());
  out.messages = out.activations;
  resolve_by_counts(out, rng);
  return out;
}

SamplingOutcome pms_protocol(std::span<const double> p, double alpha, Rng& rng) {
  require_simplex(p);
  if (!(alpha > 0.0)) throw ContractViolation("alpha must be positive");
  SamplingOutcome out;
  for (std::size_t v = 0; v < p.size(); ++v) {
    const double r = uniform01(rng);
    const double lambda = alpha * p[v];
    if (lambda <= 0.0) continue;
    const std::int64_t x = poisson_inverse_cdf(lambda, r);
    if (x >= 1) out.activated.push_back({static_cast<SensorId>(v), x, r});
  }
  out.activations = static_cast<std::int64_t>(out.activated.size());
  out.messages = out.activations;
  resolve_by_counts(out, rng);
  return out;
}

SamplingOutcome pms_until_selected(std::span<const double> p, double alpha, Rng& rng) {
  std::int64_t activations = 0;
  std::int64_t reruns = 0;
  for (;;) {
    SamplingOutcome out = pms_protocol(p, alpha, rng);
    activations += out.activations;
    if (out.selected) {
      out.activations = activations;
      out.messages = activations;
      out.reruns = reruns;
      return out;
    }
    ++reruns;
  }
}

std::int64_t poisson_inverse_cdf(double lambda, double r) {
  if (!(lambda > 0.0) || !(lambda <= kMaxPoissonMean)) {
    throw ContractViolation("Poisson mean " + std::to_string(lambda) +
                            " outside (0, " + std::to_string(kMaxPoissonMean) + "]");
  }
  if (!(r >= 0.0)) throw ContractViolation("uniform draw must be >= 0");
  if (!(r < 1.0)) throw ContractViolation("uniform draw r = 1 has no finite inverse");
  const long double lam = lambda;
  const long double target = r;
  long double pmf = std::exp(-lam);
  long double cdf = pmf;
  long double comp = 0.0L;  // Neumaier compensation
  std::int64_t x = 0;
  // Past this point the remaining tail is below long double resolution.
  const auto cap = static_cast<std::int64_t>(lambda + 40.0 * std::sqrt(lambda) + 60.0);
  while (cdf + comp < target && x < cap) {
    ++x;
    pmf *= lam / static_cast<long double>(x);
    const long double t = cdf + pmf;
    if (std::fabs(cdf) >= std::fabs(pmf)) {
      comp += (cdf - t) + pmf;
    } else {
      comp += (pmf - t) + cdf;
    }
    cdf = t;
  }
  return x;
}

double activation_mass(double weight, double normalizer, double gamma, double n) {
  return (1.0 - gamma) * weight / normalizer + gamma / n;
}

bool lazy_activation_decision(const LazySensorView& view, double gamma, double alpha,
                              double n, double r) {
  const double mass = activation_mass(view.weight, view.normalizer_estimate, gamma, n);
  return r >= 1.0 - alpha * mass;
}

ServerResolution server_resolve(std::span<const LazyReport> reports, double normalizer,
                                double gamma, double alpha, double n, Rng& rng) {
  if (!(normalizer > 0.0)) throw ContractViolation("normalizer must be positive");
  ServerResolution res;
  res.counts.reserve(reports.size());
  bool any = false;
  for (const auto& rep : reports) {
    const double lambda = alpha * activation_mass(rep.weight, normalizer, gamma, n);
    const std::int64_t y = poisson_inverse_cdf(lambda, rep.draw);
    res.counts.push_back(y);
    any = any || y > 0;
  }
  if (any) {
    const auto idx = select_proportional<std::int64_t>(res.counts, uniform01(rng));
    res.selected = reports[idx].id;
  }
  return res;
}

SamplingOutcome lazy_pms_round(std::span<const LazySensorView> views, double normalizer,
                               double gamma, double alpha, bool rerun, Rng& rng) {
  const double n = static_cast<double>(views.size());
  SamplingOutcome out;
  std::vector<LazyReport> reports;
  for (;;) {
    reports.clear();
    for (std::size_t v = 0; v < views.size(); ++v) {
      const double r = uniform01(rng);
      if (lazy_activation_decision(views[v], gamma, alpha, n, r)) {
        reports.push_back({static_cast<SensorId>(v), r, views[v].weight});
      }
    }
    out.activations += static_cast<std::int64_t>(reports.size());
    const ServerResolution res = server_resolve(reports, normalizer, gamma, alpha, n, rng);
    out.activated.clear();
    for (std::size_t j = 0; j < reports.size(); ++j) {
      out.activated.push_back({reports[j].id, res.counts[j], reports[j].draw});
    }
    if (res.selected || !rerun) {
      out.selected = res.selected;
      break;
    }
    ++out.reruns;
  }
  // report plus reply per activation, and one trigger per sensor per rerun
  out.messages = 2 * out.activations + out.reruns * static_cast<std::int64_t>(views.size());
  return out;
}

}  // namespace sensel
