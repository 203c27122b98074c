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

#include "sensel/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sensel/proportional.hpp"
#include "sensel/sampling.hpp"

namespace sensel {

std::string_view to_string(MessageType type) {
  switch (type) {
    case MessageType::kSampled: return "sampled";
    case MessageType::kSelect: return "select";
    case MessageType::kWeightUpdate: return "weight-update";
    case MessageType::kReport: return "report";
    case MessageType::kReply: return "reply";
    case MessageType::kRerun: return "rerun";
  }
  return "?";
}

std::string_view to_string(StageMode mode) {
  switch (mode) {
    case StageMode::kDogBroadcast: return "dog-broadcast";
    case StageMode::kLazyStar: return "lazydog-star";
    case StageMode::kLazyStarNoRerun: return "lazydog-star-no-rerun";
    case StageMode::kOdDog: return "oddog";
  }
  return "?";
}

// ---------------------------------------------------------------------------

void MessageStats::ensure_round() {
  if (broadcast_hist_.empty()) begin_round();
}

void MessageStats::begin_round() {
  broadcast_hist_.push_back(0);
  unicast_hist_.push_back(0);
  activation_hist_.push_back(0);
  boosted_hist_.push_back(0);
}

void MessageStats::add_broadcast() {
  ensure_round();
  ++broadcasts_;
  ++broadcast_hist_.back();
}

void MessageStats::add_unicast() {
  ensure_round();
  ++unicasts_;
  ++unicast_hist_.back();
}

void MessageStats::add_activations(std::int64_t count) {
  ensure_round();
  activations_ += count;
  activation_hist_.back() += count;
}

void MessageStats::add_boosted(std::int64_t count) {
  ensure_round();
  boosted_ += count;
  boosted_hist_.back() += count;
}

// ---------------------------------------------------------------------------

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

namespace {

// log(e^x - 1) for x > 0
double log_expm1(double x) {
  return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

double mass_from_logs(double log_w, double log_z, double gamma, double n) {
  return (1.0 - gamma) * std::exp(log_w - log_z) + gamma / n;
}

double clamp_reward(double r) { return std::clamp(r, 0.0, 1.0); }

void add_unique(SensorSet& set, SensorId v) {
  if (std::find(set.begin(), set.end(), v) == set.end()) set.push_back(v);
}

}  // namespace

Network::Network(Model model, std::size_t n, std::size_t stages, double n_estimate_factor)
    : model_(model), stages_(stages) {
  if (n == 0) throw ContractViolation("network needs at least one sensor");
  if (stages == 0) throw ContractViolation("network needs at least one stage");
  if (!(n_estimate_factor > 0.0)) throw ContractViolation("n estimate factor must be positive");
  const double log_n = std::log(static_cast<double>(n));
  nodes_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& node = nodes_[v];
    node.id = static_cast<SensorId>(v);
    node.log_weights.assign(stages, 0.0);
    node.log_normalizers.assign(stages, log_n);
    node.n_estimate = n_estimate_factor * static_cast<double>(n);
  }
}

void Network::broadcast(MessageType type, SensorId src) {
  stats_.add_broadcast();
  log_message(type, src, -2);
}

void Network::unicast(MessageType type, Endpoint src, Endpoint dst) {
  if (src.server == dst.server) {
    throw ModelViolation("unicast must connect a sensor and the base station");
  }
  stats_.add_unicast();
  log_message(type, src.server ? -1 : src.id, dst.server ? -1 : dst.id);
}

void Network::begin_round() {
  ++round_;
  stage_ = 0;
  round_selection_.clear();
  for (auto& node : nodes_) node.selected_view.clear();
  stats_.begin_round();
}

void Network::record_selection(SensorId v) { add_unique(round_selection_, v); }

void Network::log_message(MessageType type, std::int64_t src, std::int64_t dst) {
  if (trace_on_) trace_.push_back({round_, stage_, type, src, dst});
}

void write_trace(std::span<const TraceEntry> trace, std::ostream& os) {
  os << "round,stage,type,src,dst\n";
  for (const auto& e : trace) {
    os << e.round << ',' << e.stage << ',' << to_string(e.type) << ',';
    if (e.src == -1) os << "server"; else os << e.src;
    os << ',';
    if (e.dst == -1) os << "server"; else if (e.dst == -2) os << "*"; else os << e.dst;
    os << '\n';
  }
}

void Network::write_trace(std::ostream& os) const { sensel::write_trace(trace_, os); }

void Network::enable_thresholds(const std::vector<double>& grid, double eta,
                                const std::vector<double>& costs) {
  if (costs.size() != nodes_.size()) throw ContractViolation("one activation cost per sensor");
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    nodes_[v].thresholds.assign(stages_, WmrState(grid, eta));
    nodes_[v].cost = costs[v];
  }
}

void BroadcastNetwork::unicast(MessageType, Endpoint, Endpoint) {
  throw ModelViolation("the broadcast model has no point-to-point messages");
}

StarNetwork::StarNetwork(std::size_t n, std::size_t stages, double n_estimate_factor)
    : Network(Model::kStar, n, stages, n_estimate_factor),
      server_log_z_(stages, std::log(static_cast<double>(n))) {}

void StarNetwork::broadcast(MessageType, SensorId) {
  throw ModelViolation("sensors in a star network can only talk to the base station");
}

void StarNetwork::unicast(MessageType type, Endpoint src, Endpoint dst) {
  Network::unicast(type, src, dst);
}

// ---------------------------------------------------------------------------

namespace {

void validate(const Network& net, std::size_t stage, const Objective& f,
              const StageParams& params) {
  if (stage >= net.stages()) throw ContractViolation("stage index out of range");
  if (f.size() != net.size()) throw ContractViolation("objective universe does not match network");
  if (!(params.alpha > 0.0)) throw ContractViolation("alpha must be positive");
  if (!(params.gamma > 0.0 && params.gamma <= 1.0)) throw ContractViolation("gamma must lie in (0, 1]");
  if (!(params.eta > 0.0)) throw ContractViolation("eta must be positive");
}

StageOutcome dog_broadcast_stage(BroadcastNetwork& net, std::size_t i, const Objective& f,
                                 const StageParams& params, Rng& rng) {
  auto& nodes = net.nodes();
  StageOutcome out;
  const auto before = net.stats().messages();
  std::vector<SensorId> active;
  std::vector<std::int64_t> counts;
  for (;;) {
    active.clear();
    counts.clear();
    for (auto& node : nodes) {
      const double r = uniform01(rng);
      const double lambda = params.alpha * mass_from_logs(node.log_weights[i],
                                                          node.log_normalizers[i],
                                                          params.gamma, node.n_estimate);
      const std::int64_t x = poisson_inverse_cdf(std::min(lambda, kMaxPoissonMean), r);
      if (x >= 1) {
        net.broadcast(MessageType::kSampled, node.id);
        active.push_back(node.id);
        counts.push_back(x);
      }
    }
    out.activations += static_cast<std::int64_t>(active.size());
    if (!active.empty()) break;
    ++out.reruns;  // timeout, sensors resample
  }
  // the minimum-id activator coordinates
  const SensorId coordinator = active.front();
  const SensorId chosen = active[select_proportional<std::int64_t>(counts, uniform01(rng))];
  net.broadcast(MessageType::kSelect, coordinator);

  auto& sel = nodes[chosen];
  const double pi = clamp_reward(f.marginal_gain(sel.selected_view, chosen));
  const double mass = mass_from_logs(sel.log_weights[i], sel.log_normalizers[i],
                                     params.gamma, sel.n_estimate);
  const double x = params.eta * pi / mass;
  net.broadcast(MessageType::kWeightUpdate, chosen);
  if (x > 0.0) {
    const double log_delta = sel.log_weights[i] + log_expm1(x);
    sel.log_weights[i] += x;
    for (auto& node : nodes) node.log_normalizers[i] = log_add(node.log_normalizers[i], log_delta);
  }
  for (auto& node : nodes) add_unique(node.selected_view, chosen);
  net.record_selection(chosen);

  out.selected = chosen;
  out.gain = pi;
  out.messages = net.stats().messages() - before;
  net.stats().add_activations(out.activations);
  return out;
}

struct Report {
  SensorId id;
  double draw;
  bool boosted;
};

// Shared server side of the star-model stages.
StageOutcome star_stage(StarNetwork& net, std::size_t i, const Objective& f,
                        const StageParams& params, bool rerun, bool observation_dependent,
                        Rng& rng) {
  auto& nodes = net.nodes();
  const double n_true = static_cast<double>(nodes.size());
  const auto server = Endpoint::base_station();
  StageOutcome out;
  const auto before = net.stats().messages();
  const SensorSet& chosen_so_far = net.round_selection();

  // local payoff estimates and thresholds are fixed for the stage
  std::vector<double> estimate;
  std::vector<double> tau;
  if (observation_dependent) {
    estimate.resize(nodes.size());
    tau.resize(nodes.size());
    for (auto& node : nodes) {
      estimate[node.id] = f.marginal_gain(chosen_so_far, node.id);
      if (params.fixed_threshold) {
        tau[node.id] = *params.fixed_threshold;
      } else {
        if (node.thresholds.empty()) {
          throw ContractViolation("OD-DOG stage without threshold learners");
        }
        node.thresholds[i].select(rng);
        tau[node.id] = node.thresholds[i].current_threshold();
      }
    }
  }

  std::vector<Report> reports;
  for (;;) {
    reports.clear();
    for (auto& node : nodes) {
      const double r = uniform01(rng);
      const LazySensorView view{std::exp(node.log_weights[i] - node.log_normalizers[i]), 1.0};
      const bool baseline =
          lazy_activation_decision(view, params.gamma, params.alpha, node.n_estimate, r);
      const bool boosted = observation_dependent && estimate[node.id] >= tau[node.id];
      if (baseline || boosted) {
        net.unicast(MessageType::kReport, Endpoint::sensor(node.id), server);
        reports.push_back({node.id, r, boosted});
      }
    }
    out.activations += static_cast<std::int64_t>(reports.size());
    for (const auto& rep : reports) out.boosted += rep.boosted ? 1 : 0;

    const double log_z = net.server_log_normalizer(i);
    std::optional<SensorId> chosen;
    double importance = 1.0;
    std::vector<double> gains(reports.size(), 0.0);
    if (observation_dependent) {
      for (std::size_t j = 0; j < reports.size(); ++j) {
        gains[j] = f.marginal_gain(chosen_so_far, reports[j].id);
      }
    }
    const bool any_boosted =
        std::any_of(reports.begin(), reports.end(), [](const Report& r) { return r.boosted; });
    if (any_boosted) {
      // greedy pick among activators: best marginal gain, fresh sensors first,
      // ties to the smaller id (reports are in id order)
      std::optional<std::size_t> best;
      for (int pass = 0; pass < 2 && !best; ++pass) {
        for (std::size_t j = 0; j < reports.size(); ++j) {
          const bool fresh = std::find(chosen_so_far.begin(), chosen_so_far.end(),
                                       reports[j].id) == chosen_so_far.end();
          if (pass == 0 && !fresh) continue;
          if (!best || gains[j] > gains[*best]) best = j;
        }
      }
      chosen = reports[*best].id;
      importance = reports[*best].boosted
                       ? 1.0
                       : mass_from_logs(nodes[*chosen].log_weights[i], log_z, params.gamma, n_true);
    } else if (!reports.empty()) {
      std::vector<LazyReport> lazy;
      lazy.reserve(reports.size());
      for (const auto& rep : reports) {
        lazy.push_back({rep.id, rep.draw, std::exp(nodes[rep.id].log_weights[i] - log_z)});
      }
      const auto res = server_resolve(lazy, 1.0, params.gamma, params.alpha, n_true, rng);
      chosen = res.selected;
      if (chosen) {
        importance = mass_from_logs(nodes[*chosen].log_weights[i], log_z, params.gamma, n_true);
      }
    }

    double new_log_z = log_z;
    if (chosen) {
      auto& sel = nodes[*chosen];
      const double pi = clamp_reward(f.marginal_gain(chosen_so_far, *chosen));
      const double x = params.eta * pi / importance;
      if (x > 0.0) {
        new_log_z = log_add(log_z, sel.log_weights[i] + log_expm1(x));
        sel.log_weights[i] += x;
      }
      net.set_server_log_normalizer(i, new_log_z);
      out.selected = chosen;
      out.gain = pi;
    }

    // replies <Z, w> refresh every participant's estimate
    for (const auto& rep : reports) {
      net.unicast(MessageType::kReply, server, Endpoint::sensor(rep.id));
      nodes[rep.id].log_normalizers[i] = new_log_z;
    }

    if (observation_dependent && !params.fixed_threshold) {
      for (std::size_t j = 0; j < reports.size(); ++j) {
        auto& node = nodes[reports[j].id];
        double best_other = 0.0;
        for (std::size_t l = 0; l < reports.size(); ++l) {
          if (l != j) best_other = std::max(best_other, gains[l]);
        }
        const double baseline = std::min(
            1.0, params.alpha * mass_from_logs(node.log_weights[i], node.log_normalizers[i],
                                               params.gamma, node.n_estimate));
        auto& learner = node.thresholds[i];
        std::vector<double> psi(learner.size());
        std::vector<double> q(learner.size());
        for (std::size_t m = 0; m < learner.size(); ++m) {
          const double t = learner.thresholds()[m];
          psi[m] = threshold_reward(gains[j], best_other, node.cost, estimate[node.id], t);
          q[m] = threshold_activation_probability(estimate[node.id], t, std::max(baseline, 1e-300));
        }
        learner.update(psi, q, true);
      }
    }

    if (chosen || !rerun) break;
    for (auto& node : nodes) net.unicast(MessageType::kRerun, server, Endpoint::sensor(node.id));
    ++out.reruns;
  }
  if (out.selected) net.record_selection(*out.selected);
  out.messages = net.stats().messages() - before;
  net.stats().add_activations(out.activations);
  net.stats().add_boosted(out.boosted);
  return out;
}

}  // namespace

StageOutcome run_stage(Network& net, std::size_t stage, const Objective& f, StageMode mode,
                       const StageParams& params, Rng& rng) {
  validate(net, stage, f, params);
  net.set_stage(static_cast<std::int64_t>(stage));
  if (mode == StageMode::kDogBroadcast) {
    auto* bnet = dynamic_cast<BroadcastNetwork*>(&net);
    if (!bnet) throw ModelViolation("dog-broadcast stages need a broadcast network");
    return dog_broadcast_stage(*bnet, stage, f, params, rng);
  }
  auto* snet = dynamic_cast<StarNetwork*>(&net);
  if (!snet) throw ModelViolation(std::string(to_string(mode)) + " stages need a star network");
  switch (mode) {
    case StageMode::kLazyStar:
      return star_stage(*snet, stage, f, params, true, false, rng);
    case StageMode::kLazyStarNoRerun:
      return star_stage(*snet, stage, f, params, false, false, rng);
    case StageMode::kOdDog:
      return star_stage(*snet, stage, f, params, params.rerun, true, rng);
    case StageMode::kDogBroadcast:
      break;
  }
  return {};
}

}  // namespace sensel
