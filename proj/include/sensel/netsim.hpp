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
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sensel/bandit.hpp"
#include "sensel/objectives.hpp"
#include "sensel/random.hpp"
#include "sensel/types.hpp"

namespace sensel {

enum class Model { kBroadcast, kStar };

enum class MessageType {
  kSampled,       // broadcast <sampled X_v, id>
  kSelect,        // broadcast <select id>
  kWeightUpdate,  // broadcast <weight update delta, id>
  kReport,        // sensor -> server <r_v, w_v>
  kReply,         // server -> sensor <Z, w>
  kRerun,         // server -> sensor, restart the stage
};

std::string_view to_string(MessageType type);

// A message endpoint: the base station or one sensor.
struct Endpoint {
  bool server = false;
  SensorId id = -1;

  static Endpoint base_station() { return {true, -1}; }
  static Endpoint sensor(SensorId v) { return {false, v}; }
};

struct TraceEntry {
  std::int64_t round = 0;
  std::int64_t stage = 0;
  MessageType type = MessageType::kSampled;
  std::int64_t src = 0;  // -1: server
  std::int64_t dst = 0;  // -1: server, -2: every sensor
};

// Unit-cost message and activation counters with per-round history.
class MessageStats {
 public:
  void begin_round();
  void add_broadcast();
  void add_unicast();
  void add_activations(std::int64_t count);
  void add_boosted(std::int64_t count);

  std::int64_t broadcasts() const { return broadcasts_; }
  std::int64_t unicasts() const { return unicasts_; }
  std::int64_t messages() const { return broadcasts_ + unicasts_; }
  std::int64_t activations() const { return activations_; }
  std::int64_t boosted() const { return boosted_; }

  const std::vector<std::int64_t>& broadcast_history() const { return broadcast_hist_; }
  const std::vector<std::int64_t>& unicast_history() const { return unicast_hist_; }
  const std::vector<std::int64_t>& activation_history() const { return activation_hist_; }
  const std::vector<std::int64_t>& boosted_history() const { return boosted_hist_; }

 private:
  void ensure_round();

  std::int64_t broadcasts_ = 0;
  std::int64_t unicasts_ = 0;
  std::int64_t activations_ = 0;
  std::int64_t boosted_ = 0;
  std::vector<std::int64_t> broadcast_hist_;
  std::vector<std::int64_t> unicast_hist_;
  std::vector<std::int64_t> activation_hist_;
  std::vector<std::int64_t> boosted_hist_;
};

// Local state of one sensor. Weights and normalizers are carried as natural
// logarithms so arbitrarily long runs cannot overflow; in the broadcast model
// the normalizers are exact, in the star model they are lazy lower bounds.
struct SensorNode {
  SensorId id = -1;
  std::vector<double> log_weights;      // one per stage
  std::vector<double> log_normalizers;  // one per stage
  SensorSet selected_view;              // S_{v,t}
  std::vector<WmrState> thresholds;     // one per stage; empty unless OD-DOG
  double cost = 0.0;                    // activation cost (OD-DOG)
  double n_estimate = 1.0;              // this sensor's belief about n
};

// One line per message: round,stage,type,src,dst (server as "server",
// broadcast destination as "*"), after a header line.
void write_trace(std::span<const TraceEntry> trace, std::ostream& os);

// log(exp(a) + exp(b))
double log_add(double a, double b);

class Network {
 public:
  virtual ~Network() = default;

  Model model() const { return model_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t stages() const { return stages_; }

  virtual void broadcast(MessageType type, SensorId src);
  virtual void unicast(MessageType type, Endpoint src, Endpoint dst);

  // Clears the per-round selection views and advances the round clock.
  void begin_round();
  std::int64_t round() const { return round_; }

  // Selected set of the current round, in selection order, without duplicates.
  const SensorSet& round_selection() const { return round_selection_; }
  void record_selection(SensorId v);

  std::vector<SensorNode>& nodes() { return nodes_; }
  const std::vector<SensorNode>& nodes() const { return nodes_; }
  MessageStats& stats() { return stats_; }
  const MessageStats& stats() const { return stats_; }

  void set_stage(std::int64_t stage) { stage_ = stage; }
  void enable_trace(bool on) { trace_on_ = on; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  // One line per message: round,stage,type,src,dst
  void write_trace(std::ostream& os) const;

  // Gives every sensor a WMR threshold learner per stage.
  void enable_thresholds(const std::vector<double>& grid, double eta,
                         const std::vector<double>& costs);

 protected:
  Network(Model model, std::size_t n, std::size_t stages, double n_estimate_factor);
  void log_message(MessageType type, std::int64_t src, std::int64_t dst);

 private:
  Model model_;
  std::size_t stages_;
  std::vector<SensorNode> nodes_;
  MessageStats stats_;
  std::int64_t round_ = 0;
  std::int64_t stage_ = 0;
  SensorSet round_selection_;
  bool trace_on_ = false;
  std::vector<TraceEntry> trace_;
};

// Any sensor reaches all sensors at unit cost; unicasts are not part of the
// model.
class BroadcastNetwork final : public Network {
 public:
  BroadcastNetwork(std::size_t n, std::size_t stages, double n_estimate_factor = 1.0)
      : Network(Model::kBroadcast, n, stages, n_estimate_factor) {}

  void unicast(MessageType type, Endpoint src, Endpoint dst) override;
};

// Messages only between a sensor and the base station. The server keeps the
// true normalizer of each stage and nothing per sensor.
class StarNetwork final : public Network {
 public:
  StarNetwork(std::size_t n, std::size_t stages, double n_estimate_factor = 1.0);

  void broadcast(MessageType type, SensorId src) override;
  void unicast(MessageType type, Endpoint src, Endpoint dst) override;

  double server_log_normalizer(std::size_t stage) const { return server_log_z_[stage]; }
  void set_server_log_normalizer(std::size_t stage, double value) { server_log_z_[stage] = value; }

  // Number of persistent values the server stores; depends on k only.
  std::size_t server_state_size() const { return server_log_z_.size(); }

 private:
  std::vector<double> server_log_z_;
};

enum class StageMode { kDogBroadcast, kLazyStar, kLazyStarNoRerun, kOdDog };

std::string_view to_string(StageMode mode);

struct StageParams {
  double alpha = 1.0;
  double gamma = 0.1;
  double eta = 0.1;
  bool rerun = true;                       // OD-DOG only; lazy modes fix it
  std::optional<double> fixed_threshold;   // OD-DOG: bypass the learners
};

struct StageOutcome {
  std::optional<SensorId> selected;
  double gain = 0.0;                // marginal reward credited to the stage
  std::int64_t messages = 0;
  std::int64_t activations = 0;
  std::int64_t boosted = 0;         // OD-DOG activations triggered by a threshold
  std::int64_t reruns = 0;
};

// Runs stage `stage` of the current round against f_t.
//
// kDogBroadcast needs a BroadcastNetwork, the other modes a StarNetwork;
// anything else raises ModelViolation. Objective errors propagate.
StageOutcome run_stage(Network& net, std::size_t stage, const Objective& f, StageMode mode,
                       const StageParams& params, Rng& rng);

}  // namespace sensel
