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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sensel/types.hpp"

namespace sensel {

// A set function f: 2^V -> R over sensors 0..size()-1. Objectives are
// immutable after construction and safe to share between threads.
//
// evaluate() accepts sets in any order and ignores duplicate ids. Ids outside
// the universe raise std::domain_error. Every shipped family is normalized so
// that f(empty) = 0 and f(V) <= 1.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t size() const = 0;
  virtual std::string family() const = 0;

  double evaluate(std::span<const SensorId> set) const;
  double evaluate(std::initializer_list<SensorId> set) const {
    return evaluate(std::span<const SensorId>(set.begin(), set.size()));
  }

  // f(set + v) - f(set); exactly 0 when v is already in set.
  double marginal_gain(std::span<const SensorId> set, SensorId v) const;

 protected:
  // Receives a sorted, duplicate-free, range-checked set.
  virtual double evaluate_canonical(std::span<const SensorId> set) const = 0;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

// Weighted area coverage: f(S) = weight(union of regions of S) / weight(union
// of all regions).
class CoverageObjective final : public Objective {
 public:
  CoverageObjective(std::vector<double> cell_weights,
                    std::vector<std::vector<int>> regions);

  std::size_t size() const override { return regions_.size(); }
  std::string family() const override { return "coverage"; }

  const std::vector<std::vector<int>>& regions() const { return regions_; }
  const std::vector<double>& cell_weights() const { return weights_; }

 protected:
  double evaluate_canonical(std::span<const SensorId> set) const override;

 private:
  std::vector<double> weights_;
  std::vector<std::vector<int>> regions_;
  std::vector<std::vector<std::uint64_t>> masks_;
  double normalizer_ = 0.0;
};

// Expected number of detected targets: target j is detected by sensor s
// independently with probability detect[j][s].
class DetectionObjective final : public Objective {
 public:
  explicit DetectionObjective(std::vector<std::vector<double>> detect);

  std::size_t size() const override { return n_; }
  std::string family() const override { return "detection"; }

  std::size_t targets() const { return detect_.size(); }

  // One realization of the random detections, as a coverage instance whose
  // cells are the targets. Deterministic in `seed`.
  std::shared_ptr<const CoverageObjective> realize(std::uint64_t seed) const;

 protected:
  double evaluate_canonical(std::span<const SensorId> set) const override;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<double>> detect_;
  double normalizer_ = 0.0;
};

inline constexpr double kDefaultJitter = 1e-9;

// Fraction of total prediction variance removed by observing `set`:
// (tr(S) - tr(S_{U|A})) / tr(S), where S_{U|A} = S_UU - S_UA (S_AA + jI)^-1 S_AU
// and observed variables contribute zero residual variance.
//
// Throws NumericError if `cov` is not symmetric (1e-9) or not positive
// definite, std::domain_error for out-of-range indices.
double emse_reduction(const Eigen::MatrixXd& cov, std::span<const SensorId> set,
                      double jitter = kDefaultJitter);

class GaussianEmseObjective final : public Objective {
 public:
  explicit GaussianEmseObjective(Eigen::MatrixXd cov,
                                 double jitter = kDefaultJitter);

  std::size_t size() const override {
    return static_cast<std::size_t>(cov_.rows());
  }
  std::string family() const override { return "gaussian"; }

  const Eigen::MatrixXd& covariance() const { return cov_; }
  double jitter() const { return jitter_; }

 protected:
  double evaluate_canonical(std::span<const SensorId> set) const override;

 private:
  Eigen::MatrixXd cov_;
  double jitter_;
  double trace_ = 0.0;
};

// Wraps an arbitrary set function; used for user-supplied and test objectives.
// No normalization is applied.
class FunctionObjective final : public Objective {
 public:
  using Fn = std::function<double(std::span<const SensorId>)>;
  FunctionObjective(std::size_t n, Fn fn, std::string name = "function");

  std::size_t size() const override { return n_; }
  std::string family() const override { return name_; }

 protected:
  double evaluate_canonical(std::span<const SensorId> set) const override {
    return fn_(set);
  }

 private:
  std::size_t n_;
  Fn fn_;
  std::string name_;
};

// sum_j c_j f_j(S). Not normalized; used for cumulative benchmarks.
class WeightedSumObjective final : public Objective {
 public:
  explicit WeightedSumObjective(std::vector<std::pair<double, ObjectivePtr>> terms);

  std::size_t size() const override { return n_; }
  std::string family() const override { return "weighted-sum"; }

 protected:
  double evaluate_canonical(std::span<const SensorId> set) const override;

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<double, ObjectivePtr>> terms_;
};

// Seeded synthetic instances.

struct CoverageParams {
  std::size_t n = 10;
  std::size_t grid = 10;     // grid x grid cells over the unit square
  double radius = 0.2;       // sensing disk radius
  std::uint64_t seed = 1;
};
std::shared_ptr<const CoverageObjective> make_random_coverage(const CoverageParams& p);

struct DetectionParams {
  std::size_t n = 10;
  std::size_t targets = 20;
  double max_prob = 0.9;     // detection probability at distance 0
  double scale = 0.25;       // Gaussian fall-off length
  std::uint64_t seed = 1;
};
std::shared_ptr<const DetectionObjective> make_random_detection(const DetectionParams& p);

// Clustered one-factor field: sensors in the same cluster share a latent
// value with positive loadings, plus independent noise.
struct GaussianParams {
  std::size_t n = 10;
  std::size_t clusters = 3;
  double noise_min = 0.1;
  double noise_max = 1.0;
  double jitter = kDefaultJitter;
  std::uint64_t seed = 1;
};
std::shared_ptr<const GaussianEmseObjective> make_random_gaussian(const GaussianParams& p);

enum class SequenceMode { kConstant, kCyclic, kRandomDraw };

// f_1, f_2, ... drawn from a pool of objectives. Rounds are 1-based.
class ObjectiveSequence {
 public:
  ObjectiveSequence(std::vector<ObjectivePtr> pool, SequenceMode mode,
                    std::uint64_t seed = 0);

  static ObjectiveSequence constant(ObjectivePtr f) {
    return ObjectiveSequence({std::move(f)}, SequenceMode::kConstant);
  }

  std::size_t universe_size() const { return pool_.front()->size(); }
  SequenceMode mode() const { return mode_; }
  const std::vector<ObjectivePtr>& pool() const { return pool_; }

  std::size_t index_at(std::int64_t t) const;
  const Objective& at(std::int64_t t) const { return *pool_[index_at(t)]; }

  // Occurrences of each pool member in rounds 1..T.
  std::vector<double> draw_counts(std::int64_t T) const;

  // sum_{t<=T} f_t, computed through draw counts.
  ObjectivePtr aggregate(std::int64_t T) const;

 private:
  std::vector<ObjectivePtr> pool_;
  SequenceMode mode_;
  std::uint64_t seed_;
};

struct SubmodularityViolation {
  std::string kind;  // "monotone" or "submodular"
  SensorSet smaller;  // A
  SensorSet larger;   // B (A subset of B)
  SensorId element = -1;
  double smaller_gain = 0.0;
  double larger_gain = 0.0;
};

struct SubmodularityReport {
  bool is_monotone = true;
  bool is_submodular = true;
  std::optional<SubmodularityViolation> first_violation;
};

// Exhaustive check over all A subset B subset V, s not in B (tolerance 1e-9).
// Throws SizeError when size() > max_n.
SubmodularityReport check_monotone_submodular(const Objective& f,
                                              std::size_t max_n = 12,
                                              double tolerance = 1e-9);

}  // namespace sensel
