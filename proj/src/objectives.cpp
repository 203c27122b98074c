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

#include "sensel/objectives.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sensel/random.hpp"

namespace sensel {

namespace {

SensorSet canonicalize(std::span<const SensorId> set, std::size_t n) {
  SensorSet out(set.begin(), set.end());
  for (SensorId v : out) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw std::domain_error("unknown sensor id " + std::to_string(v) +
                              " (universe size " + std::to_string(n) + ")");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SensorSet mask_to_set(std::uint64_t mask) {
  SensorSet s;
  for (SensorId v = 0; mask != 0; ++v, mask >>= 1) {
    if (mask & 1U) s.push_back(v);
  }
  return s;
}

}  // namespace

double Objective::evaluate(std::span<const SensorId> set) const {
  const SensorSet canon = canonicalize(set, size());
  if (canon.empty()) return 0.0;
  return evaluate_canonical(canon);
}

double Objective::marginal_gain(std::span<const SensorId> set, SensorId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= size()) {
    throw std::domain_error("unknown sensor id " + std::to_string(v));
  }
  SensorSet with(set.begin(), set.end());
  if (std::find(with.begin(), with.end(), v) != with.end()) {
    canonicalize(set, size());
    return 0.0;
  }
  const double base = evaluate(set);
  with.push_back(v);
  return evaluate(with) - base;
}

// ---------------------------------------------------------------------------
// Coverage

CoverageObjective::CoverageObjective(std::vector<double> cell_weights,
                                     std::vector<std::vector<int>> regions)
    : weights_(std::move(cell_weights)), regions_(std::move(regions)) {
  if (regions_.empty()) throw std::invalid_argument("coverage: no sensors");
  const std::size_t cells = weights_.size();
  const std::size_t words = (cells + 63) / 64;
  std::vector<std::uint64_t> all(words, 0);
  masks_.assign(regions_.size(), std::vector<std::uint64_t>(words, 0));
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("coverage: cell weights must be finite and >= 0");
    }
  }
  for (std::size_t s = 0; s < regions_.size(); ++s) {
    for (int c : regions_[s]) {
      if (c < 0 || static_cast<std::size_t>(c) >= cells) {
        throw std::invalid_argument("coverage: region references unknown cell " +
                                    std::to_string(c));
      }
      masks_[s][c / 64] |= std::uint64_t{1} << (c % 64);
      all[c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  for (std::size_t c = 0; c < cells; ++c) {
    if (all[c / 64] >> (c % 64) & 1U) normalizer_ += weights_[c];
  }
}

double CoverageObjective::evaluate_canonical(std::span<const SensorId> set) const {
  if (normalizer_ <= 0.0) return 0.0;
  const std::size_t words = masks_.front().size();
  double total = 0.0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t bits = 0;
    for (SensorId s : set) bits |= masks_[s][w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      total += weights_[w * 64 + b];
      bits &= bits - 1;
    }
  }
  return total / normalizer_;
}

// ---------------------------------------------------------------------------
// Detection

DetectionObjective::DetectionObjective(std::vector<std::vector<double>> detect)
    : detect_(std::move(detect)) {
  if (detect_.empty()) throw std::invalid_argument("detection: no targets");
  n_ = detect_.front().size();
  if (n_ == 0) throw std::invalid_argument("detection: no sensors");
  for (const auto& row : detect_) {
    if (row.size() != n_) throw std::invalid_argument("detection: ragged matrix");
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("detection: probabilities must lie in [0,1]");
      }
    }
  }
  SensorSet all(n_);
  std::iota(all.begin(), all.end(), 0);
  normalizer_ = 1.0;
  normalizer_ = evaluate_canonical(all);
}

double DetectionObjective::evaluate_canonical(std::span<const SensorId> set) const {
  if (normalizer_ <= 0.0) return 0.0;
  double expected = 0.0;
  for (const auto& row : detect_) {
    double miss = 1.0;
    for (SensorId s : set) miss *= 1.0 - row[s];
    expected += 1.0 - miss;
  }
  return expected / normalizer_;
}

std::shared_ptr<const CoverageObjective> DetectionObjective::realize(
    std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<std::vector<int>> regions(n_);
  for (std::size_t j = 0; j < detect_.size(); ++j) {
    for (std::size_t s = 0; s < n_; ++s) {
      if (bernoulli(rng, detect_[j][s])) regions[s].push_back(static_cast<int>(j));
    }
  }
  return std::make_shared<CoverageObjective>(
      std::vector<double>(detect_.size(), 1.0), std::move(regions));
}

// ---------------------------------------------------------------------------
// Gaussian EMSE

namespace {

void require_spd(const Eigen::MatrixXd& cov) {
  if (cov.rows() == 0 || cov.rows() != cov.cols()) {
    throw NumericError("covariance must be a non-empty square matrix");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    std::ostringstream os;
    os << "covariance is not symmetric (max |S - S^T| = " << asym << ")";
    throw NumericError(os.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    std::ostringstream os;
    os << "covariance is not positive definite (smallest eigenvalue "
       << eig.eigenvalues().minCoeff() << ")";
    throw NumericError(os.str());
  }
}

double emse_unchecked(const Eigen::MatrixXd& cov, std::span<const SensorId> set,
                      double jitter, double trace) {
  const Eigen::Index n = cov.rows();
  if (set.empty()) return 0.0;
  if (static_cast<Eigen::Index>(set.size()) == n) return 1.0;
  std::vector<Eigen::Index> observed(set.begin(), set.end());
  std::vector<Eigen::Index> rest;
  rest.reserve(n - observed.size());
  for (Eigen::Index i = 0, j = 0; i < n; ++i) {
    if (j < static_cast<Eigen::Index>(observed.size()) && observed[j] == i) {
      ++j;
    } else {
      rest.push_back(i);
    }
  }
  const Eigen::MatrixXd saa =
      cov(observed, observed) +
      jitter * Eigen::MatrixXd::Identity(observed.size(), observed.size());
  const Eigen::MatrixXd sau = cov(observed, rest);
  Eigen::LLT<Eigen::MatrixXd> llt(saa);
  if (llt.info() != Eigen::Success) {
    throw NumericError("conditioning block is not positive definite");
  }
  // tr(S_UA S_AA^-1 S_AU) = ||L^-1 S_AU||_F^2
  const Eigen::MatrixXd half = llt.matrixL().solve(sau);
  const double explained = cov(observed, observed).trace() + half.squaredNorm();
  return explained / trace;
}

}  // namespace

double emse_reduction(const Eigen::MatrixXd& cov, std::span<const SensorId> set,
                      double jitter) {
  require_spd(cov);
  const SensorSet canon = canonicalize(set, static_cast<std::size_t>(cov.rows()));
  return emse_unchecked(cov, canon, jitter, cov.trace());
}

GaussianEmseObjective::GaussianEmseObjective(Eigen::MatrixXd cov, double jitter)
    : cov_(std::move(cov)), jitter_(jitter) {
  if (!(jitter_ >= 0.0)) throw std::invalid_argument("jitter must be >= 0");
  require_spd(cov_);
  trace_ = cov_.trace();
}

double GaussianEmseObjective::evaluate_canonical(std::span<const SensorId> set) const {
  return emse_unchecked(cov_, set, jitter_, trace_);
}

// ---------------------------------------------------------------------------

FunctionObjective::FunctionObjective(std::size_t n, Fn fn, std::string name)
    : n_(n), fn_(std::move(fn)), name_(std::move(name)) {
  if (n_ == 0) throw std::invalid_argument("function objective: empty universe");
}

WeightedSumObjective::WeightedSumObjective(
    std::vector<std::pair<double, ObjectivePtr>> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("weighted sum: no terms");
  n_ = terms_.front().second->size();
  for (const auto& [c, f] : terms_) {
    if (f->size() != n_) throw std::invalid_argument("weighted sum: universe mismatch");
  }
}

double WeightedSumObjective::evaluate_canonical(std::span<const SensorId> set) const {
  double total = 0.0;
  for (const auto& [c, f] : terms_) {
    if (c != 0.0) total += c * f->evaluate(set);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Generators

std::shared_ptr<const CoverageObjective> make_random_coverage(const CoverageParams& p) {
  if (p.n == 0 || p.grid == 0 || !(p.radius > 0.0)) {
    throw std::invalid_argument("coverage generator: n, grid and radius must be positive");
  }
  Rng rng(p.seed);
  const std::size_t cells = p.grid * p.grid;
  std::vector<double> weights(cells);
  for (double& w : weights) w = 0.5 + uniform01(rng);
  std::vector<std::vector<int>> regions(p.n);
  const double step = 1.0 / static_cast<double>(p.grid);
  for (std::size_t s = 0; s < p.n; ++s) {
    const double x = uniform01(rng);
    const double y = uniform01(rng);
    for (std::size_t c = 0; c < cells; ++c) {
      const double cx = (static_cast<double>(c % p.grid) + 0.5) * step;
      const double cy = (static_cast<double>(c / p.grid) + 0.5) * step;
      if (std::hypot(cx - x, cy - y) <= p.radius) regions[s].push_back(static_cast<int>(c));
    }
    // a sensor always sees the cell it sits in
    if (regions[s].empty()) {
      const auto gx = std::min<std::size_t>(static_cast<std::size_t>(x * p.grid), p.grid - 1);
      const auto gy = std::min<std::size_t>(static_cast<std::size_t>(y * p.grid), p.grid - 1);
      regions[s].push_back(static_cast<int>(gy * p.grid + gx));
    }
  }
  return std::make_shared<CoverageObjective>(std::move(weights), std::move(regions));
}

std::shared_ptr<const DetectionObjective> make_random_detection(const DetectionParams& p) {
  if (p.n == 0 || p.targets == 0) {
    throw std::invalid_argument("detection generator: n and targets must be positive");
  }
  if (!(p.max_prob > 0.0 && p.max_prob <= 1.0) || !(p.scale > 0.0)) {
    throw std::invalid_argument("detection generator: bad max_prob or scale");
  }
  Rng rng(p.seed);
  std::vector<std::pair<double, double>> sensors(p.n);
  for (auto& [x, y] : sensors) {
    x = uniform01(rng);
    y = uniform01(rng);
  }
  std::vector<std::vector<double>> detect(p.targets, std::vector<double>(p.n));
  for (auto& row : detect) {
    const double tx = uniform01(rng);
    const double ty = uniform01(rng);
    for (std::size_t s = 0; s < p.n; ++s) {
      const double d2 = std::pow(sensors[s].first - tx, 2) + std::pow(sensors[s].second - ty, 2);
      row[s] = p.max_prob * std::exp(-d2 / (2.0 * p.scale * p.scale));
    }
  }
  return std::make_shared<DetectionObjective>(std::move(detect));
}

std::shared_ptr<const GaussianEmseObjective> make_random_gaussian(const GaussianParams& p) {
  if (p.n == 0 || p.clusters == 0) {
    throw std::invalid_argument("gaussian generator: n and clusters must be positive");
  }
  if (!(p.noise_min > 0.0 && p.noise_max >= p.noise_min)) {
    throw std::invalid_argument("gaussian generator: bad noise range");
  }
  Rng rng(p.seed);
  const auto n = static_cast<Eigen::Index>(p.n);
  std::vector<std::size_t> cluster(p.n);
  Eigen::VectorXd loading(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cluster[i] = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(p.clusters));
    loading(i) = 0.2 + 1.3 * uniform01(rng);
    cov(i, i) = p.noise_min + (p.noise_max - p.noise_min) * uniform01(rng);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (cluster[i] == cluster[j]) cov(i, j) += loading(i) * loading(j);
    }
  }
  return std::make_shared<GaussianEmseObjective>(std::move(cov), p.jitter);
}

// ---------------------------------------------------------------------------
// Sequences

ObjectiveSequence::ObjectiveSequence(std::vector<ObjectivePtr> pool, SequenceMode mode,
                                     std::uint64_t seed)
    : pool_(std::move(pool)), mode_(mode), seed_(seed) {
  if (pool_.empty()) throw std::invalid_argument("objective sequence: empty pool");
  for (const auto& f : pool_) {
    if (!f) throw std::invalid_argument("objective sequence: null objective");
    if (f->size() != pool_.front()->size()) {
      throw std::invalid_argument("objective sequence: universe size mismatch");
    }
  }
}

std::size_t ObjectiveSequence::index_at(std::int64_t t) const {
  if (t < 1) throw std::out_of_range("rounds are numbered from 1");
  const auto m = pool_.size();
  switch (mode_) {
    case SequenceMode::kConstant:
      return 0;
    case SequenceMode::kCyclic:
      return static_cast<std::size_t>((t - 1) % static_cast<std::int64_t>(m));
    case SequenceMode::kRandomDraw:
      return static_cast<std::size_t>(derive_seed(seed_, static_cast<std::uint64_t>(t)) % m);
  }
  return 0;
}

std::vector<double> ObjectiveSequence::draw_counts(std::int64_t T) const {
  std::vector<double> counts(pool_.size(), 0.0);
  if (mode_ == SequenceMode::kConstant) {
    counts[0] = static_cast<double>(T);
    return counts;
  }
  for (std::int64_t t = 1; t <= T; ++t) counts[index_at(t)] += 1.0;
  return counts;
}

ObjectivePtr ObjectiveSequence::aggregate(std::int64_t T) const {
  const auto counts = draw_counts(T);
  std::vector<std::pair<double, ObjectivePtr>> terms;
  for (std::size_t j = 0; j < pool_.size(); ++j) {
    if (counts[j] > 0.0) terms.emplace_back(counts[j], pool_[j]);
  }
  if (terms.empty()) terms.emplace_back(0.0, pool_.front());
  return std::make_shared<WeightedSumObjective>(std::move(terms));
}

// ---------------------------------------------------------------------------

SubmodularityReport check_monotone_submodular(const Objective& f, std::size_t max_n,
                                              double tolerance) {
  const std::size_t n = f.size();
  if (n > max_n || n > 20) {
    throw SizeError("exhaustive submodularity check refused: n = " + std::to_string(n) +
                    " exceeds limit " + std::to_string(std::min<std::size_t>(max_n, 20)));
  }
  const std::uint64_t full = (std::uint64_t{1} << n);
  std::vector<double> value(full);
  for (std::uint64_t m = 0; m < full; ++m) value[m] = f.evaluate(mask_to_set(m));

  SubmodularityReport report;
  auto note = [&](const char* kind, std::uint64_t a, std::uint64_t b, std::size_t s,
                  double ga, double gb) {
    if (!report.first_violation) {
      report.first_violation = SubmodularityViolation{
          kind, mask_to_set(a), mask_to_set(b), static_cast<SensorId>(s), ga, gb};
    }
  };
  for (std::uint64_t b = 0; b < full; ++b) {
    for (std::size_t s = 0; s < n; ++s) {
      const std::uint64_t bit = std::uint64_t{1} << s;
      if (b & bit) continue;
      const double gain_b = value[b | bit] - value[b];
      if (gain_b < -tolerance) {
        report.is_monotone = false;
        note("monotone", b, b, s, gain_b, gain_b);
      }
      // walk every submask of b
      for (std::uint64_t a = b;; a = (a - 1) & b) {
        const double gain_a = value[a | bit] - value[a];
        if (gain_a < gain_b - tolerance) {
          report.is_submodular = false;
          note("submodular", a, b, s, gain_a, gain_b);
        }
        if (a == 0) break;
      }
    }
  }
  return report;
}

}  // namespace sensel
