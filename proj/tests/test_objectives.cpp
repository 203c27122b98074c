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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sensel/objectives.hpp"
#include "sensel/random.hpp"

using namespace sensel;

namespace {

// Cells 1..4 with unit weight; A -> {1,2}, B -> {2,3}, C -> {3,4}.
CoverageObjective example_coverage() {
  return CoverageObjective({1.0, 1.0, 1.0, 1.0}, {{0, 1}, {1, 2}, {2, 3}});
}

constexpr SensorId A = 0;
constexpr SensorId B = 1;
constexpr SensorId C = 2;

std::vector<ObjectivePtr> sample_objectives(std::uint64_t seed) {
  return {make_random_coverage({9, 10, 0.2, seed}),
          make_random_detection({9, 20, 0.9, 0.25, seed}),
          make_random_detection({9, 20, 0.9, 0.25, seed})->realize(seed + 7),
          make_random_gaussian({9, 3, 0.1, 1.0, kDefaultJitter, seed})};
}

}  // namespace

TEST_CASE("coverage example values") {
  const auto f = example_coverage();
  CHECK(f.evaluate({A, C}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.evaluate({A}) == doctest::Approx(0.5));
  CHECK(f.evaluate({}) == 0.0);
  CHECK(f.marginal_gain(std::vector<SensorId>{A}, B) == doctest::Approx(0.25));
  CHECK(f.marginal_gain(std::vector<SensorId>{A}, A) == 0.0);
}

TEST_CASE("evaluate ignores order and duplicates and rejects unknown ids") {
  const auto f = example_coverage();
  CHECK(f.evaluate({C, A, A}) == f.evaluate({A, C}));
  CHECK_THROWS_AS(f.evaluate({3}), std::domain_error);
  CHECK_THROWS_AS(f.evaluate({-1}), std::domain_error);
}

TEST_CASE("emse reduction closed forms") {
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(4, 4);
  CHECK(emse_reduction(identity, std::vector<SensorId>{2}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(emse_reduction(identity, std::vector<SensorId>{0, 3}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(emse_reduction(identity, std::vector<SensorId>{0, 1, 2, 3}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd two(2, 2);
  two << 1.0, 0.8, 0.8, 1.0;
  CHECK(emse_reduction(two, std::vector<SensorId>{0}, 0.0) == doctest::Approx(0.82).epsilon(1e-14));

  const GaussianEmseObjective g(identity);
  CHECK(g.evaluate({1, 2}) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(g.evaluate({}) == 0.0);
  CHECK(g.marginal_gain(std::vector<SensorId>{0, 1}, 3) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("emse reduction agrees with an explicit-inverse oracle") {
  const auto f = make_random_gaussian({7, 3, 0.1, 1.0, 0.0, 11});
  const Eigen::MatrixXd& cov = f->covariance();
  const std::vector<SensorId> set{1, 4, 5};
  const std::vector<int> rest{0, 2, 3, 6};
  Eigen::MatrixXd saa(3, 3);
  Eigen::MatrixXd sua(4, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) saa(i, j) = cov(set[i], set[j]);
    for (int u = 0; u < 4; ++u) sua(u, i) = cov(rest[u], set[i]);
  }
  const Eigen::MatrixXd explained = sua * saa.inverse() * sua.transpose();
  const double expected = (saa.trace() + explained.trace()) / cov.trace();
  CHECK(emse_reduction(cov, set, 0.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("emse rejects asymmetric or indefinite covariances") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_AS(emse_reduction(asym, std::vector<SensorId>{0}), NumericError);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(GaussianEmseObjective{indefinite}, NumericError);
  CHECK_THROWS_AS(emse_reduction(Eigen::MatrixXd::Identity(3, 3), std::vector<SensorId>{5}),
                  std::domain_error);
}

TEST_CASE("emse is invariant under relabeling") {
  const auto f = make_random_gaussian({6, 2, 0.1, 1.0, kDefaultJitter, 3});
  const Eigen::MatrixXd& cov = f->covariance();
  const std::vector<int> perm{3, 0, 5, 1, 4, 2};
  Eigen::MatrixXd permuted(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) permuted(perm[i], perm[j]) = cov(i, j);
  }
  const std::vector<SensorId> set{0, 2, 3};
  const std::vector<SensorId> mapped{perm[0], perm[2], perm[3]};
  CHECK(emse_reduction(permuted, mapped) == doctest::Approx(emse_reduction(cov, set)).epsilon(1e-12));
}

TEST_CASE("submodularity checker") {
  SUBCASE("coverage example") {
    const auto rep = check_monotone_submodular(example_coverage());
    CHECK(rep.is_monotone);
    CHECK(rep.is_submodular);
    CHECK_FALSE(rep.first_violation.has_value());
  }
  SUBCASE("|S|^2 is not submodular") {
    const FunctionObjective sq(3, [](std::span<const SensorId> s) {
      return static_cast<double>(s.size() * s.size());
    });
    const auto rep = check_monotone_submodular(sq);
    CHECK(rep.is_monotone);
    CHECK_FALSE(rep.is_submodular);
    REQUIRE(rep.first_violation.has_value());
    const auto& w = *rep.first_violation;
    CHECK(w.kind == "submodular");
    CHECK(w.smaller_gain < w.larger_gain);
    CHECK(std::includes(w.larger.begin(), w.larger.end(), w.smaller.begin(), w.smaller.end()));
  }
  SUBCASE("budget-saturating function") {
    const FunctionObjective sat(5, [](std::span<const SensorId> s) {
      return std::min<double>(static_cast<double>(s.size()), 2.0) / 2.0;
    });
    const auto rep = check_monotone_submodular(sat);
    CHECK(rep.is_monotone);
    CHECK(rep.is_submodular);
  }
  SUBCASE("decreasing function is not monotone") {
    const FunctionObjective dec(3, [](std::span<const SensorId> s) { return -static_cast<double>(s.size()); });
    const auto rep = check_monotone_submodular(dec);
    CHECK_FALSE(rep.is_monotone);
  }
  SUBCASE("size limit") {
    CHECK_THROWS_AS(check_monotone_submodular(*make_random_coverage({13, 10, 0.2, 1})), SizeError);
  }
}

TEST_CASE("every generator yields monotone submodular instances at n <= 10") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (const auto& f : sample_objectives(seed)) {
      CAPTURE(f->family());
      CAPTURE(seed);
      const auto rep = check_monotone_submodular(*f, 10);
      CHECK(rep.is_monotone);
      CHECK(rep.is_submodular);
    }
  }
}

TEST_CASE("normalization: f(empty) = 0 and f(S) <= f(V) <= 1") {
  Rng rng(5);
  for (const auto& f : sample_objectives(21)) {
    std::vector<SensorId> all(f->size());
    std::iota(all.begin(), all.end(), 0);
    const double full = f->evaluate(all);
    CHECK(f->evaluate({}) == 0.0);
    CHECK(full <= 1.0 + 1e-12);
    CHECK(full == doctest::Approx(1.0).epsilon(1e-9));
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<SensorId> s;
      for (SensorId v : all) {
        if (bernoulli(rng, 0.4)) s.push_back(v);
      }
      const double value = f->evaluate(s);
      CHECK(value >= 0.0);
      CHECK(value <= full + 1e-12);
    }
  }
}

TEST_CASE("diminishing returns on 1000 random triples per objective") {
  Rng rng(9);
  for (const auto& f : sample_objectives(33)) {
    const auto n = static_cast<SensorId>(f->size());
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<SensorId> a;
      std::vector<SensorId> b;
      const auto s = static_cast<SensorId>(uniform01(rng) * n);
      for (SensorId v = 0; v < n; ++v) {
        if (v == s) continue;
        const double u = uniform01(rng);
        if (u < 0.25) {
          a.push_back(v);
          b.push_back(v);
        } else if (u < 0.6) {
          b.push_back(v);
        }
      }
      if (f->marginal_gain(a, s) < f->marginal_gain(b, s) - 1e-12) ++violations;
    }
    CAPTURE(f->family());
    CHECK(violations == 0);
  }
}

TEST_CASE("detection realization is a seeded coverage instance") {
  const auto d = make_random_detection({6, 15, 0.9, 0.25, 2});
  const auto r1 = d->realize(10);
  const auto r2 = d->realize(10);
  CHECK(r1->regions() == r2->regions());
  CHECK(r1->family() == "coverage");
  CHECK(r1->size() == 6);
}

TEST_CASE("generators are deterministic in the seed") {
  const auto a = make_random_coverage({10, 10, 0.2, 3});
  const auto b = make_random_coverage({10, 10, 0.2, 3});
  const auto c = make_random_coverage({10, 10, 0.2, 4});
  CHECK(a->regions() == b->regions());
  CHECK(a->regions() != c->regions());
  const auto g1 = make_random_gaussian({8, 3, 0.1, 1.0, kDefaultJitter, 5});
  const auto g2 = make_random_gaussian({8, 3, 0.1, 1.0, kDefaultJitter, 5});
  CHECK(g1->covariance() == g2->covariance());
}

TEST_CASE("objective sequences") {
  const std::vector<ObjectivePtr> pool{make_random_coverage({5, 10, 0.2, 1}),
                                       make_random_coverage({5, 10, 0.2, 2}),
                                       make_random_coverage({5, 10, 0.2, 3})};
  SUBCASE("cyclic") {
    const ObjectiveSequence seq(pool, SequenceMode::kCyclic);
    CHECK(seq.index_at(1) == 0);
    CHECK(seq.index_at(3) == 2);
    CHECK(seq.index_at(4) == 0);
    const auto counts = seq.draw_counts(7);
    CHECK(counts == std::vector<double>{3.0, 2.0, 2.0});
  }
  SUBCASE("random draw is seeded and aggregate sums the rounds") {
    const ObjectiveSequence s1(pool, SequenceMode::kRandomDraw, 42);
    const ObjectiveSequence s2(pool, SequenceMode::kRandomDraw, 42);
    double direct = 0.0;
    const std::vector<SensorId> set{0, 3};
    for (std::int64_t t = 1; t <= 50; ++t) {
      CHECK(s1.index_at(t) == s2.index_at(t));
      direct += s1.at(t).evaluate(set);
    }
    CHECK(s1.aggregate(50)->evaluate(set) == doctest::Approx(direct).epsilon(1e-12));
  }
  SUBCASE("constant") {
    const auto seq = ObjectiveSequence::constant(pool[1]);
    CHECK(&seq.at(1) == &seq.at(1000));
  }
}
