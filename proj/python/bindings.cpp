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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sensel/algorithms.hpp"
#include "sensel/bandit.hpp"
#include "sensel/checks.hpp"
#include "sensel/experiment.hpp"
#include "sensel/metrics.hpp"
#include "sensel/objectives.hpp"
#include "sensel/sampling.hpp"
#include "sensel/scenario.hpp"

namespace py = pybind11;

namespace {

py::dict outcome_to_dict(const sensel::SamplingOutcome& o) {
  py::dict d;
  d["selected"] = o.selected ? py::cast(*o.selected) : py::none();
  std::vector<sensel::SensorId> ids;
  for (const auto& a : o.activated) ids.push_back(a.id);
  d["activated"] = ids;
  d["activations"] = o.activations;
  d["messages"] = o.messages;
  d["reruns"] = o.reruns;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sensel, m) {
  m.doc() = "Distributed online sensor selection";

  py::register_exception<sensel::ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<sensel::ModelViolation>(m, "ModelViolation", PyExc_RuntimeError);
  py::register_exception<sensel::NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<sensel::SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<sensel::ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  py::class_<sensel::Rng>(m, "Rng", "Seeded 64-bit Mersenne Twister")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", [](sensel::Rng& r) { return sensel::uniform01(r); });
  m.def("derive_seed", &sensel::derive_seed, py::arg("seed"), py::arg("stream"));

  // objectives
  py::class_<sensel::Objective, std::shared_ptr<sensel::Objective>>(m, "Objective")
      .def_property_readonly("size", &sensel::Objective::size)
      .def_property_readonly("family", &sensel::Objective::family)
      .def("evaluate",
           [](const sensel::Objective& f, const std::vector<sensel::SensorId>& s) {
             return f.evaluate(s);
           },
           py::arg("set"))
      .def("marginal_gain",
           [](const sensel::Objective& f, const std::vector<sensel::SensorId>& s,
              sensel::SensorId v) { return f.marginal_gain(s, v); },
           py::arg("set"), py::arg("v"))
      .def("__call__", [](const sensel::Objective& f, const std::vector<sensel::SensorId>& s) {
        return f.evaluate(s);
      });
  py::class_<sensel::CoverageObjective, sensel::Objective,
             std::shared_ptr<sensel::CoverageObjective>>(m, "CoverageObjective")
      .def(py::init<std::vector<double>, std::vector<std::vector<int>>>(),
           py::arg("cell_weights"), py::arg("regions"));
  py::class_<sensel::DetectionObjective, sensel::Objective,
             std::shared_ptr<sensel::DetectionObjective>>(m, "DetectionObjective")
      .def(py::init<std::vector<std::vector<double>>>(), py::arg("detect"))
      .def("realize", [](const sensel::DetectionObjective& f, std::uint64_t seed) {
        return std::const_pointer_cast<sensel::CoverageObjective>(f.realize(seed));
      });
  py::class_<sensel::GaussianEmseObjective, sensel::Objective,
             std::shared_ptr<sensel::GaussianEmseObjective>>(m, "GaussianEmseObjective")
      .def(py::init<Eigen::MatrixXd, double>(), py::arg("cov"),
           py::arg("jitter") = sensel::kDefaultJitter)
      .def_property_readonly("covariance", &sensel::GaussianEmseObjective::covariance);

  m.def("make_random_coverage",
        [](std::size_t n, std::size_t grid, double radius, std::uint64_t seed) {
          return std::const_pointer_cast<sensel::CoverageObjective>(
              sensel::make_random_coverage({n, grid, radius, seed}));
        },
        py::arg("n"), py::arg("grid") = 10, py::arg("radius") = 0.2, py::arg("seed") = 1);
  m.def("make_random_detection",
        [](std::size_t n, std::size_t targets, double max_prob, double scale, std::uint64_t seed) {
          return std::const_pointer_cast<sensel::DetectionObjective>(
              sensel::make_random_detection({n, targets, max_prob, scale, seed}));
        },
        py::arg("n"), py::arg("targets") = 20, py::arg("max_prob") = 0.9, py::arg("scale") = 0.25,
        py::arg("seed") = 1);
  m.def("make_random_gaussian",
        [](std::size_t n, std::size_t clusters, std::uint64_t seed) {
          sensel::GaussianParams p;
          p.n = n;
          p.clusters = clusters;
          p.seed = seed;
          return std::const_pointer_cast<sensel::GaussianEmseObjective>(sensel::make_random_gaussian(p));
        },
        py::arg("n"), py::arg("clusters") = 3, py::arg("seed") = 1);
  m.def("emse_reduction",
        [](const Eigen::MatrixXd& cov, const std::vector<sensel::SensorId>& s, double jitter) {
          return sensel::emse_reduction(cov, s, jitter);
        },
        py::arg("cov"), py::arg("set"), py::arg("jitter") = sensel::kDefaultJitter);
  m.def("check_monotone_submodular",
        [](const sensel::Objective& f, std::size_t max_n) {
          const auto r = sensel::check_monotone_submodular(f, max_n);
          return py::make_tuple(r.is_monotone, r.is_submodular);
        },
        py::arg("f"), py::arg("max_n") = 12,
        "Returns (is_monotone, is_submodular) from an exhaustive check.");

  // bandit
  m.def("default_exp3_rate", &sensel::default_exp3_rate, py::arg("n"), py::arg("reward_guess"));
  py::class_<sensel::Exp3State>(m, "Exp3State")
      .def(py::init<std::size_t, double, double>(), py::arg("n"), py::arg("gamma"), py::arg("eta"))
      .def_property_readonly("weights", &sensel::Exp3State::weights)
      .def("probabilities", &sensel::Exp3State::probabilities)
      .def("sample", &sensel::Exp3State::sample, py::arg("rng"))
      .def("update", &sensel::Exp3State::update, py::arg("arm"), py::arg("reward"),
           py::arg("p_used"))
      .def("set_weights", &sensel::Exp3State::set_weights, py::arg("weights"));
  m.def("threshold_reward", &sensel::threshold_reward, py::arg("own_gain"),
        py::arg("best_other_gain"), py::arg("cost"), py::arg("estimate"), py::arg("tau"));

  // sampling
  m.def("pms_protocol",
        [](const std::vector<double>& p, double alpha, sensel::Rng& rng) {
          return outcome_to_dict(sensel::pms_protocol(p, alpha, rng));
        },
        py::arg("p"), py::arg("alpha"), py::arg("rng"));
  m.def("pms_until_selected",
        [](const std::vector<double>& p, double alpha, sensel::Rng& rng) {
          return outcome_to_dict(sensel::pms_until_selected(p, alpha, rng));
        },
        py::arg("p"), py::arg("alpha"), py::arg("rng"));
  m.def("simple_protocol",
        [](const std::vector<double>& p, sensel::Rng& rng) {
          return outcome_to_dict(sensel::simple_protocol(p, rng));
        },
        py::arg("p"), py::arg("rng"));
  m.def("poisson_inverse_cdf", &sensel::poisson_inverse_cdf, py::arg("lam"), py::arg("r"));

  // algorithms
  m.def("offline_greedy", &sensel::offline_greedy, py::arg("f"), py::arg("k"));
  m.def("brute_force_opt",
        [](const sensel::Objective& f, std::size_t k) {
          const auto r = sensel::brute_force_opt(f, k);
          return py::make_tuple(r.set, r.value);
        },
        py::arg("f"), py::arg("k"));

  // harness
  m.def("scenario_text",
        [](const std::string& text) { return sensel::format_scenario(sensel::parse_scenario(text)); },
        py::arg("text"), "Parses and validates scenario text; returns its canonical form.");
  m.def("run_scenario",
        [](const std::string& text) {
          const auto scenario = sensel::parse_scenario(text);
          sensel::ExperimentResult res;
          {
            py::gil_scoped_release release;
            res = sensel::run_experiment(scenario);
          }
          py::dict d;
          d["csv"] = sensel::to_csv(res.rows);
          d["gamma"] = res.params.gamma;
          d["eta"] = res.params.eta;
          d["stages"] = res.params.stages;
          d["greedy_per_round"] = res.benchmarks.greedy_per_round;
          d["optimum_per_round"] = res.benchmarks.optimum_per_round;
          d["optimum_is_proxy"] = res.benchmarks.optimum_is_proxy;
          d["mean_trailing_reward"] = res.mean_trailing_reward;
          d["mean_regret_per_round"] = res.mean_regret_per_round;
          return d;
        },
        py::arg("text"), "Runs every trial of a scenario; returns summary values and the CSV.");
  m.def("sample_bench",
        [](const std::string& protocol, const std::vector<double>& p, double alpha,
           std::int64_t trials, std::uint64_t seed) {
          const auto rep = sensel::checks::sample_bench(protocol, p, alpha, 100, trials, seed);
          py::list rows;
          for (const auto& r : rep.rows) rows.append(py::make_tuple(r.label, r.theoretical, r.empirical));
          return py::make_tuple(rows, rep.mean_activations);
        },
        py::arg("protocol"), py::arg("p"), py::arg("alpha") = 1.0, py::arg("trials") = 100000,
        py::arg("seed") = 1);
}
