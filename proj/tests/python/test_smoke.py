# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import sensel


def test_coverage_example():
    # cells a, b, c, d with weights 0.25 each; A={a,b}, B={b,c}, C={c,d}
    f = sensel.CoverageObjective([0.25, 0.25, 0.25, 0.25], [[0, 1], [1, 2], [2, 3]])
    assert f.size == 3
    assert f.evaluate([0, 2]) == pytest.approx(1.0, abs=1e-12)
    assert f.marginal_gain([0], 1) == pytest.approx(0.25, abs=1e-12)
    assert sensel.offline_greedy(f, 2) == [0, 2]


def test_emse_two_by_two():
    assert sensel.emse_reduction([[1.0, 0.8], [0.8, 1.0]], [0], 0.0) == pytest.approx(0.82, abs=1e-12)


def test_poisson_inverse_cdf():
    assert sensel.poisson_inverse_cdf(1.0, 0.3) == 0
    assert sensel.poisson_inverse_cdf(1.0, 0.5) == 1


def test_pms_empty_rate():
    rng = sensel.Rng(3)
    trials = 20000
    empty = sum(sensel.pms_protocol([1 / 3] * 3, 1.0, rng)["selected"] is None for _ in range(trials))
    p = math.exp(-1.0)
    assert abs(empty / trials - p) <= 4 * math.sqrt(p * (1 - p) / trials)


def test_exp3_update():
    e = sensel.Exp3State(2, 0.5, 0.1)
    assert e.probabilities() == pytest.approx([0.5, 0.5])
    e.update(0, 1.0, 0.5)
    assert e.weights[0] == pytest.approx(math.exp(0.2))


def test_generators_are_submodular():
    for f in (sensel.make_random_coverage(8, seed=2), sensel.make_random_detection(8, seed=2),
              sensel.make_random_gaussian(8, seed=2)):
        assert sensel.check_monotone_submodular(f) == (True, True)


def test_run_scenario_is_reproducible():
    text = "[objective]\nn = 6\nseed = 2\n[run]\nk = 2\nrounds = 200\n[experiment]\ntrials = 2\n"
    a = sensel.run_scenario(text)
    b = sensel.run_scenario(text)
    assert a["csv"] == b["csv"]
    assert a["csv"].startswith("trial,round,avg_reward,greedy_ratio,messages_cum,activations_cum,regret_avg\n")
    assert not a["optimum_is_proxy"]


def test_bad_scenario_reports_line():
    with pytest.raises(ValueError, match=":3: unknown key"):
        sensel.scenario_text("[run]\nk = 1\nbogus = 2\n")


def test_brute_force_refuses_large_n():
    with pytest.raises(ValueError):
        sensel.brute_force_opt(sensel.make_random_coverage(16), 2)
