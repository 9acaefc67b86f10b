# Copyright 2026 The sflgame Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import pathlib

import pytest

import sflgame

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def symmetric_game(n, r):
    return sflgame.FollowerProblem([sflgame.FollowerClient(1.0)] * n, r)


def test_closed_form_two_clients():
    ne = sflgame.closed_form_ne(symmetric_game(2, 4.0))
    assert ne.d_star == pytest.approx([1.0, 1.0])
    assert ne.eta == pytest.approx(2.0)


def test_solvers_agree():
    clients = [sflgame.FollowerClient(h, psi=psi)
               for h, psi in [(1.0, 2.0), (2.0, 3.0), (0.5, 1.0)]]
    game = sflgame.FollowerProblem(clients, 10.0)
    a = sflgame.closed_form_ne(game).d_star
    b = sflgame.br_fixed_point(game).d_star
    assert a == pytest.approx(b, rel=1e-7)


def test_zero_aggregate_raises_with_code():
    with pytest.raises(sflgame.Error) as info:
        sflgame.client_utility(symmetric_game(2, 1.0), [0.0, 0.0], 0)
    assert info.value.code == "ZeroAggregate"


def test_invalid_game_raises():
    with pytest.raises(sflgame.Error):
        symmetric_game(1, 1.0)


def test_stackelberg_defaults():
    problem = sflgame.LeaderProblem(sflgame.SystemParams(),
                                    [sflgame.ClientProfile()] * 5)
    se = sflgame.stackelberg_search(problem)
    assert 3 <= se.l_c_star <= 12
    assert problem.params.r_min <= se.r_star <= problem.params.r_max
    assert len(se.induced.d_star) == 5


def test_price_of_anarchy_at_least_one():
    game = sflgame.FollowerProblem(
        [sflgame.FollowerClient(h, psi=psi, cap=50.0, offset=100.0)
         for h, psi in [(1.0, 2.0), (2.0, 3.0), (0.5, 1.0)]], 10.0, d_req=3.0)
    report = sflgame.price_of_anarchy(sflgame.WelfareProblem.from_game(game))
    assert report.poa >= 1.0


def test_fit_round_trip():
    samples = [(l, 0.3779 * l - 0.212, 0.1098 * math.exp(0.4711 * l))
               for l in range(1, 13)]
    fit = sflgame.fit_cost_model(samples)
    assert fit.model.flops_slope == pytest.approx(0.3779, abs=1e-9)
    assert fit.model.params_rate == pytest.approx(0.4711, abs=1e-9)


def test_privacy_table():
    table = sflgame.PrivacyTable.builtin()
    assert table.lookup(3, 0).ssim == 0.9563
    assert table.recommend_min_cut(0.6, 2) == 3


def test_run_scenario():
    header, rows = sflgame.run_scenario(str(SCENARIOS / "fig4.toml"))
    assert header[0] == "R"
    assert len(rows) == 10
    d1 = header.index("d1")
    assert all(a[d1] < b[d1] for a, b in zip(rows, rows[1:]))
