# Copyright (C) 2026 swamp Development Team.
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

"""End-to-end runs of the bundled scenarios. Select with ``pytest -m slow``."""

import math
import time

import pytest

from swamp import api


def _timed(*args, **kwargs):
    start = time.time()
    report = api.run(*args, **kwargs)
    return report, time.time() - start


@pytest.mark.slow
def test_phi1_open_loop():
    reports = {}
    for s in ["maxplus", "minmax"]:
        reports[s], elapsed = _timed("phi1.json", semiring=s)
        assert elapsed < 300.0
    for report in reports.values():
        assert report.satisfied
        assert report.t_star is not None and report.t_star <= 1400
    # Sums of violations climb faster than the single worst violation.
    assert reports["maxplus"].t_star < reports["minmax"].t_star


@pytest.mark.slow
@pytest.mark.parametrize("semiring", ["maxplus", "minmax"])
def test_phi2_open_loop(semiring):
    report, elapsed = _timed("phi2.json", semiring=semiring)
    assert elapsed < 300.0
    assert report.satisfied
    assert report.t_star is not None and report.t_star <= 1400


@pytest.mark.slow
@pytest.mark.parametrize("scenario, steps", [("phi1.json", 50), ("phi2.json", 80)])
@pytest.mark.parametrize("semiring", ["maxplus", "minmax"])
def test_closed_loop(scenario, steps, semiring):
    report, elapsed = _timed(scenario, semiring=semiring, mode="mpc")
    assert elapsed < 600.0
    assert report.steps == steps
    assert report.rho >= 0.0


@pytest.mark.slow
def test_acc_closed_loop():
    report, elapsed = _timed("acc.json", semiring="maxplus")
    assert elapsed < 1800.0
    assert report.steps == 3000
    assert report.rho > 0.0
    other, elapsed = _timed("acc.json", semiring="minmax")
    assert elapsed < 1800.0
    assert other.rho is not None and not math.isnan(other.rho)


@pytest.mark.slow
def test_same_seed_same_bytes(tmp_path):
    a = api.run("phi2.json", seed=4, out_dir=str(tmp_path / "a"))
    b = api.run("phi2.json", seed=4, out_dir=str(tmp_path / "b"))
    name = a.basename() + ".csv"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert api.stats_json(a) == api.stats_json(b)
