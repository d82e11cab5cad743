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

import csv
import hashlib
import io
import json
import logging
import math
import os
import time
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from swamp.automaton.automaton import complement, prefix_weights, robustness_profile
from swamp.core import settings
from swamp.core.algebra.semiring import Absorbing, SemiringTag, get_semiring
from swamp.core.application_manager import instance as _instance
from swamp.core.errors import AutomatonPreconditionError
from swamp.dynamics import LeadProfileEnvironment, ModelEnvironment, ModelKind
from swamp.planner import mpc, open_loop
from swamp.scenario import Mode, Scenario, load_scenario


def init(backend: Optional[str] = None, address: Optional[str] = None, num_cpus: Optional[int] = None):
    if backend is not None:
        settings.backend_name = backend
    if address is not None:
        settings.address = address
    if num_cpus is not None:
        settings.num_cpus = num_cpus
    _instance()


def json_number(v):
    """Floats as JSON numbers; infinities and absorbing weights as their symbol."""
    if v is None:
        return None
    if isinstance(v, Absorbing):
        return v.symbol
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


@dataclass
class RunReport(object):
    scenario: str
    semiring: SemiringTag
    mode: Mode
    seed: int
    satisfied: bool
    t_star: Optional[int]
    rho: Optional[float]
    # w_A - w_notA of the reported trace; None when A cannot be complemented.
    automaton_robustness: Optional[float]
    epochs: int
    final_weight: Any
    dead: bool
    steps: int
    config: Dict[str, Any]
    input_hash: str
    weight_history: List[float] = field(default_factory=list)
    wall_clock: float = 0.0
    # Rows of the trajectory CSV: t, states, controls, weight and automaton
    # robustness so far.
    rows: List[List[float]] = field(default_factory=list, repr=False)
    state_dim: int = 0
    control_dim: int = 0

    @property
    def exit_code(self) -> int:
        if self.satisfied:
            return 0
        return 2 if self.dead else 1

    def to_meta(self) -> dict:
        """The stats document. Wall-clock time is left out so it is deterministic."""
        return {
            "scenario": self.scenario,
            "semiring": self.semiring.value,
            "mode": self.mode.value,
            "seed": self.seed,
            "satisfied": self.satisfied,
            "t_star": self.t_star,
            "rho": json_number(self.rho),
            "automaton_robustness": json_number(self.automaton_robustness),
            "epochs": self.epochs,
            "final_weight": json_number(self.final_weight),
            "dead": self.dead,
            "steps": self.steps,
            "config": self.config,
            "input_hash": self.input_hash,
            "weight_history": [json_number(w) for w in self.weight_history],
        }

    def basename(self) -> str:
        return "%s_%s_%s_seed%d" % (self.scenario, self.semiring.value, self.mode.value, self.seed)


def _input_hash(sc: Scenario, semiring: SemiringTag, mode: Mode, seed: int) -> str:
    h = hashlib.sha256()
    h.update(sc.content_hash().encode("utf-8"))
    h.update(("|%s|%s|%d" % (semiring.value, mode.value, seed)).encode("utf-8"))
    return h.hexdigest()


def _rows(trace, controls, weights, robustness) -> List[List[float]]:
    rows = []
    states = trace.to_numpy()
    us = controls.to_numpy()
    if robustness is None:
        robustness = [None] * len(states)
    for t, x in enumerate(states):
        u = list(us[t]) if t < len(us) else [None] * us.shape[1]
        rows.append([t] + list(x) + u + [weights[t], robustness[t]])
    return rows


def _robustness_profile(sc: Scenario, trace) -> Optional[List[float]]:
    try:
        negation = complement(sc.automaton, sample_count=settings.report_sample_count)
    except AutomatonPreconditionError as e:
        logging.getLogger(__name__).info("%s: no automaton robustness (%s)", sc.name, e)
        return None
    return robustness_profile(sc.automaton, trace, negation)


def run(
    scenario,
    semiring: Optional[str] = None,
    mode: Optional[str] = None,
    seed: Optional[int] = None,
    out_dir: Optional[str] = None,
) -> RunReport:
    """Plan a scenario and, when out_dir is given, write its CSV and stats JSON.

    Args:
        scenario: A Scenario or anything load_scenario accepts.
        semiring: Overrides the scenario's semiring.
        mode: "open_loop" or "mpc"; overrides the scenario's mode.
        seed: Overrides the planner seed.
        out_dir: Directory for the trajectory CSV and stats JSON.

    Returns:
        The RunReport. Its exit_code is 0 exactly when the executed or
        planned trace satisfies the scenario's STL formula.
    """
    logger = logging.getLogger(__name__)
    sc: Scenario = scenario if isinstance(scenario, Scenario) else load_scenario(scenario)
    mode = sc.mode if mode is None else Mode(mode.replace("-", "_"))
    cfg = sc.config(mode)
    changes = {}
    if semiring is not None:
        changes["semiring"] = SemiringTag(semiring)
    if seed is not None:
        changes["seed"] = int(seed)
    cfg = cfg.replace(**changes)
    sr = get_semiring(cfg.semiring)

    start = time.time()
    if mode is Mode.open_loop:
        result = open_loop(sc.model, sc.automaton, sc.x0, None, cfg, formula=sc.formula)
        weights = prefix_weights(sc.automaton, result.trace, sr)
        t_star, epochs, history, dead = (
            result.t_star,
            result.epochs,
            result.weight_history,
            result.dead,
        )
        steps = len(result.controls)
    else:
        if sc.model.kind is ModelKind.acc:
            env = LeadProfileEnvironment(sc.model, sc.lead_profile)
        else:
            env = ModelEnvironment(sc.model)
        result = mpc(sc.model, env, sc.automaton, sc.x0, cfg, sc.total_steps, formula=sc.formula)
        weights = result.prefix_weights
        t_star = None
        epochs = sum(r.epochs for r in result.step_results)
        history = result.prefix_weights
        dead = result.dead
        steps = result.steps
    wall_clock = time.time() - start
    robustness = _robustness_profile(sc, result.trace)

    if sc.formula is not None:
        satisfied = result.rho >= 0.0
    else:
        warnings.warn(
            "Scenario %s has no stl_formula; reporting automaton acceptance instead." % sc.name
        )
        satisfied = result.accepted

    config = {"planner": cfg.to_meta(), "dynamics": sc.meta.get("dynamics", {})}
    if mode is Mode.mpc:
        config["total_steps"] = sc.total_steps
    report = RunReport(
        scenario=sc.name,
        semiring=sr.tag,
        mode=mode,
        seed=cfg.seed,
        satisfied=bool(satisfied),
        t_star=t_star,
        rho=result.rho,
        automaton_robustness=None if robustness is None else robustness[-1],
        epochs=epochs,
        final_weight=result.final_weight,
        dead=dead,
        steps=steps,
        config=config,
        input_hash=_input_hash(sc, sr.tag, mode, cfg.seed),
        weight_history=list(history),
        wall_clock=wall_clock,
        rows=_rows(result.trace, result.controls, weights, robustness),
        state_dim=sc.model.state_dim,
        control_dim=sc.model.control_dim,
    )
    logger.info(
        "%s %s %s: satisfied=%s t*=%s rho=%s (%.2fs)",
        sc.name,
        sr.tag.value,
        mode.value,
        report.satisfied,
        t_star,
        result.rho,
        wall_clock,
    )
    if out_dir is not None:
        write_artifacts(report, out_dir)
    return report


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def trajectory_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = ["t"]
    header += ["x%d" % i for i in range(report.state_dim)]
    header += ["u%d" % i for i in range(report.control_dim)]
    header += ["weight", "robustness"]
    writer.writerow(header)
    for row in report.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def stats_json(report: RunReport) -> str:
    return json.dumps(report.to_meta(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_artifacts(report: RunReport, out_dir: str) -> Tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, report.basename() + ".csv")
    json_path = os.path.join(out_dir, report.basename() + ".json")
    with open(csv_path, "w", encoding="utf-8", newline="") as f:
        f.write(trajectory_csv(report))
    with open(json_path, "w", encoding="utf-8") as f:
        f.write(stats_json(report))
    return csv_path, json_path


# Comparison tables.

# Published baseline results per (scenario, mode): (STLCG, MILP). They are
# rendered for reference only and never recomputed.
BASELINES: Dict[Tuple[str, str], Tuple[str, str]] = {
    ("phi1", "open_loop"): ("1164", "42265"),
    ("phi1", "mpc"): ("--", "--"),
    ("phi2", "open_loop"): ("234", "--"),
    ("phi2", "mpc"): ("--", "--"),
    ("acc", "mpc"): ("-2.21", "0.6"),
}
BASELINE_NOTE = "STLCG and MILP columns are published baselines, not reproduced."
_SETTING = {"open_loop": "Open Loop (t*)", "mpc": "Closed Loop (rho)"}


def _result_cell(report: dict) -> str:
    if report["mode"] == "open_loop":
        if report["t_star"] is not None:
            return str(report["t_star"])
        return ">%d" % report["config"]["planner"]["epochs"]
    rho = report["rho"]
    if rho is None:
        return "--"
    if isinstance(rho, str):
        return rho
    return "%.3f" % rho


def table_rows(reports: Iterable[dict]) -> Tuple[List[str], List[List[str]]]:
    """Rows are (scenario, mode); columns are semirings then baselines and H, k, gamma."""
    reports = sorted(reports, key=lambda r: (r["scenario"], r["mode"], r["semiring"], r["seed"]))
    used = {r["semiring"] for r in reports}
    semirings = [
        t.value for t in SemiringTag if t.value in used or t in (SemiringTag.minmax, SemiringTag.maxplus)
    ]
    cells: Dict[Tuple[str, str], Dict[str, str]] = {}
    params: Dict[Tuple[str, str], Tuple[str, str, str]] = {}
    for r in reports:
        key = (r["scenario"], r["mode"])
        # The lowest seed represents a configuration.
        cells.setdefault(key, {}).setdefault(r["semiring"], _result_cell(r))
        planner = r["config"]["planner"]
        params.setdefault(
            key, (str(planner["horizon"]), str(planner["epochs"]), str(planner["learning_rate"]))
        )
    header = ["Specification", "Setting"] + semirings + ["STLCG", "MILP", "H", "k", "gamma"]
    rows = []
    for key in sorted(cells):
        name, mode = key
        row = [name, _SETTING.get(mode, mode)]
        row += [cells[key].get(s, "--") for s in semirings]
        row += list(BASELINES.get(key, ("--", "--")))
        row += list(params[key])
        rows.append(row)
    return header, rows


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append("")
    lines.append(BASELINE_NOTE)
    return "\n".join(lines) + "\n"


def table_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def load_reports(paths: Iterable[str]) -> List[dict]:
    reports = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as f:
            reports.append(json.load(f))
    return reports


def _run_one(path: str, semiring: str, mode: Optional[str], seed: int, out_dir: Optional[str]) -> dict:
    return run(path, semiring=semiring, mode=mode, seed=seed, out_dir=out_dir).to_meta()


def sweep(
    scenarios: Sequence[str],
    semirings: Sequence[str],
    seeds: Sequence[int],
    mode: Optional[str] = None,
    out_dir: Optional[str] = None,
) -> List[dict]:
    """Run every (scenario, semiring, seed) on the backend; reports come back
    sorted by that key whatever order the workers finish in."""
    jobs = sorted(
        (os.path.abspath(p) if os.path.exists(p) else p, s, int(seed))
        for p in scenarios
        for s in semirings
        for seed in seeds
    )
    backend = _instance()
    backend.register("swamp_run_one", _run_one)
    metas = backend.map(
        "swamp_run_one", [(path, s, mode, seed, out_dir) for path, s, seed in jobs]
    )
    return sorted(metas, key=lambda m: (m["scenario"], m["mode"], m["semiring"], m["seed"]))
