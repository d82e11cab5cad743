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


"""The ``plan`` command.

    plan run <scenario.json> [--semiring S] [--mode open-loop|mpc] [--seed N] [--out DIR]
    plan table <stats.json ...> [--csv PATH]
    plan validate <scenario.json>
    plan sweep <scenario.json ...> [--semirings S ...] [--seeds N ...] [--mode M] [--out DIR]

Exit codes: 0 satisfied, 1 not satisfied, 2 planner dead end, 3 invalid scenario
or any other domain error.
"""

import argparse
import os
import sys
from typing import List, Optional

from swamp import api
from swamp.core import application_manager
from swamp.core.algebra.semiring import SemiringTag
from swamp.core.errors import ScenarioValidationError, SwampError
from swamp.scenario import load_scenario

EXIT_SATISFIED = 0
EXIT_NOT_SATISFIED = 1
EXIT_DEAD_END = 2
EXIT_INVALID = 3

DEFAULT_OUT_DIR = "out"

_SEMIRINGS = [t.value for t in SemiringTag]


def _mode(text: str) -> str:
    mode = text.replace("-", "_")
    if mode not in ("open_loop", "mpc"):
        raise argparse.ArgumentTypeError("mode must be open-loop or mpc, got %r" % text)
    return mode


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="plan", description="Gradient-based planning against symbolic automata."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="Plan one scenario.")
    p.add_argument("scenario")
    p.add_argument("--semiring", choices=_SEMIRINGS)
    p.add_argument("--mode", type=_mode)
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--out", dest="out_dir", help="Defaults to outputs.dir of the scenario, then out."
    )

    p = sub.add_parser("table", help="Tabulate stats JSON files.")
    p.add_argument("reports", nargs="+")
    p.add_argument("--csv", dest="csv_path")

    p = sub.add_parser("validate", help="Check a scenario file.")
    p.add_argument("scenario")

    p = sub.add_parser("sweep", help="Run scenarios over semirings and seeds.")
    p.add_argument("scenarios", nargs="+")
    p.add_argument("--semirings", nargs="+", choices=_SEMIRINGS, default=["minmax", "maxplus"])
    p.add_argument("--seeds", nargs="+", type=int, default=[0])
    p.add_argument("--mode", type=_mode)
    p.add_argument("--out", dest="out_dir", default=DEFAULT_OUT_DIR)
    return parser.parse_args(argv)


def _report_invalid(e: SwampError) -> int:
    print(str(e), file=sys.stderr)
    return EXIT_INVALID


def cmd_run(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        # --out wins over the scenario's outputs.dir.
        out_dir = args.out_dir or scenario.output_dir or DEFAULT_OUT_DIR
        report = api.run(scenario, args.semiring, args.mode, args.seed, out_dir)
    except SwampError as e:
        return _report_invalid(e)
    print(
        "%s %s %s: %s (t*=%s, rho=%s, %.2fs) -> %s"
        % (
            report.scenario,
            report.semiring.value,
            report.mode.value,
            "satisfied" if report.satisfied else "NOT satisfied",
            report.t_star,
            api.json_number(report.rho),
            report.wall_clock,
            os.path.join(out_dir, report.basename() + ".{csv,json}"),
        )
    )
    if report.dead:
        print(
            "dead end: the trace leaves every location that can still accept; "
            "try restart_count > 0 or a longer horizon.",
            file=sys.stderr,
        )
    return report.exit_code


def cmd_table(args) -> int:
    header, rows = api.table_rows(api.load_reports(args.reports))
    sys.stdout.write(api.render_table(header, rows))
    if args.csv_path:
        with open(args.csv_path, "w", encoding="utf-8", newline="") as f:
            f.write(api.table_csv(header, rows))
    return 0


def cmd_validate(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioValidationError as e:
        return _report_invalid(e)
    print(
        "%s: ok (%d locations, %s, hash %s)"
        % (
            scenario.name,
            scenario.automaton.n_locations,
            scenario.model.kind.value,
            scenario.content_hash()[:12],
        )
    )
    return 0


def cmd_sweep(args) -> int:
    try:
        for path in args.scenarios:
            load_scenario(path)
    except ScenarioValidationError as e:
        return _report_invalid(e)
    metas = api.sweep(args.scenarios, args.semirings, args.seeds, args.mode, args.out_dir)
    header, rows = api.table_rows(metas)
    text = api.render_table(header, rows)
    sys.stdout.write(text)
    os.makedirs(args.out_dir, exist_ok=True)
    with open(os.path.join(args.out_dir, "table.csv"), "w", encoding="utf-8", newline="") as f:
        f.write(api.table_csv(header, rows))
    return EXIT_SATISFIED if all(m["satisfied"] for m in metas) else EXIT_NOT_SATISFIED


_COMMANDS = {
    "run": cmd_run,
    "table": cmd_table,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    application_manager.configure_logging()
    try:
        return _COMMANDS[args.command](args)
    finally:
        application_manager.destroy()


if __name__ == "__main__":
    sys.exit(main())
