"""Command-line interface: sweep runs, single-graph optimization, MaxCut
queries, landscape export, and report tables.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from pathlib import Path

from .experiment import (
    CSV_COLUMNS,
    SuiteConfig,
    aggregate_report,
    read_records_csv,
    render_report_text,
    run_suite,
    write_records_json,
    write_report_csv,
)
from .graphs import max_cut_bruteforce, read_graph
from .optimizer import SwarmConfig, adam_fipso_optimize, approx_ratio
from .simulator import LANDSCAPE_DEFAULT_RESOLUTION, write_landscape_csv

DEFAULT_SEED = 0
SEED_ENV_VAR = "QAOA_FIPSO_SEED"

_INT_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")
_FLOAT_RANGE = re.compile(r"^(-?\d+(?:\.\d+)?)\.\.(-?\d+(?:\.\d+)?)$")


def _parse_node_range(text: str) -> tuple[int, int]:
    m = _INT_RANGE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _parse_float_range(text: str) -> tuple[float, float]:
    m = _FLOAT_RANGE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")
    lo, hi = float(m.group(1)), float(m.group(2))
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"range must satisfy lo < hi, got {text!r}")
    return lo, hi


def _parse_models(text: str) -> tuple[str, ...]:
    models = tuple(part.strip().upper() for part in text.split(",") if part.strip())
    if not models:
        raise argparse.ArgumentTypeError("expected a comma-separated model list")
    return models


def _parse_depths(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _resolve_seed(flag_value, config_seed=None) -> int:
    if flag_value is not None:
        return flag_value
    if config_seed is not None:
        return config_seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def _load_swarm_config(path) -> tuple[SwarmConfig, bool]:
    """Returns the config and whether the file pinned a seed explicitly."""
    if path is None:
        return SwarmConfig(), False
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    return SwarmConfig.from_dict(doc), "seed" in doc


def cmd_run_suite(args) -> int:
    swarm, has_seed = _load_swarm_config(args.config)
    seed = _resolve_seed(args.seed, swarm.seed if has_seed else None)
    lo, hi = args.nodes
    cfg = SuiteConfig(models=args.models, node_lo=lo, node_hi=hi,
                      instances_per_size=args.instances, depths=args.depths,
                      base_seed=seed, swarm=swarm)
    cfg.validate()
    out = Path(args.out)
    sidecar = out.with_suffix(".json")
    with open(out, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)

        def on_record(r):
            writer.writerow(r.to_csv_row())
            f.flush()
            line = (f"{r.model} g{r.graph_index} n={r.n} p={r.p}: "
                    f"maxcut={r.max_cut} rand_ar={r.rand_ar:.3f} "
                    f"opt_ar={r.opt_ar:.3f} improvement={r.improvement_pct:.1f}%")
            if r.flag:
                line += f" [{r.flag}]"
            print(line)

        records = run_suite(cfg, jobs=args.jobs, on_record=on_record)
    write_records_json(sidecar, records)
    print(f"wrote {len(records)} records to {out} (+ {sidecar})")
    return 0


def cmd_optimize(args) -> int:
    g = read_graph(args.graph)
    swarm, has_seed = _load_swarm_config(args.config)
    swarm = swarm.with_seed(_resolve_seed(args.seed, swarm.seed if has_seed else None))
    max_cut = max_cut_bruteforce(g).value
    result = adam_fipso_optimize(g, args.depth, float(max_cut), swarm)
    doc = {
        "opt_params": [float(x) for x in result.best_position],
        "opt_cut": result.best_expectation,
        "opt_ar": approx_ratio(result.best_expectation, max_cut),
        "opt_loss": result.best_loss,
        "max_cut": max_cut,
        "iterations": result.iterations,
        "evaluations": result.evaluations,
    }
    print(json.dumps(doc))
    return 0


def cmd_maxcut(args) -> int:
    g = read_graph(args.graph)
    result = max_cut_bruteforce(g)
    bits = "".join(str((result.mask >> i) & 1) for i in range(g.n))
    print(f"{result.value} {bits}")
    return 0


def cmd_landscape(args) -> int:
    g = read_graph(args.graph)
    write_landscape_csv(args.out, g, gamma_range=args.gamma_range,
                        beta_range=args.beta_range, resolution=args.resolution)
    print(f"wrote {args.resolution * args.resolution} lattice points to {args.out}")
    return 0


def cmd_report(args) -> int:
    rows = read_records_csv(args.results)
    report = aggregate_report(rows)
    sys.stdout.write(render_report_text(report))
    if args.csv_out:
        write_report_csv(args.csv_out, report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmcut",
        description="QAOA MaxCut angle optimization with an Adam-corrected particle swarm.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_suite = sub.add_parser("run-suite", help="run the full graph sweep and persist records")
    p_suite.add_argument("--models", type=_parse_models, default=("ER", "WS"),
                         help="comma-separated subset of er,ws (default: er,ws)")
    p_suite.add_argument("--nodes", type=_parse_node_range, default=(3, 16), metavar="LO..HI",
                         help="inclusive node size range (default: 3..16)")
    p_suite.add_argument("--depths", type=_parse_depths, default=(1, 2, 3),
                         help="comma-separated circuit depths (default: 1,2,3)")
    p_suite.add_argument("--instances", type=int, default=5,
                         help="graph instances per size (default: 5)")
    p_suite.add_argument("--seed", type=int, default=None, help="base seed for the whole suite")
    p_suite.add_argument("--out", default="results.csv", help="results CSV path (default: results.csv)")
    p_suite.add_argument("--config", default=None, help="swarm config JSON path")
    p_suite.add_argument("--jobs", type=int, default=1, help="parallel instance workers (default: 1)")
    p_suite.set_defaults(func=cmd_run_suite)

    p_opt = sub.add_parser("optimize", help="optimize the angles for one graph file")
    p_opt.add_argument("graph", help="graph JSON path")
    p_opt.add_argument("--depth", type=int, default=1, help="circuit depth p (default: 1)")
    p_opt.add_argument("--config", default=None, help="swarm config JSON path")
    p_opt.add_argument("--seed", type=int, default=None, help="swarm seed")
    p_opt.set_defaults(func=cmd_optimize)

    p_max = sub.add_parser("maxcut", help="brute-force MaxCut of a graph file")
    p_max.add_argument("graph", help="graph JSON path")
    p_max.set_defaults(func=cmd_maxcut)

    p_land = sub.add_parser("landscape", help="export the depth-1 expectation landscape")
    p_land.add_argument("graph", help="graph JSON path")
    p_land.add_argument("--resolution", type=int, default=LANDSCAPE_DEFAULT_RESOLUTION,
                        help=f"lattice points per axis (default: {LANDSCAPE_DEFAULT_RESOLUTION})")
    p_land.add_argument("--gamma-range", type=_parse_float_range, default=(-math.pi, math.pi),
                        metavar="LO..HI",
                        help="gamma interval; write --gamma-range=-3.14..3.14 for "
                             "negative bounds (default: -pi..pi)")
    p_land.add_argument("--beta-range", type=_parse_float_range, default=(-math.pi, math.pi),
                        metavar="LO..HI",
                        help="beta interval; write --beta-range=-3.14..3.14 for "
                             "negative bounds (default: -pi..pi)")
    p_land.add_argument("--out", default="landscape.csv", help="output CSV path")
    p_land.set_defaults(func=cmd_landscape)

    p_rep = sub.add_parser("report", help="aggregate a results CSV into improvement tables")
    p_rep.add_argument("results", help="results CSV produced by run-suite")
    p_rep.add_argument("--csv-out", default=None, help="also write the tables as CSV")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
