"""Benchmark sweep over random graph instances: graph models x sizes x depths.

Every cell (model, graph_index, n, p) gets a brute-force MaxCut, a
one-exchange reference cut, a single random-parameter baseline, and a swarm
optimization run. All randomness derives from one base seed through a stable
hash, so a suite is a pure function of its configuration.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, generate_er, generate_ws, max_cut_bruteforce, one_exchange_cut, ws_k_for
from .optimizer import SwarmConfig, adam_fipso_optimize, approx_ratio, random_params
from .simulator import ExpectationEvaluator

MODELS = ("ER", "WS")

CSV_COLUMNS = (
    "model", "graph_index", "n", "p", "max_cut", "classical_cut",
    "rand_cut", "rand_ar", "opt_cut", "opt_ar", "opt_loss",
    "improvement_pct", "graph_seed", "baseline_seed", "swarm_seed", "flag",
)


class UndefinedImprovementError(ValueError):
    """Baseline approximation ratio is 0, so relative improvement is undefined."""


@dataclass(frozen=True)
class ExperimentRecord:
    model: str
    graph_index: int
    n: int
    p: int
    max_cut: int
    classical_cut: int
    rand_params: tuple
    rand_cut: float
    rand_ar: float
    opt_params: tuple
    opt_cut: float
    opt_ar: float
    opt_loss: float
    improvement_pct: float
    graph_seed: int
    baseline_seed: int
    swarm_seed: int
    flag: str = ""
    config: dict = field(default_factory=dict)

    def sort_key(self):
        return (self.model, self.graph_index, self.n, self.p)

    def to_csv_row(self) -> list:
        return [getattr(self, col) for col in CSV_COLUMNS]

    def to_json_dict(self) -> dict:
        doc = {col: getattr(self, col) for col in CSV_COLUMNS}
        doc["rand_params"] = list(self.rand_params)
        doc["opt_params"] = list(self.opt_params)
        doc["config"] = dict(self.config)
        return doc


@dataclass
class SuiteConfig:
    models: tuple = MODELS
    node_lo: int = 3
    node_hi: int = 16
    instances_per_size: int = 5
    depths: tuple = (1, 2, 3)
    er_edge_prob: float = 0.5
    ws_rewire_prob: float = 0.3
    base_seed: int = 0
    swarm: SwarmConfig = field(default_factory=SwarmConfig)

    def validate(self) -> None:
        models = tuple(m.upper() for m in self.models)
        if not models or any(m not in MODELS for m in models):
            raise ValueError(f"models must be a non-empty subset of {MODELS}, got {self.models}")
        self.models = models
        if self.node_lo < 3:
            raise ValueError(f"node_lo must be >= 3, got {self.node_lo}")
        if self.node_hi < self.node_lo:
            raise ValueError(f"node_hi must be >= node_lo, got {self.node_hi}")
        if self.node_hi > 24:
            raise ValueError(f"node_hi must be <= 24, got {self.node_hi}")
        if self.node_hi > 16:
            warnings.warn(f"node_hi={self.node_hi} exceeds 16; statevectors grow as 2^n "
                          "and the sweep may take very long", stacklevel=2)
        if self.instances_per_size < 1:
            raise ValueError(f"instances_per_size must be >= 1, got {self.instances_per_size}")
        depths = tuple(sorted(self.depths))
        if not depths or any(p not in (1, 2, 3) for p in depths):
            raise ValueError(f"depths must be a non-empty subset of (1, 2, 3), got {self.depths}")
        self.depths = depths
        for name in ("er_edge_prob", "ws_rewire_prob"):
            prob = getattr(self, name)
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {prob}")
        self.swarm.validate()

    def cells(self) -> list[tuple[str, int, int, int]]:
        """All (model, graph_index, n, p) combinations in canonical order."""
        self.validate()
        return [(model, g_idx, n, p)
                for model in sorted(self.models)
                for g_idx in range(1, self.instances_per_size + 1)
                for n in range(self.node_lo, self.node_hi + 1)
                for p in self.depths]


def derive_seed(base_seed: int, *parts) -> int:
    """Stable 64-bit seed from the base seed and any hashable tags."""
    text = "|".join(str(x) for x in (base_seed, *parts))
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def _generate_instance(model: str, n: int, cfg: SuiteConfig, graph_seed: int) -> tuple[Graph, int]:
    """Generate a graph, resampling with incremented seed while it has no
    edges (the approximation ratio is undefined for a MaxCut of 0)."""
    seed = graph_seed
    while True:
        if model == "ER":
            g = generate_er(n, cfg.er_edge_prob, seed)
        else:
            g = generate_ws(n, ws_k_for(n), cfg.ws_rewire_prob, seed)
        if g.edge_count >= 1:
            return g, seed
        seed += 1


def random_baseline(g: Graph, p: int, seed: int, params=None, max_cut: int | None = None):
    """One uniform parameter draw and its expectation / approximation ratio."""
    if g.edge_count == 0:
        raise ValueError("baseline is undefined for an edgeless graph")
    if params is None:
        rng = np.random.default_rng(seed)
        params = random_params(p, rng)
    params = np.asarray(params, dtype=np.float64)
    if max_cut is None:
        max_cut = max_cut_bruteforce(g).value
    ev = ExpectationEvaluator(g)
    cut = ev.expectation(params[:p], params[p:])
    return params, cut, approx_ratio(cut, max_cut)


def improvement(ar_opt: float, ar_rand: float) -> float:
    """Relative percentage gain of the optimized AR over the baseline AR."""
    if ar_rand == 0:
        raise UndefinedImprovementError("baseline approximation ratio is 0")
    return (ar_opt - ar_rand) / ar_rand * 100.0


def run_instance(model: str, graph_index: int, n: int, p: int, cfg: SuiteConfig) -> ExperimentRecord:
    """One sweep cell. The graph seed omits p, so all depths share the graph."""
    model = model.upper()
    base_graph_seed = derive_seed(cfg.base_seed, model, graph_index, n, "graph")
    g, graph_seed = _generate_instance(model, n, cfg, base_graph_seed)

    max_cut = max_cut_bruteforce(g).value
    classical_seed = derive_seed(cfg.base_seed, model, graph_index, n, "classical")
    classical_cut = one_exchange_cut(g, classical_seed).value

    baseline_seed = derive_seed(cfg.base_seed, model, graph_index, n, p, "baseline")
    rand_theta, rand_cut, rand_ar = random_baseline(g, p, baseline_seed, max_cut=max_cut)

    swarm_seed = derive_seed(cfg.base_seed, model, graph_index, n, p, "swarm")
    result = adam_fipso_optimize(g, p, float(max_cut), cfg.swarm.with_seed(swarm_seed))
    opt_cut = result.best_expectation
    opt_ar = approx_ratio(opt_cut, max_cut)

    flag = ""
    try:
        improvement_pct = improvement(opt_ar, rand_ar)
    except UndefinedImprovementError:
        improvement_pct = math.nan
        flag = "undefined_improvement"

    return ExperimentRecord(
        model=model, graph_index=graph_index, n=n, p=p,
        max_cut=max_cut, classical_cut=classical_cut,
        rand_params=tuple(rand_theta), rand_cut=rand_cut, rand_ar=rand_ar,
        opt_params=tuple(result.best_position), opt_cut=opt_cut, opt_ar=opt_ar,
        opt_loss=result.best_loss, improvement_pct=improvement_pct,
        graph_seed=graph_seed, baseline_seed=baseline_seed, swarm_seed=swarm_seed,
        flag=flag, config=cfg.swarm.with_seed(swarm_seed).to_dict(),
    )


def _error_record(model, graph_index, n, p, message) -> ExperimentRecord:
    nan = math.nan
    return ExperimentRecord(
        model=model, graph_index=graph_index, n=n, p=p, max_cut=0, classical_cut=0,
        rand_params=(), rand_cut=nan, rand_ar=nan, opt_params=(), opt_cut=nan,
        opt_ar=nan, opt_loss=nan, improvement_pct=nan,
        graph_seed=0, baseline_seed=0, swarm_seed=0,
        flag=f"error: {message}",
    )


def _run_cell(args):
    model, graph_index, n, p, cfg = args
    try:
        return run_instance(model, graph_index, n, p, cfg)
    except Exception as exc:  # suite keeps going; the record carries the failure
        return _error_record(model, graph_index, n, p, exc)


def _check_seed_collisions(cfg: SuiteConfig, cells) -> None:
    seeds = []
    for model, g_idx, n, p in cells:
        for role in ("baseline", "swarm"):
            seeds.append(derive_seed(cfg.base_seed, model, g_idx, n, p, role))
    if len(set(seeds)) != len(seeds):
        raise RuntimeError("derived seed collision across suite cells")


def run_suite(cfg: SuiteConfig, jobs: int = 1, on_record=None) -> list[ExperimentRecord]:
    """Run every cell of the sweep. Records come back in canonical order
    (model, graph_index, n, p) regardless of the worker count."""
    cells = cfg.cells()
    _check_seed_collisions(cfg, cells)
    tasks = [(model, g_idx, n, p, cfg) for model, g_idx, n, p in cells]
    records = []

    def consume(results):
        for record in results:
            records.append(record)
            if on_record is not None:
                on_record(record)

    if jobs <= 1:
        consume(map(_run_cell, tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            consume(executor.map(_run_cell, tasks))
    return sorted(records, key=ExperimentRecord.sort_key)


def write_records_csv(path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(record.to_csv_row())


def write_records_json(path, records) -> None:
    """Sidecar with the full parameter vectors and the swarm config echo."""
    docs = [record.to_json_dict() for record in records]
    with open(path, "w", encoding="utf-8") as f:
        json.dump(docs, f, indent=2, sort_keys=True)
        f.write("\n")


_INT_COLUMNS = {"graph_index", "n", "p", "max_cut", "classical_cut",
                "graph_seed", "baseline_seed", "swarm_seed"}
_FLOAT_COLUMNS = {"rand_cut", "rand_ar", "opt_cut", "opt_ar", "opt_loss", "improvement_pct"}


def read_records_csv(path) -> list[dict]:
    """Parse a results CSV back into typed dicts, validating the schema."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [col for col in CSV_COLUMNS if col not in header]
        if missing:
            raise ValueError(f"results CSV is missing column(s): {', '.join(missing)}")
        rows = []
        for row in reader:
            parsed = dict(row)
            for col in _INT_COLUMNS:
                parsed[col] = int(row[col])
            for col in _FLOAT_COLUMNS:
                parsed[col] = float(row[col])
            rows.append(parsed)
    return rows


def aggregate_report(records) -> dict:
    """Mean improvement percentage per (model, n, p) cell.

    Returns {model: {"nodes": [...], "depths": [...], "cells": {(n, p): mean},
    "excluded": {n: count}}}. Flagged records are excluded from the means and
    counted instead.
    """
    rows = [r.to_json_dict() if isinstance(r, ExperimentRecord) else r for r in records]
    if not rows:
        raise ValueError("no records to aggregate")
    report: dict = {}
    for row in rows:
        model = row["model"]
        entry = report.setdefault(model, {"values": {}, "excluded": {}})
        key = (row["n"], row["p"])
        if row.get("flag"):
            entry["excluded"][row["n"]] = entry["excluded"].get(row["n"], 0) + 1
        else:
            entry["values"].setdefault(key, []).append(row["improvement_pct"])
    out = {}
    for model in sorted(report):
        values = report[model]["values"]
        excluded = report[model]["excluded"]
        nodes = sorted({n for n, _ in values} | set(excluded))
        depths = sorted({p for _, p in values})
        cells = {key: float(np.mean(vals)) for key, vals in values.items()}
        out[model] = {"nodes": nodes, "depths": depths, "cells": cells, "excluded": excluded}
    return out


def render_report_text(report: dict) -> str:
    """Aligned table per model: rows are node sizes, columns are depths."""
    lines = []
    for model, entry in report.items():
        depths = entry["depths"]
        header = ["Node"] + [f"p={p}" for p in depths] + ["excluded"]
        body = []
        for n in entry["nodes"]:
            row = [f"Node {n}"]
            for p in depths:
                mean = entry["cells"].get((n, p))
                row.append("-" if mean is None else f"{mean:.1f}%")
            row.append(str(entry["excluded"].get(n, 0)))
            body.append(row)
        widths = [max(len(r[c]) for r in [header] + body) for c in range(len(header))]
        lines.append(f"Mean improvement over random baseline: {model} graphs")
        lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        for row in body:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def write_report_csv(path, report: dict) -> None:
    """Machine-readable mirror of the report tables."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        all_depths = sorted({p for entry in report.values() for p in entry["depths"]})
        writer.writerow(["model", "node"] + [f"p={p}" for p in all_depths] + ["excluded"])
        for model, entry in report.items():
            for n in entry["nodes"]:
                row = [model, n]
                for p in all_depths:
                    mean = entry["cells"].get((n, p))
                    row.append("" if mean is None else repr(mean))
                row.append(entry["excluded"].get(n, 0))
                writer.writerow(row)
