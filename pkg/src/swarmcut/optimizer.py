"""Swarm search over QAOA angles: Adam-corrected fully informed particle swarm.

Three update modes share one loop skeleton. The social velocity always pulls
a candidate from every particle's personal best; the modes differ in the
gradient handed to the per-particle Adam correction:

  adam_fd     central finite differences of the loss at the candidate (default)
  adam_swarm  the random personal-best influence average at the candidate
  fipso_plain no Adam correction at all

The loss for a graph combines squared error against a classical target cut
with a penalty on the approximation-ratio shortfall.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .graphs import Graph
from .simulator import ExpectationEvaluator

MODES = ("adam_fd", "adam_swarm", "fipso_plain")

DEFAULT_BOUND = (-math.pi, math.pi)


@dataclass
class SwarmConfig:
    swarm_size: int = 20
    max_iters: int = 50
    w_max: float = 0.9
    w_min: float = 0.4
    c: float = 2.0
    eta: float = 0.05
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    epsilon: float = 1e-8
    lambda_: float = 1.0
    fd_step: float = 1e-3
    bounds: Sequence | None = None
    mode: str = "adam_fd"
    seed: int = 0

    # JSON documents use the bare key "lambda"; the trailing underscore is
    # only a python keyword workaround.
    _JSON_ALIASES = {"lambda": "lambda_"}

    def validate(self) -> None:
        if self.swarm_size < 2:
            raise ValueError(f"swarm_size must be >= 2, got {self.swarm_size}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0 <= self.w_min <= self.w_max:
            raise ValueError(f"need 0 <= w_min <= w_max, got ({self.w_min}, {self.w_max})")
        if not 0 < self.adam_beta1 < 1 or not 0 < self.adam_beta2 < 1:
            raise ValueError("adam decay rates must lie strictly in (0, 1)")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.fd_step <= 0:
            raise ValueError(f"fd_step must be positive, got {self.fd_step}")
        if self.lambda_ < 0:
            raise ValueError(f"lambda must be non-negative, got {self.lambda_}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.bounds is not None:
            for lo, hi in _normalize_bounds(self.bounds, dim=None):
                if not lo < hi:
                    raise ValueError(f"bound ({lo}, {hi}) must satisfy lo < hi")

    @classmethod
    def from_dict(cls, doc: dict) -> "SwarmConfig":
        fields = {f for f in cls.__dataclass_fields__ if not f.startswith("_")}
        kwargs = {}
        for key, value in doc.items():
            name = cls._JSON_ALIASES.get(key, key)
            if name not in fields:
                raise ValueError(f"unknown swarm config key {key!r}")
            kwargs[name] = value
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def from_json_file(cls, path) -> "SwarmConfig":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def to_dict(self) -> dict:
        doc = {
            "swarm_size": self.swarm_size, "max_iters": self.max_iters,
            "w_max": self.w_max, "w_min": self.w_min, "c": self.c,
            "eta": self.eta, "adam_beta1": self.adam_beta1,
            "adam_beta2": self.adam_beta2, "epsilon": self.epsilon,
            "lambda": self.lambda_, "fd_step": self.fd_step, "mode": self.mode,
            "seed": self.seed,
        }
        if self.bounds is not None:
            doc["bounds"] = [list(b) for b in _normalize_bounds(self.bounds, dim=None)]
        return doc

    def with_seed(self, seed: int) -> "SwarmConfig":
        return replace(self, seed=seed)


@dataclass
class OptimizeResult:
    best_position: np.ndarray
    best_loss: float
    best_expectation: float | None
    trace: list[float] = field(default_factory=list)
    evaluations: int = 0

    @property
    def iterations(self) -> int:
        return len(self.trace)


def approx_ratio(c_hat: float, c_target: float) -> float:
    """c_hat / c_target, defined as 0 when the target cut is 0."""
    if c_target == 0:
        return 0.0
    return c_hat / c_target


def make_objective(g: Graph, p: int, c_target: float, lambda_: float) -> Callable[[np.ndarray], float]:
    """Loss over 2p-vectors theta = (gamma_1..p, beta_1..p):
    (C_hat - c_target)^2 + lambda * (1 - AR)^2."""
    if c_target < 0:
        raise ValueError(f"target cut must be non-negative, got {c_target}")
    ev = ExpectationEvaluator(g)

    def loss(theta: np.ndarray) -> float:
        c_hat = ev.expectation(theta[:p], theta[p:])
        ar = approx_ratio(c_hat, c_target)
        return (c_hat - c_target) ** 2 + lambda_ * (1.0 - ar) ** 2

    return loss


def objective(theta, g: Graph, c_target: float, lambda_: float) -> float:
    """One-shot evaluation of the loss at theta."""
    theta = np.asarray(theta, dtype=np.float64)
    return make_objective(g, theta.size // 2, c_target, lambda_)(theta)


def finite_diff_grad(f: Callable[[np.ndarray], float], theta, h: float) -> np.ndarray:
    """Central differences per dimension, 2*dim evaluations of f."""
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.empty_like(theta)
    probe = theta.copy()
    for d in range(theta.size):
        probe[d] = theta[d] + h
        f_plus = f(probe)
        probe[d] = theta[d] - h
        f_minus = f(probe)
        probe[d] = theta[d]
        if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
            raise ArithmeticError(f"non-finite objective near dimension {d}: f+={f_plus}, f-={f_minus}")
        grad[d] = (f_plus - f_minus) / (2.0 * h)
    return grad


def swarm_influence_grad(theta, pbest_positions: np.ndarray, c: float, rng) -> np.ndarray:
    """Fully informed influence average: (1/S) * sum_j c * r_j * (pbest_j - theta),
    with one uniform r_j per neighbour per call."""
    theta = np.asarray(theta, dtype=np.float64)
    r = rng.random(pbest_positions.shape[0])
    return (c / pbest_positions.shape[0]) * (r @ (pbest_positions - theta))


def adam_update(m, v2, t: int, grad, beta1: float, beta2: float,
                eta: float, epsilon: float):
    """One adaptive-moment step. Returns (step, new_m, new_v2); the caller
    owns the sign of the step application."""
    grad = np.asarray(grad, dtype=np.float64)
    m_new = beta1 * m + (1.0 - beta1) * grad
    v2_new = beta2 * v2 + (1.0 - beta2) * grad * grad
    m_hat = m_new / (1.0 - beta1 ** t)
    v2_hat = v2_new / (1.0 - beta2 ** t)
    step = eta * m_hat / (np.sqrt(v2_hat) + epsilon)
    return step, m_new, v2_new


def random_params(p: int, rng) -> np.ndarray:
    """One uniform draw from [-pi, pi]^(2p)."""
    if p < 1:
        raise ValueError(f"depth must be >= 1, got {p}")
    return rng.uniform(-math.pi, math.pi, size=2 * p)


def _normalize_bounds(bounds, dim: int | None) -> np.ndarray:
    arr = np.asarray(bounds, dtype=np.float64)
    if arr.ndim == 1 and arr.shape == (2,):
        if dim is None:
            return arr.reshape(1, 2)
        arr = np.tile(arr, (dim, 1))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"bounds must be a (lo, hi) pair or a list of pairs, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected {dim} bound pairs, got {arr.shape[0]}")
    return arr


def minimize(f: Callable[[np.ndarray], float], bounds, cfg: SwarmConfig) -> OptimizeResult:
    """Run the swarm on an arbitrary loss over a box. Deterministic per cfg.seed.

    One RNG stream drives everything, drawn in a fixed order: initial
    positions, then per iteration and per particle the social scalars,
    then (adam_swarm only) the influence scalars.
    """
    cfg.validate()
    bounds = _normalize_bounds(bounds, dim=None)
    dim = bounds.shape[0]
    lo, hi = bounds[:, 0].copy(), bounds[:, 1].copy()
    if not (lo < hi).all():
        raise ValueError("every bound must satisfy lo < hi")
    s_count, t_max = cfg.swarm_size, cfg.max_iters
    rng = np.random.default_rng(cfg.seed)

    n_evals = 0

    def evaluate(theta: np.ndarray) -> float:
        nonlocal n_evals
        n_evals += 1
        return float(f(theta))

    positions = rng.uniform(lo, hi, size=(s_count, dim))
    velocities = np.zeros((s_count, dim))
    moments = np.zeros((s_count, dim))
    moments2 = np.zeros((s_count, dim))
    adam_steps = np.zeros(s_count, dtype=np.int64)

    pbest_pos = positions.copy()
    pbest_loss = np.array([evaluate(positions[i]) for i in range(s_count)])
    g_idx = int(np.argmin(pbest_loss))
    gbest_pos = pbest_pos[g_idx].copy()
    gbest_loss = float(pbest_loss[g_idx])

    trace = []
    for t in range(1, t_max + 1):
        w = cfg.w_max - (t / t_max) * (cfg.w_max - cfg.w_min)
        for i in range(s_count):
            r = rng.random(s_count)
            delta = r @ pbest_pos - r.sum() * positions[i]
            velocities[i] = w * velocities[i] + (cfg.c / s_count) * delta
            cand = positions[i] + velocities[i]
            if cfg.mode != "fipso_plain":
                if cfg.mode == "adam_fd":
                    grad = finite_diff_grad(evaluate, cand, cfg.fd_step)
                    direction = -1.0
                else:
                    grad = swarm_influence_grad(cand, pbest_pos, cfg.c, rng)
                    direction = 1.0
                adam_steps[i] += 1
                step, moments[i], moments2[i] = adam_update(
                    moments[i], moments2[i], int(adam_steps[i]), grad,
                    cfg.adam_beta1, cfg.adam_beta2, cfg.eta, cfg.epsilon)
                cand = cand + direction * step
            np.clip(cand, lo, hi, out=cand)
            velocities[i] = cand - positions[i]
            positions[i] = cand
            loss = evaluate(cand)
            if loss < pbest_loss[i]:
                pbest_loss[i] = loss
                pbest_pos[i] = cand
            if loss < gbest_loss:
                gbest_loss = loss
                gbest_pos = cand.copy()
        trace.append(gbest_loss)

    return OptimizeResult(best_position=gbest_pos, best_loss=gbest_loss,
                          best_expectation=None, trace=trace, evaluations=n_evals)


def adam_fipso_optimize(g: Graph, p: int, c_target: float, cfg: SwarmConfig) -> OptimizeResult:
    """Optimize the 2p QAOA angles of g against a classical target cut."""
    if p < 1:
        raise ValueError(f"depth must be >= 1, got {p}")
    bounds = _normalize_bounds(cfg.bounds if cfg.bounds is not None else DEFAULT_BOUND, dim=2 * p)
    loss = make_objective(g, p, c_target, cfg.lambda_)
    result = minimize(loss, bounds, cfg)
    ev = ExpectationEvaluator(g)
    result.best_expectation = ev.expectation(result.best_position[:p], result.best_position[p:])
    return result
