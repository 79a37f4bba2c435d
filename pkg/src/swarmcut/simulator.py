"""Exact statevector simulation of depth-p QAOA circuits for MaxCut.

The cost Hamiltonian is diagonal in the computational basis: the eigenvalue
of basis state z is the cut size of z read as a partition mask, so one layer
of cost evolution is a per-amplitude phase and one mixer layer is a 2x2 map
on every qubit. Basis indexing is little-endian, matching graphs.cut_size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _statevec
from .graphs import MAX_NODES, CapacityError, Graph, cut_values_all_masks

LANDSCAPE_DEFAULT_RANGE = (-math.pi, math.pi)
LANDSCAPE_DEFAULT_RESOLUTION = 64


@dataclass(frozen=True)
class QaoaParams:
    """Angles of a depth-p circuit, gamma for cost layers, beta for mixers."""

    gamma: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=np.float64)
        beta = np.asarray(self.beta, dtype=np.float64)
        if gamma.ndim != 1 or beta.ndim != 1 or gamma.size != beta.size or gamma.size < 1:
            raise ValueError("gamma and beta must be equal-length non-empty vectors")
        if not (np.isfinite(gamma).all() and np.isfinite(beta).all()):
            raise ValueError("angles must be finite")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "beta", beta)

    @property
    def p(self) -> int:
        return self.gamma.size

    @classmethod
    def from_vector(cls, theta) -> "QaoaParams":
        theta = np.asarray(theta, dtype=np.float64)
        if theta.ndim != 1 or theta.size % 2 != 0 or theta.size == 0:
            raise ValueError(f"parameter vector must have even positive length, got shape {theta.shape}")
        p = theta.size // 2
        return cls(gamma=theta[:p], beta=theta[p:])

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.gamma, self.beta])


def _check_capacity(n: int) -> None:
    if n > MAX_NODES:
        raise CapacityError(f"n={n} exceeds the {MAX_NODES}-qubit statevector cap")


def build_cut_spectrum(g: Graph) -> np.ndarray:
    """Diagonal of the cost Hamiltonian: entry z is the cut size of mask z."""
    _check_capacity(g.n)
    return cut_values_all_masks(g)


def init_plus_state(n: int) -> np.ndarray:
    """Uniform superposition over all 2^n basis states."""
    _check_capacity(n)
    size = 1 << n
    return np.full(size, 1.0 / math.sqrt(size), dtype=np.complex128)


def _phase_table(spectrum_max: int, gamma: float) -> np.ndarray:
    return np.exp(-1j * gamma * np.arange(spectrum_max + 1, dtype=np.float64))


def apply_cost_layer(state: np.ndarray, spectrum: np.ndarray, gamma: float) -> np.ndarray:
    """Multiply amplitude z by exp(-i*gamma*spectrum[z]), in place."""
    if state.shape != spectrum.shape:
        raise ValueError(f"state size {state.shape} does not match spectrum {spectrum.shape}")
    table = _phase_table(int(spectrum.max(initial=0)), gamma)
    _statevec.apply_phase_table(state, spectrum, table)
    return state


def apply_mixer_layer(state: np.ndarray, beta: float) -> np.ndarray:
    """Apply exp(-i*beta*X) to every qubit, in place."""
    n = state.size.bit_length() - 1
    if 1 << n != state.size:
        raise ValueError(f"state size {state.size} is not a power of two")
    _statevec.apply_mixer(state, n, beta)
    return state


class ExpectationEvaluator:
    """Repeated expectation evaluation for one graph.

    Caches the cut spectrum and reuses a single amplitude buffer, so an
    optimizer can evaluate thousands of parameter vectors without
    reallocating 2^n-sized arrays.
    """

    def __init__(self, g: Graph):
        _check_capacity(g.n)
        self.graph = g
        self.n = g.n
        self.spectrum = build_cut_spectrum(g)
        self._max_value = int(self.spectrum.max(initial=0))
        self._amps = np.empty(1 << g.n, dtype=np.complex128)
        self._init_amp = 1.0 / math.sqrt(1 << g.n)

    def expectation(self, gamma, beta) -> float:
        amps = self._amps
        amps.fill(self._init_amp)
        for g_k, b_k in zip(gamma, beta):
            _statevec.apply_phase_table(amps, self.spectrum, _phase_table(self._max_value, g_k))
            _statevec.apply_mixer(amps, self.n, b_k)
        return _statevec.expectation_value(amps, self.spectrum)

    def expectation_vector(self, theta) -> float:
        params = QaoaParams.from_vector(theta)
        return self.expectation(params.gamma, params.beta)


def qaoa_expectation(g: Graph, params: QaoaParams) -> float:
    """<psi_p(gamma, beta)| H_C |psi_p(gamma, beta)> for the MaxCut Hamiltonian of g."""
    return ExpectationEvaluator(g).expectation(params.gamma, params.beta)


def landscape_grid(g: Graph, gamma_range=LANDSCAPE_DEFAULT_RANGE,
                   beta_range=LANDSCAPE_DEFAULT_RANGE,
                   resolution: int = LANDSCAPE_DEFAULT_RESOLUTION) -> np.ndarray:
    """Depth-1 expectation on an inclusive resolution x resolution lattice.

    Entry (a, b) is the expectation at (gamma_a, beta_b).
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    for lo, hi in (gamma_range, beta_range):
        if not lo < hi:
            raise ValueError(f"range ({lo}, {hi}) must satisfy lo < hi")
    gammas = np.linspace(gamma_range[0], gamma_range[1], resolution)
    betas = np.linspace(beta_range[0], beta_range[1], resolution)
    ev = ExpectationEvaluator(g)
    grid = np.empty((resolution, resolution), dtype=np.float64)
    for a, g_val in enumerate(gammas):
        for b, b_val in enumerate(betas):
            grid[a, b] = ev.expectation([g_val], [b_val])
    return grid


def write_landscape_csv(path, g: Graph, gamma_range=LANDSCAPE_DEFAULT_RANGE,
                        beta_range=LANDSCAPE_DEFAULT_RANGE,
                        resolution: int = LANDSCAPE_DEFAULT_RESOLUTION) -> None:
    """Export the depth-1 landscape, one row per lattice point, gamma-major."""
    grid = landscape_grid(g, gamma_range, beta_range, resolution)
    gammas = np.linspace(gamma_range[0], gamma_range[1], resolution)
    betas = np.linspace(beta_range[0], beta_range[1], resolution)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("gamma,beta,expectation\n")
        for a in range(resolution):
            for b in range(resolution):
                f.write(f"{float(gammas[a])!r},{float(betas[b])!r},{float(grid[a, b])!r}\n")
