"""QAOA MaxCut simulation and swarm-based angle optimization."""

from ._statevec import BACKEND
from .graphs import (
    CapacityError,
    CutResult,
    Graph,
    GraphParseError,
    GraphValidationError,
    generate_er,
    generate_ws,
    max_cut_bruteforce,
    one_exchange_cut,
    read_graph,
    write_graph,
    ws_k_for,
)
from .optimizer import OptimizeResult, SwarmConfig, adam_fipso_optimize, approx_ratio
from .simulator import QaoaParams, landscape_grid, qaoa_expectation

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapacityError",
    "CutResult",
    "Graph",
    "GraphParseError",
    "GraphValidationError",
    "OptimizeResult",
    "QaoaParams",
    "SwarmConfig",
    "adam_fipso_optimize",
    "approx_ratio",
    "generate_er",
    "generate_ws",
    "landscape_grid",
    "max_cut_bruteforce",
    "one_exchange_cut",
    "qaoa_expectation",
    "read_graph",
    "write_graph",
    "ws_k_for",
]
