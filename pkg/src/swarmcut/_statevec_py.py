"""Pure-NumPy statevector kernels (fallback when the compiled core is absent)."""

import numpy as np


def apply_phase_table(amps: np.ndarray, values: np.ndarray, table: np.ndarray) -> None:
    """In place: amps[z] *= table[values[z]]."""
    amps *= table[values]


def apply_mixer(amps: np.ndarray, n: int, beta: float) -> None:
    """In place: apply exp(-i*beta*X) to every qubit (bit q of the state index
    is qubit q)."""
    c = np.cos(beta)
    ms = -1j * np.sin(beta)
    for q in range(n):
        view = amps.reshape(-1, 2, 1 << q)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = c * a + ms * b
        view[:, 1, :] = ms * a + c * b


def expectation_value(amps: np.ndarray, values: np.ndarray) -> float:
    """Sum over basis states of |amplitude|^2 times the diagonal value."""
    probs = amps.real ** 2 + amps.imag ** 2
    return float(probs @ values)
