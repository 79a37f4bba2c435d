# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels. Same contracts as _statevec_py."""

from libc.math cimport cos, sin


def apply_phase_table(double complex[::1] amps,
                      const long long[::1] values,
                      const double complex[::1] table):
    """In place: amps[z] *= table[values[z]]."""
    cdef Py_ssize_t z, size = amps.shape[0]
    for z in range(size):
        amps[z] = amps[z] * table[values[z]]


def apply_mixer(double complex[::1] amps, int n, double beta):
    """In place: apply exp(-i*beta*X) to every qubit (bit q of the state index
    is qubit q)."""
    cdef double c = cos(beta)
    cdef double s = sin(beta)
    cdef double complex ms = -1j * s
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t q, step, base, off
    cdef double complex a, b
    for q in range(n):
        step = 1 << q
        base = 0
        while base < size:
            for off in range(base, base + step):
                a = amps[off]
                b = amps[off + step]
                amps[off] = c * a + ms * b
                amps[off + step] = ms * a + c * b
            base += 2 * step


def expectation_value(const double complex[::1] amps,
                      const long long[::1] values):
    """Sum over basis states of |amplitude|^2 times the diagonal value."""
    cdef double total = 0.0
    cdef Py_ssize_t z, size = amps.shape[0]
    cdef double complex a
    for z in range(size):
        a = amps[z]
        total += (a.real * a.real + a.imag * a.imag) * values[z]
    return total
