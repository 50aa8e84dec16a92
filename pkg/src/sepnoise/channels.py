"""Canonical noise channels as rate matrices in the Pauli-string basis.

Conventions:

* dephasing rate ``gamma`` enters as ``gamma/2 [Z rho Z - rho]``, so the
  rate-matrix entry is ``gamma/2`` (not ``gamma``);
* damping is the ``sigma_+ rho sigma_-`` channel with
  ``sigma_+ = (X + iY)/2``, expanded over the Pauli strings, which puts the
  block ``gamma/4 [[1, -i], [i, 1]]`` on the (X, Y) indices of the target
  qubit;
* depolarizing with rate ``alpha`` is ``alpha`` times the identity on the
  whole rate space (the global depolarizing channel).
"""

from __future__ import annotations

import numpy as np

from .basis import pauli_index


def _embed(v: dict[int, complex], size: int) -> np.ndarray:
    vec = np.zeros(size, dtype=np.complex128)
    for idx, amp in v.items():
        vec[idx] = amp
    return vec


def _single_letter(letter: str, qubit: int, qubits: int) -> int:
    name = "".join(letter if i == qubit else "I" for i in range(qubits))
    return pauli_index(name)


def dephasing(gamma: float, qubits: int = 1, qubit: int = 0) -> np.ndarray:
    """Rate matrix of pure dephasing on one qubit of a register."""
    size = 4**qubits - 1
    out = np.zeros((size, size), dtype=np.complex128)
    z = _single_letter("Z", qubit, qubits)
    out[z, z] = gamma / 2.0
    return out


def damping(gamma: float, qubits: int = 1, qubit: int = 0) -> np.ndarray:
    """Rate matrix of amplitude damping toward |0> on one qubit."""
    size = 4**qubits - 1
    v = _embed(
        {
            _single_letter("X", qubit, qubits): 0.5,
            _single_letter("Y", qubit, qubits): 0.5j,
        },
        size,
    )
    return gamma * np.outer(v, v.conj())


def depolarizing(alpha: float, dim: int) -> np.ndarray:
    """Rate matrix proportional to the identity on the full rate space."""
    return alpha * np.eye(dim * dim - 1, dtype=np.complex128)
