"""Time-dependent coefficient schedules for Hamiltonians and rate matrices.

A coefficient is one of

* a plain ``float`` (kind ``constant``),
* a parsed expression AST over ``t`` (kind ``expression``),
* a ``SampledCoeff`` holding values on a time grid, evaluated by linear
  interpolation (kind ``sampled``).

Schedules are immutable and evaluate either at a scalar time or, vectorized,
on an array of times; integrators always sample on their own step grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as _expr


@dataclass(frozen=True)
class SampledCoeff:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise ValueError("need matching 1-d grids with at least two points")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


Coeff = float | _expr.Node | SampledCoeff


def _coeff_kind(c: Coeff) -> str:
    if isinstance(c, (int, float, np.floating, np.integer)):
        return "constant"
    if isinstance(c, SampledCoeff):
        return "sampled"
    return "expression"


def _coeff_at(c: Coeff, times: np.ndarray) -> np.ndarray:
    """Evaluate one coefficient on an array of times."""
    if isinstance(c, (int, float, np.floating, np.integer)):
        return np.full(times.shape, float(c))
    if isinstance(c, SampledCoeff):
        return np.interp(times, c.times, c.values)
    out = _expr.evaluate(c, times)
    return np.broadcast_to(np.asarray(out, dtype=np.float64), times.shape).copy()


def _combined_kind(coeffs) -> str:
    kinds = {_coeff_kind(c) for c in coeffs}
    if not kinds or kinds == {"constant"}:
        return "constant"
    if "sampled" in kinds:
        return "sampled"
    return "expression"


@dataclass(frozen=True)
class HamiltonianSchedule:
    """Coefficient vector ``H_p(t)`` over a basis, with duration ``t_op``.

    ``terms`` maps basis positions to coefficients; unlisted positions are
    zero.  The Hamiltonian itself is ``H(t) = sum_p H_p(t) A_p`` and is
    Hermitian whenever the basis is Hermitian and the coefficients real.
    """

    nbasis: int
    terms: tuple[tuple[int, Coeff], ...]
    t_op: float

    def __post_init__(self):
        if self.t_op <= 0:
            raise ValueError(f"t_op must be positive, got {self.t_op}")
        for idx, _ in self.terms:
            if not 0 <= idx < self.nbasis:
                raise ValueError(f"term index {idx} out of range for {self.nbasis}")

    @property
    def kind(self) -> str:
        return _combined_kind([c for _, c in self.terms])

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def coeff_vector(self, t: float) -> np.ndarray:
        return self.sample_coeffs(np.array([float(t)]))[0]

    def sample_coeffs(self, times: np.ndarray) -> np.ndarray:
        """Coefficient vectors on a grid; shape ``(len(times), nbasis)``."""
        times = np.asarray(times, dtype=np.float64)
        out = np.zeros((times.size, self.nbasis))
        for idx, c in self.terms:
            out[:, idx] += _coeff_at(c, times)
        return out


def zero_hamiltonian(nbasis: int, t_op: float) -> HamiltonianSchedule:
    return HamiltonianSchedule(nbasis=nbasis, terms=(), t_op=t_op)


@dataclass(frozen=True)
class RateSchedule:
    """Rate matrix ``Gamma(t)`` as a sum of coefficient * constant matrix terms."""

    terms: tuple[tuple[Coeff, np.ndarray], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a rate schedule needs at least one term")
        size = None
        frozen = []
        for coeff, mat in self.terms:
            mat = np.asarray(mat, dtype=np.complex128)
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise ValueError("rate-matrix terms must be square")
            if size is None:
                size = mat.shape[0]
            elif mat.shape[0] != size:
                raise ValueError("all rate-matrix terms must share a shape")
            if np.abs(mat - mat.conj().T).max() > 1e-10:
                raise ValueError("rate-matrix terms must be Hermitian")
            frozen.append((coeff, mat))
        object.__setattr__(self, "terms", tuple(frozen))

    @staticmethod
    def constant(matrix: np.ndarray) -> "RateSchedule":
        return RateSchedule(terms=((1.0, matrix),))

    @property
    def size(self) -> int:
        return self.terms[0][1].shape[0]

    @property
    def kind(self) -> str:
        return _combined_kind([c for c, _ in self.terms])

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def value(self, t: float) -> np.ndarray:
        return self.sample(np.array([float(t)]))[0]

    def sample(self, times: np.ndarray) -> np.ndarray:
        """Rate matrices on a grid; shape ``(len(times), size, size)``."""
        times = np.asarray(times, dtype=np.float64)
        out = np.zeros((times.size, self.size, self.size), dtype=np.complex128)
        for coeff, mat in self.terms:
            out += _coeff_at(coeff, times)[:, None, None] * mat
        return out

    def scaled(self, factor: float) -> "RateSchedule":
        return RateSchedule(
            terms=tuple((c, factor * m) for c, m in self.terms)
        )
