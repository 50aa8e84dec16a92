"""Adjoint-representation superoperators and rate-matrix transforms.

The coherent part of a Lindblad generator acts on the traceless-operator
space through the Hermitian matrix ``Omega(t)`` (the adjoint action of the
Hamiltonian); its time-ordered exponential ``M(s)`` is the unitary that
transforms rate matrices when a dissipator is commuted past the coherent
evolution:

* commuted to the left:  ``Gamma -> M Gamma M^dag``
* commuted to the right: ``Gamma -> M^dag Gamma M``
* infinitesimally:       ``Gamma -> -i [Omega, Gamma]``

The module also builds explicit superoperator matrices on the vectorized
density-matrix space (column stacking), used as a brute-force check of the
commutation identity and by the validation suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels as kernels
from .basis import OperatorBasis, StructureTensor
from .schedule import HamiltonianSchedule

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-8


@dataclass(frozen=True)
class RateMatrix:
    """Hermitian coefficient matrix of a dissipator in a fixed basis."""

    gamma: np.ndarray
    basis_ref: str = "pauli"

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=np.complex128)
        if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
            raise ValueError(f"rate matrix must be square, got {gamma.shape}")
        if np.abs(gamma - gamma.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("rate matrix must be Hermitian")
        object.__setattr__(self, "gamma", gamma)

    @property
    def size(self) -> int:
        return self.gamma.shape[0]

    @property
    def strength(self) -> float:
        """Total noise strength Tr[Gamma] (basis independent)."""
        return float(np.trace(self.gamma).real)

    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.gamma)

    def is_physical(self, tol: float = 1e-9) -> bool:
        """True when the spectrum is non-negative up to ``tol * max(1, Tr)``."""
        return bool(
            self.spectrum().min() >= -tol * max(1.0, abs(self.strength))
        )


@dataclass(frozen=True)
class Propagator:
    """Unitary adjoint-representation propagator M(s)."""

    m: np.ndarray
    s: float

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.complex128)
        n = m.shape[0]
        if np.abs(m @ m.conj().T - np.eye(n)).max() > UNITARITY_TOL:
            raise ValueError("propagator drifted off the unitary manifold")
        object.__setattr__(self, "m", m)


def omega_of(
    schedule: HamiltonianSchedule, t: float, tensor: StructureTensor
) -> np.ndarray:
    """Adjoint-action matrix ``Omega_mn(t) = -i sum_p H_p(t) g_pmn``."""
    if not 0.0 <= t <= schedule.t_op:
        raise ValueError(f"t={t} outside the schedule domain [0, {schedule.t_op}]")
    om = omega_samples(schedule, np.array([float(t)]), tensor)[0]
    if np.abs(om - om.conj().T).max() > HERMITICITY_TOL:
        raise ValueError("Omega is not Hermitian; check basis and coefficients")
    return om


def omega_samples(
    schedule: HamiltonianSchedule, times: np.ndarray, tensor: StructureTensor
) -> np.ndarray:
    """Stacked ``Omega(t)`` on a grid of times, shape ``(len(times), N, N)``."""
    coeffs = schedule.sample_coeffs(times)
    return np.einsum("sp,pmn->smn", coeffs, tensor.omega_p)


def _midpoint_times(s: float, steps: int) -> np.ndarray:
    tau = s / steps
    return (np.arange(steps) + 0.5) * tau


def propagator_prefix_for(
    schedule: HamiltonianSchedule,
    tensor: StructureTensor,
    s: float,
    steps: int,
) -> np.ndarray:
    """All node values ``M(k * s/steps)`` for ``k = 0..steps``.

    Ordered product of midpoint-sampled per-step exponentials; exact for a
    time-independent schedule.
    """
    tau = s / steps
    if schedule.is_constant:
        om = omega_samples(schedule, np.array([0.0]), tensor)[0]
        return kernels.propagator_prefix_constant(om, tau, steps)
    oms = omega_samples(schedule, _midpoint_times(s, steps), tensor)
    return kernels.propagator_prefix(oms, tau)


def propagate_m(
    schedule: HamiltonianSchedule,
    tensor: StructureTensor,
    s: float,
    steps: int = 4096,
) -> Propagator:
    """Time-ordered exponential ``M(s)`` of ``-i Omega`` up to time ``s``."""
    if not 0.0 <= s <= schedule.t_op:
        raise ValueError(f"s={s} outside the schedule domain [0, {schedule.t_op}]")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if s == 0.0:
        n = len(tensor.omega_p)
        return Propagator(m=np.eye(n, dtype=np.complex128), s=0.0)
    prefix = propagator_prefix_for(schedule, tensor, s, steps)
    return Propagator(m=prefix[-1], s=float(s))


def schrodinger_prefix(
    schedule: HamiltonianSchedule,
    basis: OperatorBasis,
    s: float,
    steps: int = 4096,
) -> np.ndarray:
    """Hilbert-space unitaries ``U(k * s/steps)`` for ``k = 0..steps``."""
    tau = s / steps
    if schedule.is_constant:
        h = np.einsum("p,pij->ij", schedule.coeff_vector(0.0), basis.ops)
        return kernels.propagator_prefix_constant(h, tau, steps)
    coeffs = schedule.sample_coeffs(_midpoint_times(s, steps))
    hs = np.einsum("sp,pij->sij", coeffs, basis.ops)
    return kernels.propagator_prefix(np.ascontiguousarray(hs), tau)


def schrodinger_u(
    schedule: HamiltonianSchedule,
    basis: OperatorBasis,
    s: float,
    steps: int = 4096,
) -> np.ndarray:
    """Hilbert-space unitary U(s) from the same ordered-product integrator."""
    if not 0.0 <= s <= schedule.t_op:
        raise ValueError(f"s={s} outside the schedule domain [0, {schedule.t_op}]")
    if s == 0.0:
        return np.eye(basis.dim, dtype=np.complex128)
    return schrodinger_prefix(schedule, basis, s, steps)[-1]


def _as_gamma(gamma) -> np.ndarray:
    return gamma.gamma if isinstance(gamma, RateMatrix) else np.asarray(gamma)


def commute_left(gamma: RateMatrix, m: Propagator) -> RateMatrix:
    """Rate matrix after commuting the dissipator left past the coherent map."""
    g = _as_gamma(gamma)
    if g.shape[0] != m.m.shape[0]:
        raise ValueError("rate matrix and propagator dimensions differ")
    ref = gamma.basis_ref if isinstance(gamma, RateMatrix) else "custom"
    return RateMatrix(gamma=m.m @ g @ m.m.conj().T, basis_ref=ref)


def commute_right(gamma: RateMatrix, m: Propagator) -> RateMatrix:
    """Inverse transform of :func:`commute_left`."""
    g = _as_gamma(gamma)
    if g.shape[0] != m.m.shape[0]:
        raise ValueError("rate matrix and propagator dimensions differ")
    ref = gamma.basis_ref if isinstance(gamma, RateMatrix) else "custom"
    return RateMatrix(gamma=m.m.conj().T @ g @ m.m, basis_ref=ref)


def commutator_rate(omega: np.ndarray, gamma: RateMatrix) -> RateMatrix:
    """Rate matrix ``-i [Omega, Gamma]`` of the generator commutator.

    Hermitian by construction but in general not positive semi-definite.
    """
    g = _as_gamma(gamma)
    omega = np.asarray(omega)
    if g.shape != omega.shape:
        raise ValueError("rate matrix and Omega dimensions differ")
    ref = gamma.basis_ref if isinstance(gamma, RateMatrix) else "custom"
    return RateMatrix(gamma=-1.0j * (omega @ g - g @ omega), basis_ref=ref)


# -- explicit superoperator matrices on the vectorized density space --------
#
# Column-stacking convention: vec(A X B) = (B^T kron A) vec(X).


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).flatten(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    n = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape((n, n), order="F")


def hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    """Matrix of ``rho -> -i [h, rho]`` on the vectorized space."""
    d = h.shape[0]
    eye = np.eye(d)
    return -1.0j * (np.kron(eye, h) - np.kron(h.T, eye))


def dissipator_superop(gamma, ops: np.ndarray) -> np.ndarray:
    """Matrix of the dissipator with rate matrix ``gamma`` over ``ops``."""
    g = _as_gamma(gamma)
    d = ops.shape[1]
    jump = np.einsum("nm,mab,ncd->acbd", g, ops.conj(), ops).reshape(d * d, d * d)
    p = np.einsum("nm,mba,nbc->ac", g, ops.conj(), ops)
    eye = np.eye(d)
    return jump - 0.5 * (np.kron(eye, p) + np.kron(p.T, eye))


def conjugation_superop(u: np.ndarray) -> np.ndarray:
    """Matrix of ``rho -> u rho u^dag`` on the vectorized space."""
    return np.kron(u.conj(), u)


def liouvillian_superop(h: np.ndarray, gamma, ops: np.ndarray) -> np.ndarray:
    return hamiltonian_superop(h) + dissipator_superop(gamma, ops)


def commute_identity_residual(
    schedule: HamiltonianSchedule,
    gamma: RateMatrix,
    basis: OperatorBasis,
    tensor: StructureTensor | None = None,
    steps: int = 4096,
) -> float:
    """Brute-force residual of the left-commutation identity.

    Builds the coherent map and both dissipator exponentials as explicit
    superoperator matrices and returns the max elementwise deviation between
    "coherent after noise" and "transformed noise after coherent".  The
    dissipator here is dimensionless: the evolution time is absorbed into
    the rate matrix.
    """
    from .basis import structure_tensor as _structure_tensor

    if tensor is None:
        tensor = _structure_tensor(basis)
    u = schrodinger_u(schedule, basis, schedule.t_op, steps)
    m = propagate_m(schedule, tensor, schedule.t_op, steps)
    phi = conjugation_superop(u)
    lhs = phi @ scipy.linalg.expm(dissipator_superop(gamma, basis.ops))
    gamma_left = commute_left(gamma, m)
    rhs = scipy.linalg.expm(dissipator_superop(gamma_left, basis.ops)) @ phi
    return float(np.abs(lhs - rhs).max())


def superop_commute_identity_check(
    schedule: HamiltonianSchedule,
    gamma: RateMatrix,
    basis: OperatorBasis,
    tol: float,
    steps: int = 4096,
) -> tuple[bool, float]:
    """(passed, residual) wrapper around :func:`commute_identity_residual`."""
    residual = commute_identity_residual(schedule, gamma, basis, steps=steps)
    return residual <= tol, residual
