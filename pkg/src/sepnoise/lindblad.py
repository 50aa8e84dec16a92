"""Exact master-equation evolution by fixed-step RK4.

This is the oracle the rest of the package is judged against, so the
dissipator is applied literally to the full density matrix,

    sum_nm Gamma_nm (A_n rho A_m^dag - {A_m^dag A_n, rho} / 2),

rather than through any coefficient-vector or superoperator representation.
Trace, Hermiticity and positivity are not repaired during integration;
drift beyond tolerance is a bug, and the tests assert it stays small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .basis import OperatorBasis
from .schedule import HamiltonianSchedule, RateSchedule

DENSITY_TOL = 1e-9
POSITIVITY_TOL = 1e-8
STEP_DENSITY = 2**14  # steps per unit 1/strength or per t_op, whichever finer


def validate_density(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a density matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > DENSITY_TOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > DENSITY_TOL:
        raise ValueError("density matrix must have unit trace")
    if np.linalg.eigvalsh(rho).min() < -POSITIVITY_TOL:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


@dataclass(frozen=True)
class LindbladGenerator:
    """Coherent schedule plus a rate-matrix schedule over a common basis."""

    schedule: HamiltonianSchedule
    noise: RateSchedule | None
    basis: OperatorBasis

    def __post_init__(self):
        n = self.basis.size
        if self.schedule.nbasis != n:
            raise ValueError("schedule and basis sizes differ")
        if self.noise is not None and self.noise.size != n:
            raise ValueError("noise and basis sizes differ")

    def strength_max(self, t_op: float, samples: int = 257) -> float:
        """Largest sampled noise strength Tr[Gamma(t)] on [0, t_op]."""
        if self.noise is None:
            return 0.0
        times = np.linspace(0.0, t_op, samples)
        traces = np.einsum("sii->s", self.noise.sample(times)).real
        return float(traces.max())

    def strength_average(self, t_op: float, samples: int = 4097) -> float:
        """Time average of Tr[Gamma(t)] over [0, t_op] (composite Simpson)."""
        if self.noise is None:
            return 0.0
        if self.noise.is_constant:
            return float(np.trace(self.noise.value(0.0)).real)
        if samples % 2 == 0:
            samples += 1
        times = np.linspace(0.0, t_op, samples)
        traces = np.einsum("sii->s", self.noise.sample(times)).real
        weights = np.ones(samples)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        h = t_op / (samples - 1)
        return float((weights @ traces) * h / 3.0 / t_op)


def dissipator_apply(gamma, basis: OperatorBasis, rho: np.ndarray) -> np.ndarray:
    """Literal dissipator action on a density matrix; output is traceless."""
    g = gamma.gamma if hasattr(gamma, "gamma") else np.asarray(gamma)
    rho = np.asarray(rho, dtype=np.complex128)
    ops = basis.ops
    if g.shape != (basis.size, basis.size) or rho.shape != (basis.dim, basis.dim):
        raise ValueError("rate matrix, basis and state shapes do not agree")
    adag = ops.conj().transpose(0, 2, 1)
    c = np.tensordot(g, ops, axes=([0], [0]))  # c[m] = sum_n Gamma_nm A_n
    p = (adag @ c).sum(axis=0)
    return ((c @ rho) @ adag).sum(axis=0) - 0.5 * (p @ rho + rho @ p)


def default_steps(t: float, t_op: float, strength: float) -> int:
    """Step count at the default density for an evolution of duration ``t``."""
    rate = STEP_DENSITY * max(strength, 1.0 / t_op)
    return max(1, math.ceil(t * rate))


def _stage_times(t: float, steps: int) -> np.ndarray:
    return np.linspace(0.0, t, 2 * steps + 1)


def _hamiltonian_stages(gen: LindbladGenerator, times: np.ndarray):
    if gen.schedule.is_constant:
        coeffs = gen.schedule.sample_coeffs(times[:1])
        stride = 0
    else:
        coeffs = gen.schedule.sample_coeffs(times)
        stride = 1
    hs = np.einsum("sp,pij->sij", coeffs, gen.basis.ops)
    herm = np.abs(hs - hs.conj().transpose(0, 2, 1)).max()
    if herm > 1e-10:
        raise ValueError("Hamiltonian is not Hermitian at sampled times")
    return np.ascontiguousarray(hs), stride


def _noise_stages(gen: LindbladGenerator, times: np.ndarray):
    d = gen.basis.dim
    if gen.noise is None:
        cs = np.zeros((1, 0, d, d), dtype=np.complex128)
        ps = np.zeros((1, d, d), dtype=np.complex128)
        return cs, ps, 0
    if gen.noise.is_constant:
        gs = gen.noise.sample(times[:1])
        stride = 0
    else:
        gs = gen.noise.sample(times)
        stride = 1
    herm = np.abs(gs - gs.conj().transpose(0, 2, 1)).max()
    if herm > 1e-10:
        raise ValueError("rate matrix is not Hermitian at sampled times")
    ops = gen.basis.ops
    adag = ops.conj().transpose(0, 2, 1)
    cs = np.einsum("snm,nij->smij", gs, ops)
    ps = np.einsum("mji,smjk->sik", ops.conj(), cs)
    return np.ascontiguousarray(cs), np.ascontiguousarray(ps), stride


def evolve_trajectory(
    gen: LindbladGenerator,
    rho0: np.ndarray,
    t: float,
    steps: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(times, states) along the RK4 trajectory from 0 to ``t``."""
    rho0 = validate_density(rho0)
    if t < 0:
        raise ValueError("evolution time must be non-negative")
    if t == 0.0:
        return np.zeros(1), rho0[None, :, :].copy()
    if steps is None:
        steps = default_steps(t, gen.schedule.t_op, gen.strength_max(t))
    times = _stage_times(t, steps)
    hs, sh = _hamiltonian_stages(gen, times)
    cs, ps, sg = _noise_stages(gen, times)
    adag = np.ascontiguousarray(gen.basis.ops.conj().transpose(0, 2, 1))
    tau = t / steps
    traj = kernels.rk4_lindblad(rho0, hs, sh, cs, ps, sg, adag, tau, steps)
    return times[::2], traj


def evolve(
    gen: LindbladGenerator,
    rho0: np.ndarray,
    t: float,
    steps: int | None = None,
) -> np.ndarray:
    """Density matrix at time ``t`` under the full generator."""
    _, traj = evolve_trajectory(gen, rho0, t, steps)
    return traj[-1]


def coherent_evolve(
    schedule: HamiltonianSchedule,
    basis: OperatorBasis,
    rho0: np.ndarray,
    t: float,
    steps: int | None = None,
) -> np.ndarray:
    """Evolution under the Hamiltonian part alone (purity preserving)."""
    gen = LindbladGenerator(schedule=schedule, noise=None, basis=basis)
    return evolve(gen, rho0, t, steps)


def expectation(obs: np.ndarray, rho: np.ndarray) -> float:
    """Real expectation value Tr[obs rho] of a Hermitian observable."""
    obs = np.asarray(obs, dtype=np.complex128)
    if np.abs(obs - obs.conj().T).max() > 1e-10:
        raise ValueError("observable must be Hermitian")
    value = complex(np.trace(obs @ rho))
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation value has imaginary part {value.imag:g}")
    return float(value.real)
