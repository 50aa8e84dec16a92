"""Compile multi-operation gates into an ideal unitary plus one noise channel.

A gate is an ordered list of elementary operations (each a Hamiltonian
schedule running against a rate-matrix schedule) with optional idling after
each one.  Idle windows are materialized as zero-Hamiltonian operations
carrying the hardware noise, so a single code path handles both.

Two compilation methods are provided.  ``compile_per_op`` separates the
noise of every segment, commutes each result left past all later coherent
maps, and sums with duration weights (lowest-order recombination of the
exponentials).  ``compile_monolithic`` treats the whole gate as one
piecewise generator and separates it in a single pass.  The two agree up to
integration error; the per-op route additionally exposes the per-segment
commuted rate matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels as kernels
from .basis import OperatorBasis, structure_tensor
from .lindblad import (
    LindbladGenerator,
    default_steps,
    evolve,
    validate_density,
)
from .schedule import HamiltonianSchedule, RateSchedule, zero_hamiltonian
from .separation import separated_ode
from .superops import (
    RateMatrix,
    dissipator_superop,
    omega_samples,
    propagator_prefix_for,
    schrodinger_u,
    unvec,
    vec,
)


@dataclass(frozen=True)
class GateOp:
    """One elementary operation; ``noise=None`` means the hardware noise."""

    schedule: HamiltonianSchedule
    noise: RateSchedule | None = None

    @property
    def duration(self) -> float:
        return self.schedule.t_op


@dataclass(frozen=True)
class GateSpec:
    """Ordered operations, per-op idle windows, and the hardware noise."""

    ops: tuple[GateOp, ...]
    idles: tuple[float, ...]
    hardware_noise: RateSchedule
    basis: OperatorBasis

    def __post_init__(self):
        if not self.ops:
            raise ValueError("a gate needs at least one operation")
        if len(self.idles) != len(self.ops):
            raise ValueError("one idle duration per operation required")
        if any(idle < 0 for idle in self.idles):
            raise ValueError("idle durations must be non-negative")
        n = self.basis.size
        for op in self.ops:
            if op.duration <= 0:
                raise ValueError("operation durations must be positive")
            if op.schedule.nbasis != n:
                raise ValueError("operation schedule size differs from basis")
            if op.noise is not None and op.noise.size != n:
                raise ValueError("operation noise size differs from basis")
        if self.hardware_noise.size != n:
            raise ValueError("hardware noise size differs from basis")

    def segments(self) -> list[tuple[HamiltonianSchedule, RateSchedule]]:
        """Operations with idles expanded to explicit zero-Hamiltonian ops."""
        out = []
        n = self.basis.size
        for op, idle in zip(self.ops, self.idles):
            noise = op.noise if op.noise is not None else self.hardware_noise
            out.append((op.schedule, noise))
            if idle > 0:
                out.append((zero_hamiltonian(n, idle), self.hardware_noise))
        return out

    @property
    def t_g(self) -> float:
        return sum(op.duration for op in self.ops) + sum(self.idles)


@dataclass(frozen=True)
class GateNoise:
    """Compiled gate: total duration, noise rate matrix, ideal unitary."""

    t_g: float
    gamma_n: RateMatrix
    u: np.ndarray
    method: str
    breakdown: tuple[tuple[float, RateMatrix], ...]

    @property
    def strength(self) -> float:
        return self.gamma_n.strength


@dataclass(frozen=True)
class FidelityReport:
    trace_distance: float
    tol: float
    passed: bool
    t_g: float


def _segment_propagators(spec: GateSpec, steps: int):
    tensor = structure_tensor(spec.basis)
    ms = []
    for schedule, _ in spec.segments():
        ms.append(propagator_prefix_for(schedule, tensor, schedule.t_op, steps)[-1])
    return ms


def compile_per_op(spec: GateSpec, steps: int = 4096) -> GateNoise:
    """Separate each segment, commute left past later ops, sum with weights."""
    segments = spec.segments()
    t_g = spec.t_g
    seps = []
    for schedule, noise in segments:
        gen = LindbladGenerator(schedule=schedule, noise=noise, basis=spec.basis)
        seps.append(separated_ode(gen, schedule.t_op, steps=steps))
    ms = _segment_propagators(spec, steps)
    n = spec.basis.size
    suffix = np.eye(n, dtype=np.complex128)
    commuted: list[RateMatrix] = [None] * len(segments)
    for i in range(len(segments) - 1, -1, -1):
        commuted[i] = RateMatrix(
            gamma=suffix @ seps[i].gamma_s.gamma @ suffix.conj().T,
            basis_ref=spec.basis.label,
        )
        suffix = suffix @ ms[i]
    gamma_n = sum(
        (segments[i][0].t_op / t_g) * commuted[i].gamma
        for i in range(len(segments))
    )
    breakdown = tuple(
        (segments[i][0].t_op, commuted[i]) for i in range(len(segments))
    )
    return GateNoise(
        t_g=t_g,
        gamma_n=RateMatrix(gamma=gamma_n, basis_ref=spec.basis.label),
        u=ideal_unitary(spec, steps=steps),
        method="per_op",
        breakdown=breakdown,
    )


def compile_monolithic(spec: GateSpec, steps: int = 4096) -> GateNoise:
    """Separate the whole gate as one piecewise generator.

    The Q equation and the coherent propagator are integrated segment by
    segment (continuing across boundaries, which always fall on grid
    nodes), and the coherent part is checked to factor into the product of
    the per-op propagators lifted from the Schrodinger unitary.
    """
    segments = spec.segments()
    t_g = spec.t_g
    tensor = structure_tensor(spec.basis)
    n = spec.basis.size
    q = np.zeros((n, n), dtype=np.complex128)
    m_total = np.eye(n, dtype=np.complex128)
    for schedule, noise in segments:
        # Q obeys the same equation across the whole gate; segment-local
        # integration with Q continued through boundaries is exact because
        # boundaries always land on grid nodes.
        stage_times = np.linspace(0.0, schedule.t_op, 2 * steps + 1)
        if schedule.is_constant:
            oms, so = omega_samples(schedule, stage_times[:1], tensor), 0
        else:
            oms, so = omega_samples(schedule, stage_times, tensor), 1
        if noise.is_constant:
            gms, sg = noise.sample(stage_times[:1]), 0
        else:
            gms, sg = noise.sample(stage_times), 1
        traj = kernels.rk4_q(
            q,
            np.ascontiguousarray(oms),
            so,
            np.ascontiguousarray(gms),
            sg,
            schedule.t_op / steps,
            steps,
        )
        q = traj[-1]
        m_total = (
            propagator_prefix_for(schedule, tensor, schedule.t_op, steps)[-1]
            @ m_total
        )
    # Q already carries the outer conjugation by the accumulated propagator
    gamma_s = q / t_g
    gamma_s = 0.5 * (gamma_s + gamma_s.conj().T)
    gamma_n = RateMatrix(gamma=gamma_s, basis_ref=spec.basis.label)
    u = ideal_unitary(spec, steps=steps)
    _check_adjoint_consistency(u, m_total, spec.basis)
    return GateNoise(
        t_g=t_g, gamma_n=gamma_n, u=u, method="monolithic", breakdown=()
    )


def _check_adjoint_consistency(u, m_total, basis, tol=1e-8):
    # the coherent part must be the adjoint lift of the Schrodinger unitary:
    # M_mn = Tr[A_m^dag U A_n U^dag] / dim
    ops = basis.ops
    conj = np.einsum("ij,njk,lk->nil", u, ops, u.conj())
    m_ref = np.einsum("mij,nij->mn", ops.conj(), conj) / basis.dim
    if np.abs(m_ref - m_total).max() > tol:
        raise ValueError("coherent part does not factor through the unitary")


def ideal_unitary(spec: GateSpec, steps: int = 4096) -> np.ndarray:
    """Ordered product of the per-op Schrodinger unitaries (idles drop out)."""
    u = np.eye(spec.basis.dim, dtype=np.complex128)
    for schedule, _ in spec.segments():
        u = schrodinger_u(schedule, spec.basis, schedule.t_op, steps) @ u
    return u


def trace_distance(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Half the trace norm of the difference of two Hermitian matrices."""
    diff = np.asarray(rho_a) - np.asarray(rho_b)
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def gate_fidelity_check(
    spec: GateSpec,
    rho0: np.ndarray,
    tol: float,
    steps: int | None = None,
    compile_steps: int = 4096,
) -> FidelityReport:
    """Trace distance between the true noisy gate and its compiled model.

    The reference state runs through the full generator segment by segment
    (the oracle integrator); the model applies the ideal unitary followed
    by ``exp(t_G L_N)`` built from the compiled rate matrix.
    """
    rho0 = validate_density(rho0)
    rho_exact = rho0
    for schedule, noise in spec.segments():
        gen = LindbladGenerator(schedule=schedule, noise=noise, basis=spec.basis)
        seg_steps = steps
        if seg_steps is None:
            seg_steps = default_steps(
                schedule.t_op, schedule.t_op, gen.strength_max(schedule.t_op)
            )
        rho_exact = evolve(gen, rho_exact, schedule.t_op, steps=seg_steps)
    compiled = compile_per_op(spec, steps=compile_steps)
    rho_ideal = compiled.u @ rho0 @ compiled.u.conj().T
    noise_map = scipy.linalg.expm(
        compiled.t_g * dissipator_superop(compiled.gamma_n, spec.basis.ops)
    )
    rho_model = unvec(noise_map @ vec(rho_ideal))
    dist = trace_distance(rho_exact, rho_model)
    return FidelityReport(
        trace_distance=dist, tol=tol, passed=dist <= tol, t_g=spec.t_g
    )
