"""Executable validation suite: closed forms, scaling laws, and the
time-dependent drive benchmark.

Every quantitative artifact the library is built around appears here as a
case with an explicit tolerance: the single-qubit closed forms for
dephasing/damping/depolarizing separation, the steady state and residual
modes, the Choi spectrum of the noise-shaping map, the two-rotation gate
example, the first-order error scaling, and the oscillating-dephasing drive
benchmark (a rotating XY drive with the dephasing axis sweeping between Y
and Z, compared against the exact integrator).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import channels
from .basis import pauli_basis, structure_tensor
from .gates import GateOp, GateSpec, compile_per_op
from .lindblad import LindbladGenerator, default_steps, evolve_trajectory
from .schedule import HamiltonianSchedule, RateSchedule
from .separation import (
    choi_of_transform,
    global_depolarizing_lambda,
    q_trajectory,
    residual_components,
    separated_ode,
    separated_spectral,
    steady_state,
    xi_spectrum,
)
from .superops import (
    RateMatrix,
    commute_left,
    conjugation_superop,
    dissipator_superop,
    hamiltonian_superop,
    omega_of,
    propagate_m,
    schrodinger_prefix,
    schrodinger_u,
    unvec,
    vec,
)
from .expr import parse_expr

# Calibration of the drive benchmark: measured max deviation of <X> at
# gamma = 0.05 (t_max = 4/gamma, 161 grid points, default steps).  The
# weak-noise threshold is three times this value.  Measured deviations for
# this family grow roughly like gamma^0.8 between 0.05 and 0.25 (ratio
# ~3.3, stable under grid refinement and window length), so the gamma=0.25
# run sits ~9% ABOVE the 3x threshold; the corresponding case is expected
# to fail and is kept as stated rather than loosened.
CALIBRATION_GAMMA = 0.05
CALIBRATION_DEVIATION = 1.7265143421472812e-3
WEAK_NOISE_THRESHOLD = 3.0 * CALIBRATION_DEVIATION


@dataclass
class ValidationCase:
    case_id: str
    computed: float
    reference: float
    tol: float
    passed: bool
    provenance: str
    runtime_s: float


@dataclass
class ValidationReport:
    cases: list[ValidationCase] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def extend(self, other: "ValidationReport") -> None:
        self.cases.extend(other.cases)

    def summary_lines(self) -> list[str]:
        lines = [
            f"[{'PASS' if c.passed else 'FAIL'}] {c.case_id}: "
            f"value {c.computed:.6g} vs {c.reference:.6g} "
            f"(tol {c.tol:.1e}, {c.runtime_s:.3f} s)"
            for c in self.cases
        ]
        failures = sum(not c.passed for c in self.cases)
        total_time = sum(c.runtime_s for c in self.cases)
        lines.append(
            f"Tests run: {len(self.cases)}, Failures: {failures}, "
            f"Time elapsed: {total_time:.2f} s"
        )
        return lines

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "cases": [
                {
                    "id": c.case_id,
                    "computed": c.computed,
                    "reference": c.reference,
                    "tol": c.tol,
                    "passed": c.passed,
                    "provenance": c.provenance,
                    "runtime_s": c.runtime_s,
                }
                for c in self.cases
            ],
        }


def _case(report, case_id, computed, reference, tol, provenance, t0, cmp="abs"):
    if cmp == "abs":
        passed = abs(computed - reference) <= tol
    else:  # "le": computed must not exceed reference + tol
        passed = computed <= reference + tol
    report.cases.append(
        ValidationCase(
            case_id=case_id,
            computed=float(computed),
            reference=float(reference),
            tol=tol,
            passed=bool(passed),
            provenance=provenance,
            runtime_s=time.time() - t0,
        )
    )


# -- closed-form references (single qubit, H = -J X) ------------------------


def dephasing_separated_reference(gamma: float, theta: float) -> np.ndarray:
    s, s2 = np.sin(theta), np.sin(2 * theta)
    return (gamma / (4 * theta)) * np.array(
        [
            [0, 0, 0],
            [0, theta - 0.5 * s2, s**2],
            [0, s**2, theta + 0.5 * s2],
        ]
    )


def dephasing_rates_reference(gamma: float, theta: float) -> np.ndarray:
    return np.array(
        [
            0.0,
            gamma / 4 * (1 - np.sin(theta) / theta),
            gamma / 4 * (1 + np.sin(theta) / theta),
        ]
    )


def damping_separated_reference(gamma: float, theta: float) -> np.ndarray:
    s, c, s2 = np.sin(theta), np.cos(theta), np.sin(2 * theta)
    return (gamma / (8 * theta)) * np.array(
        [
            [2 * theta, -2j * s, -2j * (c - 1)],
            [2j * s, theta + 0.5 * s2, -(s**2)],
            [2j * (c - 1), -(s**2), theta - 0.5 * s2],
        ]
    )


def damping_rates_reference(gamma: float, theta: float) -> np.ndarray:
    s, c = np.sin(theta), np.cos(theta)
    root = np.sqrt((theta - s) ** 2 + 32 * (1 - c))
    return np.array(
        [
            gamma / 8 * (1 - s / theta),
            3 * gamma / 16 + gamma / (16 * theta) * (s - root),
            3 * gamma / 16 + gamma / (16 * theta) * (s + root),
        ]
    )


def choi_rates_reference(theta: float) -> np.ndarray:
    s = np.sin(theta)
    root = np.sqrt(2 * np.cos(theta) + 34) * np.sin(theta / 2)
    return np.array(
        [
            1 - s / theta,
            1 + (s - root) / (2 * theta),
            1 + (s + root) / (2 * theta),
        ]
    )


def gate_noise_reference(gamma: float) -> np.ndarray:
    pi = np.pi
    return (gamma / 2) * np.array(
        [
            [1 / 12, -1j / (3 * pi), -1 / (6 * pi)],
            [1j / (3 * pi), 1 / 2, -1j * (1 + pi) / (3 * pi)],
            [-1 / (6 * pi), 1j * (1 + pi) / (3 * pi), 5 / 12],
        ]
    )


def _x_drive(j: float, t_op: float) -> HamiltonianSchedule:
    return HamiltonianSchedule(nbasis=3, terms=((0, -j),), t_op=t_op)


def hadamard_gate_spec(gamma: float, idle_units: float = 0.0) -> GateSpec:
    """Two-rotation toy gate: a Z rotation (angle pi, twice the duration)
    followed by a Y rotation (angle pi/2), under damping noise."""
    basis = pauli_basis(1)
    t_z, t_y = 2.0, 1.0
    op_z = GateOp(
        schedule=HamiltonianSchedule(
            nbasis=3, terms=((2, -np.pi / 2 / t_z),), t_op=t_z
        )
    )
    op_y = GateOp(
        schedule=HamiltonianSchedule(
            nbasis=3, terms=((1, np.pi / 4 / t_y),), t_op=t_y
        )
    )
    return GateSpec(
        ops=(op_z, op_y),
        idles=(0.0, idle_units * t_y),
        hardware_noise=RateSchedule.constant(channels.damping(gamma)),
        basis=basis,
    )


# -- the time-dependent drive benchmark --------------------------------------


def rotating_drive_generator(gamma: float, t_max: float) -> LindbladGenerator:
    """Rotating XY drive with the dephasing axis oscillating between Y and Z."""
    basis = pauli_basis(1)
    schedule = HamiltonianSchedule(
        nbasis=3,
        terms=((0, parse_expr("cos(t)")), (1, parse_expr("sin(t)"))),
        t_op=t_max,
    )
    y_term = np.zeros((3, 3), dtype=np.complex128)
    y_term[1, 1] = gamma
    z_term = np.zeros((3, 3), dtype=np.complex128)
    z_term[2, 2] = gamma
    noise = RateSchedule(
        terms=(
            (parse_expr("0.5*sin(sqrt(2)*t)^2"), y_term),
            (parse_expr("0.5*cos(sqrt(2)*t)^2"), z_term),
        )
    )
    return LindbladGenerator(schedule=schedule, noise=noise, basis=basis)


def separated_comparison_curves(
    gen: LindbladGenerator,
    rho0: np.ndarray,
    obs_ops,
    t_max: float,
    grid_points: int,
    steps: int | None = None,
) -> dict:
    """Exact vs separated observable curves on a uniform time grid.

    For every grid time t the separated side applies the coherent map up to
    t followed by exp(t L_S(t)), with the separated rate matrix recomputed
    for that window; the exact side integrates the full generator once.
    """
    if steps is None:
        steps = default_steps(t_max, t_max, gen.strength_max(t_max))
    chunks = grid_points - 1
    steps = int(np.ceil(steps / chunks)) * chunks
    stride = steps // chunks

    times, traj = evolve_trajectory(gen, rho0, t_max, steps=steps)
    exact = np.stack(
        [np.einsum("ij,kji->k", op, traj).real[::stride] for op in obs_ops]
    )

    _, q_nodes = q_trajectory(gen, t_max, steps=steps)
    u_nodes = schrodinger_prefix(gen.schedule, gen.basis, t_max, steps=steps)
    grid_times = times[::stride]
    n_obs = len(obs_ops)
    separated = np.empty((n_obs, grid_points))
    for j, op in enumerate(obs_ops):
        separated[j, 0] = np.trace(op @ rho0).real
    ops = gen.basis.ops
    for k in range(1, grid_points):
        t = grid_times[k]
        node = k * stride
        gamma_s = q_nodes[node] / t
        gamma_s = 0.5 * (gamma_s + gamma_s.conj().T)
        u = u_nodes[node]
        rho_coh = u @ rho0 @ u.conj().T
        noise_map = scipy.linalg.expm(t * dissipator_superop(gamma_s, ops))
        rho_sep = unvec(noise_map @ vec(rho_coh))
        for j, op in enumerate(obs_ops):
            separated[j, k] = np.trace(op @ rho_sep).real
    return {"times": grid_times, "exact": exact, "separated": separated}


def rotating_drive_experiment(
    gamma: float,
    t_max: float | None = None,
    grid_points: int = 161,
    steps: int | None = None,
) -> dict:
    """Exact vs separated <X> curves from the fully polarized +Z state."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if t_max is None:
        t_max = 4.0 / gamma
    gen = rotating_drive_generator(gamma, t_max)
    rho0 = np.zeros((2, 2), dtype=np.complex128)
    rho0[0, 0] = 1.0
    curves = separated_comparison_curves(
        gen, rho0, [gen.basis.ops[0]], t_max, grid_points, steps=steps
    )
    exact = curves["exact"][0]
    separated = curves["separated"][0]
    return {
        "times": curves["times"],
        "exact": exact,
        "separated": separated,
        "max_deviation": float(np.abs(exact - separated).max()),
        "gamma": gamma,
        "t_max": t_max,
    }


def superop_residual(gen: LindbladGenerator, t_op: float, steps: int = 2048) -> float:
    """Max-norm of Phi - exp(t_op L_S) phi as explicit superoperator matrices."""
    basis = gen.basis
    ops = basis.ops
    if gen.schedule.is_constant and gen.noise.is_constant:
        h = np.einsum("p,pij->ij", gen.schedule.coeff_vector(0.0), ops)
        lh = hamiltonian_superop(h)
        ld = dissipator_superop(gen.noise.value(0.0), ops)
        phi_full = scipy.linalg.expm(t_op * (lh + ld))
    else:
        mids = (np.arange(steps) + 0.5) * (t_op / steps)
        coeffs = gen.schedule.sample_coeffs(mids)
        hs = np.einsum("sp,pij->sij", coeffs, ops)
        gammas = gen.noise.sample(mids)
        phi_full = np.eye(basis.dim**2, dtype=np.complex128)
        tau = t_op / steps
        for k in range(steps):
            gen_k = hamiltonian_superop(hs[k]) + dissipator_superop(gammas[k], ops)
            phi_full = scipy.linalg.expm(tau * gen_k) @ phi_full
    sep = separated_ode(gen, t_op, steps=steps)
    u = schrodinger_u(gen.schedule, basis, t_op, steps=steps)
    approx = scipy.linalg.expm(
        t_op * dissipator_superop(sep.gamma_s, ops)
    ) @ conjugation_superop(u)
    return float(np.abs(phi_full - approx).max())


def fit_strength_scaling(gens_by_strength, t_op: float, steps: int = 2048):
    """Fitted log-log slope of the superoperator residual vs noise strength."""
    strengths = []
    residuals = []
    for strength, gen in gens_by_strength:
        strengths.append(strength)
        residuals.append(superop_residual(gen, t_op, steps=steps))
    slope = np.polyfit(np.log(strengths), np.log(residuals), 1)[0]
    return float(slope), residuals


# -- suites ------------------------------------------------------------------


def closed_form_suite() -> ValidationReport:
    report = ValidationReport()
    basis = pauli_basis(1)
    tensor = structure_tensor(basis)
    gamma = 0.8
    thetas = (0.1, 1.0, np.pi, 5.0)

    t0 = time.time()
    err = 0.0
    for theta in thetas:
        t_op = theta / 2.0
        omega = omega_of(_x_drive(1.0, t_op), 0.0, tensor)
        got = separated_spectral(channels.dephasing(gamma), omega, t_op)
        err = max(err, np.abs(got.gamma_s.gamma
                              - dephasing_separated_reference(gamma, theta)).max())
        err = max(
            err,
            np.abs(
                np.sort(got.gamma_s.spectrum())
                - np.sort(dephasing_rates_reference(gamma, theta))
            ).max(),
        )
    _case(report, "dephasing-separated-closed-form", err, 0.0, 1e-8,
          "closed-form", t0)

    t0 = time.time()
    err = 0.0
    for theta in thetas:
        t_op = theta / 2.0
        omega = omega_of(_x_drive(1.0, t_op), 0.0, tensor)
        got = separated_spectral(channels.damping(gamma), omega, t_op)
        err = max(err, np.abs(got.gamma_s.gamma
                              - damping_separated_reference(gamma, theta)).max())
        err = max(
            err,
            np.abs(
                np.sort(got.gamma_s.spectrum())
                - np.sort(damping_rates_reference(gamma, theta))
            ).max(),
        )
    _case(report, "damping-separated-closed-form", err, 0.0, 1e-8,
          "closed-form", t0)

    t0 = time.time()
    rng = np.random.default_rng(11)
    err = 0.0
    for _ in range(4):
        coeffs = rng.standard_normal(3)
        sched = HamiltonianSchedule(
            nbasis=3, terms=tuple((i, float(coeffs[i])) for i in range(3)),
            t_op=1.3,
        )
        omega = omega_of(sched, 0.0, tensor)
        gd = channels.depolarizing(0.4, 2)
        got = separated_spectral(gd, omega, 1.3)
        err = max(err, np.abs(got.gamma_s.gamma - gd).max())
    _case(report, "depolarizing-invariance", err, 0.0, 1e-10,
          "closed-form", t0)

    t0 = time.time()
    omega = omega_of(_x_drive(1.0, 1.0), 0.0, tensor)
    lam7 = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]])
    err = np.abs(omega - (-2.0) * lam7).max()
    _case(report, "x-drive-adjoint-matrix", err, 0.0, 1e-12, "closed-form", t0)

    t0 = time.time()
    got = steady_state(channels.dephasing(gamma), omega)
    err = np.abs(got.gamma - gamma / 2 * np.diag([0.0, 0.5, 0.5])).max()
    _case(report, "dephasing-steady-state", err, 0.0, 1e-9, "closed-form", t0)

    t0 = time.time()
    # large-angle limit of the damping rates: {gamma/8, gamma/8, gamma/4}
    got = steady_state(channels.damping(gamma), omega)
    limit = np.sort(damping_rates_reference(gamma, 1e9))
    err = np.abs(np.sort(got.spectrum()) - limit).max()
    _case(report, "damping-steady-state", err, 0.0, 1e-8, "derived-limit", t0)

    t0 = time.time()
    err = 0.0
    for theta in (np.pi, 2 * np.pi):
        comps = residual_components(channels.dephasing(gamma), omega, theta)
        err = max(err, max(abs(a) for _, a in comps))
    _case(report, "residual-vanishes-at-pi-multiples", err, 0.0, 1e-9,
          "closed-form", t0)

    t0 = time.time()
    comps = residual_components(channels.dephasing(gamma), omega, 1e-9)
    couplings = sorted(
        (eta, amp) for eta, amp in comps if abs(amp) > 1e-12
    )
    err = max(
        abs(couplings[0][0] + 2.0),
        abs(couplings[-1][0] - 2.0),
        abs(couplings[0][1] + gamma / 4),
        abs(couplings[-1][1] + gamma / 4),
    ) if len(couplings) == 2 else np.inf
    _case(report, "residual-mode-couplings", err, 0.0, 1e-8, "closed-form", t0)

    t0 = time.time()
    spec = xi_spectrum(omega)
    couplings = np.einsum(
        "aij,ij->a", spec.modes.conj(), channels.dephasing(gamma)
    )
    mask = (np.abs(couplings) > 1e-9) & (np.abs(spec.etas) > 1e-9)
    nonzero = np.sort(spec.etas[mask])
    err = np.abs(nonzero - np.array([-2.0, 2.0])).max() if len(nonzero) == 2 else np.inf
    _case(report, "xi-coupled-eigenvalues-x-drive", err, 0.0, 1e-9,
          "closed-form", t0)

    t0 = time.time()
    err = 0.0
    for theta in (0.5, 1.0, 2.0, np.pi):
        _, eigs = choi_of_transform(omega, theta / 2.0)
        ref = np.sort(np.concatenate([choi_rates_reference(theta), np.zeros(6)]))
        err = max(err, np.abs(np.sort(eigs) - ref).max())
    _case(report, "choi-spectrum-closed-form", err, 0.0, 1e-8, "closed-form", t0)

    t0 = time.time()
    _, eigs = choi_of_transform(omega, 1e-9)
    ref = np.sort(np.concatenate([[3.0], np.zeros(8)]))
    err = np.abs(np.sort(eigs) - ref).max()
    _case(report, "choi-identity-limit", err, 0.0, 1e-7, "derived-limit", t0)

    t0 = time.time()
    got = global_depolarizing_lambda(0.1, 2, 1.0)
    err = abs(got - (1 - np.exp(-0.4)))
    _case(report, "global-depolarizing-lambda", err, 0.0, 1e-14,
          "closed-form", t0)

    t0 = time.time()
    sched = rotating_drive_generator(1.0, 2.0).schedule
    t = 0.7
    got = omega_of(sched, t, tensor)
    ref = np.array(
        [
            [0, 0, 2j * np.sin(t)],
            [0, 0, -2j * np.cos(t)],
            [-2j * np.sin(t), 2j * np.cos(t), 0],
        ]
    )
    err = np.abs(got - ref).max()
    _case(report, "rotating-drive-adjoint-matrix", err, 0.0, 1e-12,
          "closed-form", t0)

    t0 = time.time()
    m90 = propagate_m(
        HamiltonianSchedule(nbasis=3, terms=((1, np.pi / 4),), t_op=1.0),
        tensor, 1.0, steps=512,
    )
    got = commute_left(RateMatrix(channels.damping(gamma)), m90)
    ref = (gamma / 2) * np.array(
        [[0, 0, 0], [0, 0.5, -0.5j], [0, 0.5j, 0.5]]
    )
    err = np.abs(got.gamma - ref).max()
    _case(report, "damping-commuted-past-y90", err, 0.0, 1e-9,
          "closed-form", t0)

    t0 = time.time()
    gate = compile_per_op(hadamard_gate_spec(gamma), steps=2048)
    err = np.abs(gate.gamma_n.gamma - gate_noise_reference(gamma)).max()
    _case(report, "two-rotation-gate-noise", err, 0.0, 1e-6, "closed-form", t0)

    t0 = time.time()
    base = compile_per_op(hadamard_gate_spec(gamma), steps=1024)
    gl_z, gl_y = base.breakdown[0][1].gamma, base.breakdown[1][1].gamma
    err = 0.0
    for m_idle in (0, 1, 10, 100):
        with_idle = compile_per_op(hadamard_gate_spec(gamma, m_idle), steps=1024)
        mixture = (2 * gl_z + gl_y + m_idle * channels.damping(gamma)) / (m_idle + 3)
        err = max(err, np.abs(with_idle.gamma_n.gamma - mixture).max())
    _case(report, "gate-idle-mixture-law", err, 0.0, 1e-9, "closed-form", t0)

    t0 = time.time()
    u = compile_per_op(hadamard_gate_spec(gamma), steps=1024).u
    y = pauli_basis(1).ops[1]
    z = pauli_basis(1).ops[2]
    u_ref = scipy.linalg.expm(-1j * np.pi / 4 * y) @ scipy.linalg.expm(
        1j * np.pi / 2 * z
    )
    phase = np.trace(u_ref.conj().T @ u)
    phase /= abs(phase)
    err = np.abs(u - phase * u_ref).max()
    _case(report, "two-rotation-ideal-unitary", err, 0.0, 1e-8,
          "closed-form", t0)

    _case_gm3(report, time.time())
    return report


def _case_gm3(report: ValidationReport, t0: float) -> None:
    from .basis import gell_mann_basis

    g3 = gell_mann_basis(3)
    lam3 = np.diag([1.0, -1.0, 0.0])
    lam8 = np.diag([1.0, 1.0, -2.0]) / np.sqrt(3)
    diagonals = [op for op in g3.ops if np.abs(op - np.diag(np.diag(op))).max() < 1e-14]
    err = np.inf
    if len(diagonals) == 2:
        scale = np.sqrt(3.0 / 2.0)
        err = max(
            np.abs(diagonals[0] - scale * lam3).max(),
            np.abs(diagonals[1] - scale * lam8).max(),
        )
    _case(report, "gell-mann-3-diagonals", err, 0.0, 1e-12, "closed-form", t0)


def scaling_suite() -> ValidationReport:
    report = ValidationReport()
    strengths = (0.02, 0.05, 0.1, 0.2)

    t0 = time.time()
    gens = [
        (g, rotating_drive_generator(g, 1.0)) for g in strengths
    ]
    # Tr Gamma = gamma/2 for this family; the fit only needs proportionality
    slope, _ = fit_strength_scaling(gens, 1.0, steps=2048)
    _case(report, "first-order-scaling-1q-drive", slope, 2.0, 0.3,
          "derived-fit", t0)

    t0 = time.time()
    basis2 = pauli_basis(2)
    xx = basis2.index("XX")
    zi = basis2.index("ZI")
    gens2 = []
    for g in strengths:
        sched = HamiltonianSchedule(
            nbasis=15, terms=((xx, 1.0), (zi, 0.7)), t_op=1.0
        )
        noise = RateSchedule.constant(channels.dephasing(g, qubits=2, qubit=0))
        gens2.append(
            (g, LindbladGenerator(schedule=sched, noise=noise, basis=basis2))
        )
    slope2, _ = fit_strength_scaling(gens2, 1.0, steps=1024)
    _case(report, "first-order-scaling-2q", slope2, 2.0, 0.3, "derived-fit", t0)
    return report


def drive_benchmark_suite() -> ValidationReport:
    report = ValidationReport()

    t0 = time.time()
    cal = rotating_drive_experiment(CALIBRATION_GAMMA)["max_deviation"]
    _case(
        report,
        "drive-benchmark-calibration",
        cal,
        CALIBRATION_DEVIATION,
        0.5 * CALIBRATION_DEVIATION,
        "calibrated",
        t0,
    )

    t0 = time.time()
    deviations = {}
    for g in (0.25, 1.0, 2.5):
        deviations[g] = rotating_drive_experiment(g)["max_deviation"]
    _case(
        report,
        "drive-benchmark-weak-noise",
        deviations[0.25],
        WEAK_NOISE_THRESHOLD,
        0.0,
        "calibrated",
        t0,
        cmp="le",
    )

    t0 = time.time()
    monotone = deviations[0.25] < deviations[1.0] < deviations[2.5]
    strong_ratio = deviations[2.5] / deviations[0.25]
    _case(
        report,
        "drive-benchmark-monotonic",
        1.0 if (monotone and strong_ratio >= 10.0) else 0.0,
        1.0,
        0.0,
        "derived-order",
        t0,
    )

    t0 = time.time()
    floor = rotating_drive_experiment(1e-8, t_max=4.0)["max_deviation"]
    _case(report, "drive-benchmark-zero-noise-floor", floor, 0.0, 1e-7,
          "derived-limit", t0)
    return report


def run_all() -> ValidationReport:
    report = closed_form_suite()
    report.extend(scaling_suite())
    report.extend(drive_benchmark_suite())
    return report
