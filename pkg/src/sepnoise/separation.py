"""Separated noise: the pure dissipator equivalent to noise-during-drive.

To first order in the noise strength, evolution under a Lindblad generator
factors into the clean coherent map followed by a time-independent
dissipator, whose rate matrix is the time average of the hardware rate
matrix conjugated through the coherent evolution:

    Gamma_S = (1/t_op) M [ integral_0^t_op M(s)^dag Gamma_D(s) M(s) ds ] M^dag

Three mutually checking routes compute it:

* ``separated_integral`` -- composite Simpson over that integral;
* ``separated_ode``      -- RK4 on dQ/ds = -i[Omega(s), Q] + Gamma_D(s),
  with Gamma_S = Q(t_op)/t_op;
* ``separated_spectral`` -- for time-independent generators only, applies
  f(t_op * xi) with f(x) = (e^x - 1)/x through the eigendecomposition of
  the commutator map xi = -i[Omega, .].

The eigenstructure of xi also yields the large-angle steady state (its
null-space projection), the per-mode residual amplitudes, and the Choi
matrix of the noise-shaping map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .basis import structure_tensor
from .lindblad import LindbladGenerator
from .schedule import HamiltonianSchedule
from .superops import Propagator, RateMatrix, omega_samples, propagator_prefix_for

XI_ROUTE_TOL = 1e-8


@dataclass(frozen=True)
class SeparatedNoiseResult:
    """Separated and forward noise for one operation window."""

    gamma_s: RateMatrix
    gamma_f: RateMatrix
    t_op: float
    route: str

    @property
    def strength(self) -> float:
        return self.gamma_s.strength


@dataclass(frozen=True)
class XiSpectrum:
    """Eigenmodes of the commutator map on the rate-matrix space.

    ``modes[a]`` are orthonormal under the plain ``Tr[A^dag B]`` product
    (no dimension factor) and come in conjugate pairs with opposite
    eigenvalues; ``eigs`` are purely imaginary.  ``etas`` rescales the
    eigenvalues by the coherent energy scale ``2J = ||Omega||_2`` so that a
    mode evolves with phase ``exp(i eta theta)`` in the operation angle.
    """

    modes: np.ndarray
    eigs: np.ndarray
    omega_norm: float

    @property
    def etas(self) -> np.ndarray:
        if self.omega_norm == 0.0:
            return np.zeros(self.eigs.shape)
        return self.eigs.imag / self.omega_norm


def _phi1(x: complex) -> complex:
    """(e^x - 1) / x, analytic at zero.

    Direct evaluation above |x| = 1e-4 (expm1 for real arguments, the
    cancellation-free exp(x/2) sinh(x/2) / (x/2) form for complex ones),
    4-term Taylor below.
    """
    if abs(x) >= 1e-4:
        if np.isrealobj(x):
            return np.expm1(x) / x
        half = x / 2.0
        return np.exp(half) * np.sinh(half) / half
    return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0


def _phi1_grid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    small = np.abs(x) < 1e-4
    half = np.where(small, 1.0, x) / 2.0
    out = np.exp(half) * np.sinh(half) / half
    taylor = 1.0 + x / 2.0 + x**2 / 6.0 + x**3 / 24.0
    return np.where(small, taylor, out)


def _as_gamma(gamma) -> np.ndarray:
    g = gamma.gamma if isinstance(gamma, RateMatrix) else np.asarray(gamma)
    return np.asarray(g, dtype=np.complex128)


def _require_hermitian(omega: np.ndarray) -> np.ndarray:
    omega = np.asarray(omega, dtype=np.complex128)
    if np.abs(omega - omega.conj().T).max() > 1e-10:
        raise ValueError("Omega must be Hermitian")
    return omega


def _fixed_phase_eigh(omega: np.ndarray):
    """eigh with each eigenvector's leading component made real positive."""
    w, v = np.linalg.eigh(omega)
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = int(np.argmax(np.abs(col)))
        phase = col[idx] / abs(col[idx])
        v[:, k] = col / phase
    return w, v


def _simpson_weights(n_nodes: int, h: float) -> np.ndarray:
    weights = np.ones(n_nodes)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return weights * (h / 3.0)


def _result(gamma_s, m, t_op, route, ref) -> SeparatedNoiseResult:
    gs = RateMatrix(gamma=gamma_s, basis_ref=ref)
    gf = RateMatrix(gamma=m.conj().T @ gs.gamma @ m, basis_ref=ref)
    return SeparatedNoiseResult(gamma_s=gs, gamma_f=gf, t_op=t_op, route=route)


def separated_integral(
    gen: LindbladGenerator, t_op: float, steps: int = 8192
) -> SeparatedNoiseResult:
    """Separated noise by Simpson quadrature of the conjugated rate matrix."""
    if t_op <= 0:
        raise ValueError("t_op must be positive")
    if steps % 2:
        steps += 1
    tensor = structure_tensor(gen.basis)
    prefix = propagator_prefix_for(gen.schedule, tensor, t_op, steps)
    nodes = np.linspace(0.0, t_op, steps + 1)
    if gen.noise.is_constant:
        gammas = np.broadcast_to(
            gen.noise.value(0.0), (steps + 1, gen.noise.size, gen.noise.size)
        )
    else:
        gammas = gen.noise.sample(nodes)
    integrand = np.einsum(
        "kji,kjl,klm->kim", prefix.conj(), gammas, prefix, optimize=True
    )
    weights = _simpson_weights(steps + 1, t_op / steps)
    gamma_f = np.tensordot(weights, integrand, axes=1) / t_op
    m = prefix[-1]
    return _result(m @ gamma_f @ m.conj().T, m, t_op, "integral", gen.basis.label)


def q_trajectory(
    gen: LindbladGenerator, t_op: float, steps: int = 4096
) -> tuple[np.ndarray, np.ndarray]:
    """(node times, Q(s) at nodes) for dQ/ds = -i[Omega, Q] + Gamma_D."""
    if t_op <= 0:
        raise ValueError("t_op must be positive")
    tensor = structure_tensor(gen.basis)
    stage_times = np.linspace(0.0, t_op, 2 * steps + 1)
    if gen.schedule.is_constant:
        oms, so = omega_samples(gen.schedule, stage_times[:1], tensor), 0
    else:
        oms, so = omega_samples(gen.schedule, stage_times, tensor), 1
    if gen.noise.is_constant:
        gms, sg = gen.noise.sample(stage_times[:1]), 0
    else:
        gms, sg = gen.noise.sample(stage_times), 1
    n = gen.basis.size
    q0 = np.zeros((n, n), dtype=np.complex128)
    traj = kernels.rk4_q(
        q0,
        np.ascontiguousarray(oms),
        so,
        np.ascontiguousarray(gms),
        sg,
        t_op / steps,
        steps,
    )
    return stage_times[::2], traj


def separated_ode(
    gen: LindbladGenerator, t_op: float, steps: int = 4096
) -> SeparatedNoiseResult:
    """Separated noise by RK4 integration of the Q equation."""
    _, traj = q_trajectory(gen, t_op, steps)
    gamma_s = traj[-1] / t_op
    gamma_s = 0.5 * (gamma_s + gamma_s.conj().T)  # scrub integrator roundoff
    tensor = structure_tensor(gen.basis)
    m = propagator_prefix_for(gen.schedule, tensor, t_op, steps)[-1]
    return _result(gamma_s, m, t_op, "ode", gen.basis.label)


def xi_spectrum(omega: np.ndarray, tol: float = XI_ROUTE_TOL) -> XiSpectrum:
    """Eigendecomposition of xi = -i[Omega, .] by two asserted-equal routes.

    Route one diagonalizes the full matrix of xi in the elementary basis of
    the rate space; route two builds eigenmodes as outer products of the
    eigenvectors of Omega, with eigenvalue -i(omega_i - omega_j).  Raises
    ``ValueError`` when the two spectra disagree as multisets.
    """
    omega = _require_hermitian(omega)
    n = omega.shape[0]
    w, v = _fixed_phase_eigh(omega)
    diffs = w[:, None] - w[None, :]
    eigs = (-1.0j * diffs).reshape(-1)
    modes = np.einsum("ai,bj->ijab", v, v.conj()).reshape(n * n, n, n)

    # independent route: diagonalize xi as an explicit matrix
    eye = np.eye(n)
    herm = np.kron(eye, omega) - np.kron(omega.T, eye)
    mu = np.linalg.eigvalsh(herm)
    scale = max(1.0, float(np.abs(w).max()))
    if np.abs(np.sort(mu) - np.sort(diffs.reshape(-1))).max() > tol * scale:
        raise ValueError("xi spectra from the two construction routes disagree")
    return XiSpectrum(modes=modes, eigs=eigs, omega_norm=float(np.abs(w).max()))


def separated_spectral(
    gamma_d, omega: np.ndarray, t_op: float, basis_ref: str = "pauli"
) -> SeparatedNoiseResult:
    """Separated noise for a time-independent generator via the xi spectrum."""
    if t_op <= 0:
        raise ValueError("t_op must be positive")
    g = _as_gamma(gamma_d)
    omega = _require_hermitian(omega)
    if g.shape != omega.shape:
        raise ValueError("rate matrix and Omega dimensions differ")
    if isinstance(gamma_d, RateMatrix):
        basis_ref = gamma_d.basis_ref
    w, v = np.linalg.eigh(omega)
    rotated = v.conj().T @ g @ v
    factors = _phi1_grid(-1.0j * t_op * (w[:, None] - w[None, :]))
    gamma_s = v @ (factors * rotated) @ v.conj().T
    gamma_s = 0.5 * (gamma_s + gamma_s.conj().T)
    m = kernels.expm_herm(omega, t_op)
    return _result(gamma_s, m, t_op, "spectral", basis_ref)


def separated(
    gen: LindbladGenerator,
    t_op: float,
    route: str = "ode",
    steps: int = 4096,
) -> SeparatedNoiseResult:
    """Route dispatcher; the spectral route demands a time-independent input."""
    if route == "integral":
        return separated_integral(gen, t_op, steps=max(steps, 2))
    if route == "ode":
        return separated_ode(gen, t_op, steps=steps)
    if route == "spectral":
        if not (gen.schedule.is_constant and gen.noise.is_constant):
            raise ValueError(
                "the spectral route requires a time-independent generator"
            )
        tensor = structure_tensor(gen.basis)
        omega = omega_samples(gen.schedule, np.array([0.0]), tensor)[0]
        return separated_spectral(
            gen.noise.value(0.0), omega, t_op, basis_ref=gen.basis.label
        )
    raise ValueError(f"unknown route {route!r}")


def _null_tol(omega_norm: float, tol: float | None) -> float:
    if tol is not None:
        return tol
    return 1e-9 * max(1.0, omega_norm)


def steady_state(
    gamma_d, omega: np.ndarray, null_tol: float | None = None
) -> RateMatrix:
    """Projection of the hardware noise onto the null space of xi.

    This is the large-angle limit of the separated noise for a
    time-independent generator.
    """
    g = _as_gamma(gamma_d)
    omega = _require_hermitian(omega)
    ref = gamma_d.basis_ref if isinstance(gamma_d, RateMatrix) else "pauli"
    w, v = np.linalg.eigh(omega)
    tol = _null_tol(float(np.abs(w).max(initial=0.0)), null_tol)
    mask = np.abs(w[:, None] - w[None, :]) <= tol
    rotated = v.conj().T @ g @ v
    out = v @ (mask * rotated) @ v.conj().T
    return RateMatrix(gamma=0.5 * (out + out.conj().T), basis_ref=ref)


def residual_components(
    gamma_d, omega: np.ndarray, theta: float, null_tol: float | None = None
) -> list[tuple[float, complex]]:
    """Per-mode residual amplitudes ``(eta_a, gamma_a(theta))``.

    Covers the modes outside the null space of xi; each amplitude is the
    coupling of the hardware noise to that mode, damped by
    ``(e^{i eta theta} - 1) / (i eta theta)``, so a component vanishes at
    any angle where ``e^{i eta theta} = 1``.
    """
    g = _as_gamma(gamma_d)
    omega = _require_hermitian(omega)
    w, v = _fixed_phase_eigh(omega)
    norm = float(np.abs(w).max(initial=0.0))
    tol = _null_tol(norm, null_tol)
    if norm == 0.0:
        return []
    out = []
    rotated = v.conj().T @ g @ v  # coupling via Tr[mode^dag Gamma] = rotated[i, j]
    for i in range(len(w)):
        for j in range(len(w)):
            delta = w[i] - w[j]
            if abs(delta) <= tol:
                continue
            eta = -delta / norm
            coupling = rotated[i, j]
            amplitude = coupling * _phi1(1.0j * eta * theta)
            out.append((float(eta), complex(amplitude)))
    return out


def choi_of_transform(
    omega: np.ndarray, t_op: float
) -> tuple[np.ndarray, np.ndarray]:
    """Choi matrix of the map taking hardware noise to separated noise.

    Returns ``(C, eigenvalues)`` where ``C = sum_ij e_ij (x) K[e_ij]`` over
    the elementary matrices of the rate space.  A non-negative spectrum
    certifies that the map is (completely) positive.
    """
    if t_op <= 0:
        raise ValueError("t_op must be positive")
    omega = _require_hermitian(omega)
    n = omega.shape[0]
    w, v = np.linalg.eigh(omega)
    factors = _phi1_grid(-1.0j * t_op * (w[:, None] - w[None, :]))
    vdag = v.conj().T
    choi = np.empty((n, n, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            rotated = np.outer(vdag[:, i], v[j, :])
            choi[i, :, j, :] = v @ (factors * rotated) @ vdag
    choi = choi.reshape(n * n, n * n)
    if np.abs(choi - choi.conj().T).max() > 1e-9 * max(1.0, np.abs(choi).max()):
        raise ValueError("Choi matrix failed its Hermiticity check")
    return choi, np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))


def global_depolarizing_lambda(alpha: float, dim: int, t_op: float) -> float:
    """Mixing probability of the global depolarizing channel after ``t_op``."""
    if alpha < 0:
        raise ValueError("depolarizing rate must be non-negative")
    return float(-np.expm1(-alpha * dim * dim * t_op))
