"""Pure-numpy implementations of the hot integration kernels."""

import numpy as np


def expm_herm(a, t):
    """exp(-1j * t * a) for Hermitian ``a`` via eigendecomposition."""
    w, v = np.linalg.eigh(a)
    return (v * np.exp(-1.0j * t * w)) @ v.conj().T


def propagator_prefix(gens_mid, tau):
    """Ordered prefix products of per-step exponentials.

    ``gens_mid[k]`` is the Hermitian generator sampled at the midpoint of
    step ``k``; the result ``out[k]`` is
    ``exp(-i tau G_{k-1}) ... exp(-i tau G_0)`` with ``out[0]`` the identity.
    """
    steps, n, _ = gens_mid.shape
    w, v = np.linalg.eigh(gens_mid)
    factors = (v * np.exp(-1.0j * tau * w)[:, None, :]) @ np.conj(
        np.swapaxes(v, 1, 2)
    )
    out = np.empty((steps + 1, n, n), dtype=np.complex128)
    acc = np.eye(n, dtype=np.complex128)
    out[0] = acc
    for k in range(steps):
        acc = factors[k] @ acc
        out[k + 1] = acc
    return out


def propagator_prefix_constant(gen, tau, steps):
    """Prefix products for a time-independent generator (repeated factor)."""
    n = gen.shape[0]
    factor = expm_herm(gen, tau)
    out = np.empty((steps + 1, n, n), dtype=np.complex128)
    acc = np.eye(n, dtype=np.complex128)
    out[0] = acc
    for k in range(steps):
        acc = factor @ acc
        out[k + 1] = acc
    return out


def _lindblad_rhs(h, c, p, adag, rho):
    out = -1.0j * (h @ rho - rho @ h)
    if c.shape[0]:
        out = out + ((c @ rho) @ adag).sum(axis=0)
        out = out - 0.5 * (p @ rho + rho @ p)
    return out


def rk4_lindblad(rho0, hs, sh, cs, ps, sg, adag, tau, steps):
    """Fixed-step RK4 trajectory of the master equation.

    Stage arrays hold values at times ``(0, tau/2, tau, ...)``; ``sh`` and
    ``sg`` are 0 for time-independent inputs (single stage entry) or 1 for
    per-stage sampling.  ``cs[s, m] = sum_n Gamma_nm(t_s) A_n`` and
    ``ps[s] = sum_m A_m^dag cs[s, m]``.
    """
    d = rho0.shape[0]
    out = np.empty((steps + 1, d, d), dtype=np.complex128)
    rho = rho0.astype(np.complex128)
    out[0] = rho
    for i in range(steps):
        i0, i1, i2 = 2 * i, 2 * i + 1, 2 * i + 2
        k1 = _lindblad_rhs(hs[i0 * sh], cs[i0 * sg], ps[i0 * sg], adag, rho)
        k2 = _lindblad_rhs(
            hs[i1 * sh], cs[i1 * sg], ps[i1 * sg], adag, rho + (0.5 * tau) * k1
        )
        k3 = _lindblad_rhs(
            hs[i1 * sh], cs[i1 * sg], ps[i1 * sg], adag, rho + (0.5 * tau) * k2
        )
        k4 = _lindblad_rhs(
            hs[i2 * sh], cs[i2 * sg], ps[i2 * sg], adag, rho + tau * k3
        )
        rho = rho + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = rho
    return out


def _q_rhs(om, gm, q):
    return -1.0j * (om @ q - q @ om) + gm


def rk4_q(q0, oms, so, gms, sg, tau, steps):
    """Fixed-step RK4 for dQ/ds = -i[Omega(s), Q] + Gamma(s)."""
    n = q0.shape[0]
    out = np.empty((steps + 1, n, n), dtype=np.complex128)
    q = q0.astype(np.complex128)
    out[0] = q
    for i in range(steps):
        i0, i1, i2 = 2 * i, 2 * i + 1, 2 * i + 2
        k1 = _q_rhs(oms[i0 * so], gms[i0 * sg], q)
        k2 = _q_rhs(oms[i1 * so], gms[i1 * sg], q + (0.5 * tau) * k1)
        k3 = _q_rhs(oms[i1 * so], gms[i1 * sg], q + (0.5 * tau) * k2)
        k4 = _q_rhs(oms[i2 * so], gms[i2 * sg], q + tau * k3)
        q = q + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = q
    return out
