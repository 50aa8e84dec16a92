"""Numba-compiled implementations of the hot integration kernels.

Same contracts as ``_numpy``; see that module for documentation.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _eye(n):
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        out[i, i] = 1.0
    return out


@njit(cache=True)
def expm_herm(a, t):
    w, v = np.linalg.eigh(a)
    vd = np.ascontiguousarray(v.conj().T)
    return (v * np.exp(-1.0j * t * w)) @ vd


@njit(cache=True)
def propagator_prefix(gens_mid, tau):
    steps = gens_mid.shape[0]
    n = gens_mid.shape[1]
    out = np.empty((steps + 1, n, n), dtype=np.complex128)
    out[0] = _eye(n)
    for k in range(steps):
        factor = expm_herm(np.ascontiguousarray(gens_mid[k]), tau)
        out[k + 1] = factor @ out[k]
    return out


@njit(cache=True)
def propagator_prefix_constant(gen, tau, steps):
    n = gen.shape[0]
    factor = expm_herm(gen, tau)
    out = np.empty((steps + 1, n, n), dtype=np.complex128)
    out[0] = _eye(n)
    for k in range(steps):
        out[k + 1] = factor @ out[k]
    return out


@njit(cache=True)
def _lindblad_rhs(h, c, p, adag, rho):
    out = -1.0j * (h @ rho - rho @ h)
    nm = c.shape[0]
    for m in range(nm):
        out += np.ascontiguousarray(c[m]) @ rho @ np.ascontiguousarray(adag[m])
    if nm > 0:
        out -= 0.5 * (p @ rho + rho @ p)
    return out


@njit(cache=True)
def rk4_lindblad(rho0, hs, sh, cs, ps, sg, adag, tau, steps):
    d = rho0.shape[0]
    out = np.empty((steps + 1, d, d), dtype=np.complex128)
    rho = rho0.astype(np.complex128)
    out[0] = rho
    for i in range(steps):
        i0 = 2 * i * sh
        i1 = (2 * i + 1) * sh
        i2 = (2 * i + 2) * sh
        j0 = 2 * i * sg
        j1 = (2 * i + 1) * sg
        j2 = (2 * i + 2) * sg
        k1 = _lindblad_rhs(hs[i0], cs[j0], ps[j0], adag, rho)
        k2 = _lindblad_rhs(hs[i1], cs[j1], ps[j1], adag, rho + (0.5 * tau) * k1)
        k3 = _lindblad_rhs(hs[i1], cs[j1], ps[j1], adag, rho + (0.5 * tau) * k2)
        k4 = _lindblad_rhs(hs[i2], cs[j2], ps[j2], adag, rho + tau * k3)
        rho = rho + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = rho
    return out


@njit(cache=True)
def _q_rhs(om, gm, q):
    return -1.0j * (om @ q - q @ om) + gm


@njit(cache=True)
def rk4_q(q0, oms, so, gms, sg, tau, steps):
    n = q0.shape[0]
    out = np.empty((steps + 1, n, n), dtype=np.complex128)
    q = q0.astype(np.complex128)
    out[0] = q
    for i in range(steps):
        i0 = 2 * i * so
        i1 = (2 * i + 1) * so
        i2 = (2 * i + 2) * so
        j0 = 2 * i * sg
        j1 = (2 * i + 1) * sg
        j2 = (2 * i + 2) * sg
        k1 = _q_rhs(oms[i0], gms[j0], q)
        k2 = _q_rhs(oms[i1], gms[j1], q + (0.5 * tau) * k1)
        k3 = _q_rhs(oms[i1], gms[j1], q + (0.5 * tau) * k2)
        k4 = _q_rhs(oms[i2], gms[j2], q + tau * k3)
        q = q + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = q
    return out
