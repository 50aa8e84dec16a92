#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot loops on representative workloads: the master-equation
RK4 stepper (one qubit, time-dependent stages), the rate-space Q equation
(two qubits), and the ordered propagator product (two qubits).  Numba
timings exclude the first (compiling) call.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from sepnoise._kernels import _numpy as knp

try:
    from sepnoise._kernels import _numba as knb
except ImportError:
    knb = None


def _hermitian_stack(rng, count, n):
    m = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    return m + m.conj().transpose(0, 2, 1)


def _psd_stack(rng, count, n, strength):
    m = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    g = m @ m.conj().transpose(0, 2, 1)
    traces = np.einsum("kii->k", g).real
    return strength * g / traces[:, None, None]


def build_workloads(quick):
    rng = np.random.default_rng(7)
    scale = 8 if quick else 1

    steps_rk4 = 65536 // scale
    stages = 2 * steps_rk4 + 1
    hs = _hermitian_stack(rng, stages, 2)
    gammas = _psd_stack(rng, stages, 3, 0.3)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    ops = np.stack([x, y, z])
    adag = np.ascontiguousarray(ops.conj().transpose(0, 2, 1))
    cs = np.ascontiguousarray(np.einsum("snm,nij->smij", gammas, ops))
    ps = np.ascontiguousarray(np.einsum("mji,smjk->sik", ops.conj(), cs))
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    tau = 1.0 / steps_rk4

    steps_q = 4096 // scale
    oms = _hermitian_stack(rng, 2 * steps_q + 1, 15)
    gms = _psd_stack(rng, 2 * steps_q + 1, 15, 0.4)
    q0 = np.zeros((15, 15), dtype=complex)

    steps_prefix = 8192 // scale
    gens = _hermitian_stack(rng, steps_prefix, 15)

    return [
        (
            f"rk4_lindblad 1q, {steps_rk4} steps",
            lambda k: k.rk4_lindblad(rho0, hs, 1, cs, ps, 1, adag, tau, steps_rk4),
        ),
        (
            f"rk4_q 2q, {steps_q} steps",
            lambda k: k.rk4_q(q0, oms, 1, gms, 1, 1.0 / steps_q, steps_q),
        ),
        (
            f"propagator_prefix 2q, {steps_prefix} steps",
            lambda k: k.propagator_prefix(gens, 1.0 / steps_prefix),
        ),
    ]


def time_call(fn, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true",
                        help="downscale workloads by 8x")
    args = parser.parse_args()

    workloads = build_workloads(args.quick)
    rows = []
    for name, call in workloads:
        t_np = time_call(lambda: call(knp))
        if knb is not None:
            call(knb)  # compile
            t_nb = time_call(lambda: call(knb))
            rows.append((name, t_np, t_nb, t_np / t_nb))
        else:
            rows.append((name, t_np, None, None))

    width = max(len(r[0]) for r in rows) + 2
    header = f"{'workload':<{width}} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, t_np, t_nb, speedup in rows:
        if t_nb is None:
            print(f"{name:<{width}} {t_np:>10.4f} {'n/a':>10} {'n/a':>8}")
        else:
            print(f"{name:<{width}} {t_np:>10.4f} {t_nb:>10.4f} {speedup:>7.1f}x")
    if knb is None:
        print("\nnumba is not importable; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
