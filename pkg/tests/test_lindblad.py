import numpy as np
import pytest
import scipy.linalg

import sepnoise as sn
from sepnoise.lindblad import default_steps, validate_density

from conftest import random_psd

PLUS = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
GROUND = np.diag([1.0, 0.0]).astype(complex)
MIXED = 0.5 * np.eye(2, dtype=complex)


def rabi_generator(t_op):
    sched = sn.HamiltonianSchedule(nbasis=3, terms=((0, 1.0),), t_op=t_op)
    return sn.LindbladGenerator(schedule=sched, noise=None, basis=sn.pauli_basis(1))


# -- dissipator ----------------------------------------------------------------


def test_dissipator_dephasing_on_plus(pauli1):
    gamma = 0.7
    out = sn.dissipator_apply(sn.dephasing(gamma), pauli1, PLUS)
    x = pauli1.ops[0]
    assert np.abs(out - (-gamma / 2) * x).max() < 1e-14
    # d<X>/dt = -gamma <X>
    assert np.trace(x @ out).real == pytest.approx(-gamma)


def test_dissipator_zero_noise(pauli1):
    out = sn.dissipator_apply(np.zeros((3, 3)), pauli1, PLUS)
    assert np.abs(out).max() == 0.0


def test_dissipator_damping_matches_jump_form(pauli1, rng):
    gamma = 0.9
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    sm = sp.conj().T
    rho = random_psd(rng, 2, 1.0)
    ref = gamma * (sp @ rho @ sm - 0.5 * (sm @ sp @ rho + rho @ sm @ sp))
    out = sn.dissipator_apply(sn.damping(gamma), pauli1, rho)
    assert np.abs(out - ref).max() < 1e-12


def test_dissipator_output_traceless(pauli1, rng):
    out = sn.dissipator_apply(random_psd(rng, 3, 0.5), pauli1, random_psd(rng, 2, 1.0))
    assert abs(np.trace(out)) < 1e-10


def test_dissipator_shape_mismatch(pauli1):
    with pytest.raises(ValueError):
        sn.dissipator_apply(np.zeros((2, 2)), pauli1, PLUS)


# -- evolve ---------------------------------------------------------------------


def test_evolve_rabi(pauli1):
    gen = rabi_generator(3.0)
    times, traj = sn.evolve_trajectory(gen, GROUND, 3.0, steps=4096)
    z = pauli1.ops[2]
    zs = np.einsum("ij,kji->k", z, traj).real
    assert np.abs(zs - np.cos(2 * times)).max() < 1e-8


def test_evolve_pure_dephasing_decay(pauli1):
    gamma = 0.8
    gen = sn.LindbladGenerator(
        schedule=sn.zero_hamiltonian(3, 2.0),
        noise=sn.RateSchedule.constant(sn.dephasing(gamma)),
        basis=pauli1,
    )
    times, traj = sn.evolve_trajectory(gen, PLUS, 2.0, steps=2048)
    xs = np.einsum("ij,kji->k", pauli1.ops[0], traj).real
    assert np.abs(xs - np.exp(-gamma * times)).max() < 1e-8


def test_evolve_rejects_non_density(pauli1):
    gen = rabi_generator(1.0)
    with pytest.raises(ValueError):
        sn.evolve(gen, np.diag([2.0, 0.0]).astype(complex), 1.0, steps=16)
    with pytest.raises(ValueError):
        sn.evolve(gen, GROUND, -1.0, steps=16)


def test_trajectory_conserves_trace_and_hermiticity(pauli1, rng):
    gen = sn.LindbladGenerator(
        schedule=sn.HamiltonianSchedule(nbasis=3, terms=((1, 0.7),), t_op=2.0),
        noise=sn.RateSchedule.constant(random_psd(rng, 3, 0.4)),
        basis=pauli1,
    )
    _, traj = sn.evolve_trajectory(gen, GROUND, 2.0, steps=1024)
    traces = np.einsum("kii->k", traj)
    assert np.abs(traces - 1.0).max() < 1e-8
    herm = np.abs(traj - traj.conj().transpose(0, 2, 1)).max()
    assert herm < 1e-9
    eigs = np.linalg.eigvalsh(traj)
    assert eigs.min() > -1e-8


def test_rk4_convergence_order(pauli1):
    # global error on the Rabi problem scales as steps^-4
    gen = rabi_generator(2.0)
    z = pauli1.ops[2]
    errors = []
    steps_grid = [32, 64, 128, 256]
    for steps in steps_grid:
        rho = sn.evolve(gen, GROUND, 2.0, steps=steps)
        errors.append(abs(np.trace(z @ rho).real - np.cos(4.0)))
    slope = np.polyfit(np.log(steps_grid), np.log(errors), 1)[0]
    assert abs(slope + 4.0) < 0.3


def test_step_halving_stability(pauli1, rng):
    gen = sn.LindbladGenerator(
        schedule=sn.HamiltonianSchedule(
            nbasis=3, terms=((0, sn.parse_expr("cos(t)")),), t_op=1.0
        ),
        noise=sn.RateSchedule.constant(random_psd(rng, 3, 0.3)),
        basis=pauli1,
    )
    a = sn.evolve(gen, GROUND, 1.0, steps=2048)
    b = sn.evolve(gen, GROUND, 1.0, steps=4096)
    assert np.abs(a - b).max() < 1e-7


# -- coherent evolve -------------------------------------------------------------


def test_coherent_t0_returns_input(pauli1):
    sched = sn.HamiltonianSchedule(nbasis=3, terms=((0, 1.0),), t_op=1.0)
    out = sn.coherent_evolve(sched, pauli1, PLUS, 0.0)
    assert np.abs(out - PLUS).max() == 0.0


def test_coherent_matches_zero_noise_evolve(pauli1):
    sched = sn.HamiltonianSchedule(
        nbasis=3, terms=((0, sn.parse_expr("cos(2*t)")),), t_op=1.0
    )
    zero_noise = sn.RateSchedule.constant(np.zeros((3, 3)))
    gen = sn.LindbladGenerator(schedule=sched, noise=zero_noise, basis=pauli1)
    a = sn.coherent_evolve(sched, pauli1, GROUND, 1.0, steps=512)
    b = sn.evolve(gen, GROUND, 1.0, steps=512)
    assert np.abs(a - b).max() < 1e-12


def test_coherent_matches_unitary_oracle(pauli1):
    sched = sn.HamiltonianSchedule(
        nbasis=3,
        terms=((0, sn.parse_expr("cos(t)")), (1, sn.parse_expr("sin(t)"))),
        t_op=1.5,
    )
    rho = sn.coherent_evolve(sched, pauli1, GROUND, 1.5, steps=4096)
    u = sn.schrodinger_u(sched, pauli1, 1.5, steps=8192)
    assert np.abs(rho - u @ GROUND @ u.conj().T).max() < 1e-8


def test_coherent_preserves_purity(pauli1):
    sched = sn.HamiltonianSchedule(nbasis=3, terms=((1, 0.9),), t_op=2.0)
    rho = sn.coherent_evolve(sched, pauli1, PLUS, 2.0, steps=1024)
    assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-8)


# -- expectation ------------------------------------------------------------------


def test_expectation_trivials(pauli1):
    x, _, z = pauli1.ops
    assert sn.expectation(z, GROUND) == pytest.approx(1.0)
    assert sn.expectation(x, MIXED) == pytest.approx(0.0)
    assert sn.expectation(x, PLUS) == pytest.approx(1.0)


def test_expectation_rejects_non_hermitian(pauli1):
    with pytest.raises(ValueError):
        sn.expectation(np.array([[0, 1], [0, 0]], dtype=complex), GROUND)


# -- plumbing --------------------------------------------------------------------


def test_validate_density_errors():
    with pytest.raises(ValueError):
        validate_density(np.array([[0.5, 0.5], [0.4, 0.5]], dtype=complex))
    with pytest.raises(ValueError):
        validate_density(np.diag([0.9, 0.3]).astype(complex))
    with pytest.raises(ValueError):
        validate_density(np.diag([1.5, -0.5]).astype(complex))


def test_default_steps_density():
    assert default_steps(1.0, 1.0, 0.0) == 2**14
    assert default_steps(2.0, 2.0, 0.0) == 2**14
    assert default_steps(4.0, 4.0, 2.0) == 8 * 2**14


def test_generator_size_mismatch(pauli1):
    sched = sn.zero_hamiltonian(15, 1.0)
    with pytest.raises(ValueError):
        sn.LindbladGenerator(schedule=sched, noise=None, basis=pauli1)


def test_strength_average_time_dependent(pauli1):
    mat = np.diag([0.0, 1.0, 0.0]).astype(complex)
    noise = sn.RateSchedule(terms=((sn.parse_expr("sin(2*t)^2"), mat),))
    gen = sn.LindbladGenerator(
        schedule=sn.zero_hamiltonian(3, 3.0), noise=noise, basis=pauli1
    )
    t_op = 3.0
    ref = 0.5 - np.sin(4 * t_op) / (8 * t_op)  # average of sin^2(2t)
    assert gen.strength_average(t_op) == pytest.approx(ref, abs=1e-10)
