import numpy as np
import pytest
import scipy.linalg

import sepnoise as sn
from sepnoise.superops import (
    Propagator,
    RateMatrix,
    dissipator_superop,
    conjugation_superop,
    hamiltonian_superop,
    propagator_prefix_for,
    unvec,
    vec,
)

from conftest import random_hermitian, random_psd


def x_drive(j, t_op):
    return sn.HamiltonianSchedule(nbasis=3, terms=((0, -j),), t_op=t_op)


def rotating_drive(t_op):
    return sn.HamiltonianSchedule(
        nbasis=3,
        terms=((0, sn.parse_expr("cos(t)")), (1, sn.parse_expr("sin(t)"))),
        t_op=t_op,
    )


def random_constant_schedule(rng, nbasis, t_op, scale=1.0):
    coeffs = scale * rng.standard_normal(nbasis)
    return sn.HamiltonianSchedule(
        nbasis=nbasis,
        terms=tuple((i, float(c)) for i, c in enumerate(coeffs)),
        t_op=t_op,
    )


# -- omega ------------------------------------------------------------------


def test_omega_rotating_drive(tensor1):
    sched = rotating_drive(2.0)
    for t in (0.0, 0.7, 1.9):
        got = sn.omega_of(sched, t, tensor1)
        ref = np.array(
            [
                [0, 0, 2j * np.sin(t)],
                [0, 0, -2j * np.cos(t)],
                [-2j * np.sin(t), 2j * np.cos(t), 0],
            ]
        )
        assert np.abs(got - ref).max() < 1e-14


def test_omega_x_drive_is_gm7(tensor1):
    j = 1.3
    lam7 = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]])
    got = sn.omega_of(x_drive(j, 1.0), 0.0, tensor1)
    assert np.abs(got - (-2 * j) * lam7).max() < 1e-14


def test_omega_zero_hamiltonian(tensor1):
    sched = sn.zero_hamiltonian(3, 1.0)
    assert np.abs(sn.omega_of(sched, 0.5, tensor1)).max() == 0.0


def test_omega_domain_error(tensor1):
    with pytest.raises(ValueError):
        sn.omega_of(rotating_drive(1.0), 1.5, tensor1)


# -- propagator ---------------------------------------------------------------


def test_propagate_identity_at_zero(tensor1):
    m = sn.propagate_m(rotating_drive(1.0), tensor1, 0.0)
    assert np.abs(m.m - np.eye(3)).max() == 0.0


@pytest.mark.parametrize("qubits", [1, 2])
def test_propagate_constant_matches_expm(qubits, rng):
    basis = sn.pauli_basis(qubits)
    tensor = sn.structure_tensor(basis)
    sched = random_constant_schedule(rng, basis.size, 1.4)
    omega = sn.omega_of(sched, 0.0, tensor)
    got = sn.propagate_m(sched, tensor, 1.4, steps=4096).m
    ref = scipy.linalg.expm(-1j * 1.4 * omega)
    assert np.abs(got - ref).max() < 1e-10


def test_propagate_drive_unitary(tensor1):
    m = sn.propagate_m(rotating_drive(3.0), tensor1, 3.0, steps=4096)
    assert np.abs(m.m @ m.m.conj().T - np.eye(3)).max() < 1e-8


def test_propagate_domain_and_steps(tensor1):
    with pytest.raises(ValueError):
        sn.propagate_m(rotating_drive(1.0), tensor1, 2.0)
    with pytest.raises(ValueError):
        sn.propagate_m(rotating_drive(1.0), tensor1, 0.5, steps=0)


def test_propagator_unitarity_enforced():
    with pytest.raises(ValueError):
        Propagator(m=np.diag([1.0, 2.0, 1.0]).astype(complex), s=1.0)


def test_adjoint_rep_consistency(pauli1, tensor1):
    # M acting on coefficient vectors == conjugation by U re-expanded
    sched = rotating_drive(1.3)
    m = sn.propagate_m(sched, tensor1, 1.3, steps=4096).m
    u = sn.schrodinger_u(sched, pauli1, 1.3, steps=4096)
    ops = pauli1.ops
    conjugated = np.einsum("ab,nbc,dc->nad", u, ops, u.conj())
    lifted = np.einsum("mij,nij->mn", ops.conj(), conjugated) / pauli1.dim
    assert np.abs(lifted - m).max() < 1e-8


# -- rate-matrix transforms ---------------------------------------------------


def test_rate_matrix_validation():
    with pytest.raises(ValueError):
        RateMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    rm = RateMatrix(np.diag([0.2, 0.3, 0.0]).astype(complex))
    assert rm.is_physical()
    assert rm.strength == pytest.approx(0.5)
    assert not RateMatrix(np.diag([-0.2, 0.3, 0.0]).astype(complex)).is_physical()


def test_commute_left_damping_past_y90(tensor1):
    gamma = 0.6
    sched = sn.HamiltonianSchedule(nbasis=3, terms=((1, np.pi / 4),), t_op=1.0)
    m = sn.propagate_m(sched, tensor1, 1.0, steps=1024)
    got = sn.commute_left(RateMatrix(sn.damping(gamma)), m)
    ref = (gamma / 2) * np.array(
        [[0, 0, 0], [0, 0.5, -0.5j], [0, 0.5j, 0.5]]
    )
    assert np.abs(got.gamma - ref).max() < 1e-9


def test_commute_identity_propagator(rng):
    gamma = RateMatrix(random_psd(rng, 3, 0.4))
    ident = Propagator(m=np.eye(3, dtype=complex), s=0.0)
    assert np.abs(sn.commute_left(gamma, ident).gamma - gamma.gamma).max() == 0.0
    assert np.abs(sn.commute_right(gamma, ident).gamma - gamma.gamma).max() == 0.0


@pytest.mark.parametrize("qubits", [1, 2])
def test_commute_preserves_spectrum_and_trace(qubits, rng):
    basis = sn.pauli_basis(qubits)
    tensor = sn.structure_tensor(basis)
    n = basis.size
    for trial in range(4):
        gamma_mat = (
            random_psd(rng, n, 0.7)
            if trial % 2 == 0
            else random_hermitian(rng, n, 0.5)  # indefinite is allowed too
        )
        gamma = RateMatrix(gamma_mat)
        sched = random_constant_schedule(rng, n, 1.0)
        m = sn.propagate_m(sched, tensor, 1.0, steps=512)
        left = sn.commute_left(gamma, m)
        right = sn.commute_right(gamma, m)
        assert np.abs(np.sort(left.spectrum()) - np.sort(gamma.spectrum())).max() < 1e-9
        assert np.abs(np.sort(right.spectrum()) - np.sort(gamma.spectrum())).max() < 1e-9
        assert abs(left.strength - gamma.strength) < 1e-10
        assert abs(right.strength - gamma.strength) < 1e-10


def test_commute_right_is_inverse(rng, tensor1):
    gamma = RateMatrix(random_psd(rng, 3, 0.4))
    sched = random_constant_schedule(rng, 3, 0.9)
    m = sn.propagate_m(sched, tensor1, 0.9, steps=512)
    back = sn.commute_right(sn.commute_left(gamma, m), m)
    assert np.abs(back.gamma - gamma.gamma).max() < 1e-10


def test_commute_right_dephasing_spectrum(tensor1):
    gamma = RateMatrix(sn.dephasing(0.5))
    sched = x_drive(1.0, 0.8)
    m = sn.propagate_m(sched, tensor1, 0.8, steps=512)
    moved = sn.commute_right(gamma, m)
    assert np.abs(np.sort(moved.spectrum()) - np.sort([0.0, 0.0, 0.25])).max() < 1e-9


def test_commute_dimension_mismatch(tensor1, rng):
    gamma = RateMatrix(random_psd(rng, 15, 0.3))
    m = sn.propagate_m(x_drive(1.0, 1.0), tensor1, 1.0, steps=64)
    with pytest.raises(ValueError):
        sn.commute_left(gamma, m)


def test_commutator_rate_depolarizing_zero(tensor1):
    omega = sn.omega_of(x_drive(1.0, 1.0), 0.0, tensor1)
    gamma = RateMatrix(sn.depolarizing(0.3, 2))
    assert np.abs(sn.commutator_rate(omega, gamma).gamma).max() < 1e-14


def test_commutator_rate_hermitian(rng, tensor1):
    omega = random_hermitian(rng, 3)
    gamma = RateMatrix(random_hermitian(rng, 3))
    out = sn.commutator_rate(omega, gamma)
    assert np.abs(out.gamma - out.gamma.conj().T).max() < 1e-12


def test_commutator_rate_first_order(rng, tensor1):
    # commute_left at small tau = Gamma + tau*xi[Gamma] + O(tau^2)
    gamma = RateMatrix(random_psd(rng, 3, 0.5))
    sched = random_constant_schedule(rng, 3, 1.0)
    omega = sn.omega_of(sched, 0.0, tensor1)
    xi_g = sn.commutator_rate(omega, gamma).gamma

    def err(tau):
        m = Propagator(m=scipy.linalg.expm(-1j * tau * omega), s=tau)
        moved = sn.commute_left(gamma, m).gamma
        return np.abs(moved - gamma.gamma - tau * xi_g).max()

    ratio = err(2e-3) / err(1e-3)
    assert 3.5 < ratio < 4.5


# -- explicit superoperator matrices -----------------------------------------


def test_vec_unvec_roundtrip(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.abs(unvec(vec(m)) - m).max() == 0.0


def test_superop_building_blocks(pauli1, rng):
    rho = random_psd(rng, 2, 1.0)
    h = random_hermitian(rng, 2)
    got = unvec(hamiltonian_superop(h) @ vec(rho))
    assert np.abs(got - (-1j) * (h @ rho - rho @ h)).max() < 1e-13
    gamma = random_psd(rng, 3, 0.5)
    got = unvec(dissipator_superop(gamma, pauli1.ops) @ vec(rho))
    ref = sn.dissipator_apply(gamma, pauli1, rho)
    assert np.abs(got - ref).max() < 1e-13
    u = scipy.linalg.expm(-1j * random_hermitian(rng, 2))
    got = unvec(conjugation_superop(u) @ vec(rho))
    assert np.abs(got - u @ rho @ u.conj().T).max() < 1e-13


def test_commute_identity_1q_dephasing(pauli1):
    sched = x_drive(0.9, 1.2)
    ok, residual = sn.superop_commute_identity_check(
        sched, RateMatrix(sn.dephasing(0.4)), pauli1, tol=1e-8, steps=512
    )
    assert ok and residual < 1e-8


def test_commute_identity_trivial_op(pauli1):
    sched = sn.zero_hamiltonian(3, 1.0)
    ok, residual = sn.superop_commute_identity_check(
        sched, RateMatrix(sn.dephasing(0.4)), pauli1, tol=1e-10, steps=16
    )
    assert ok and residual < 1e-10


def test_commute_identity_2q_damping_past_zz(pauli2):
    zz = pauli2.index("ZZ")
    sched = sn.HamiltonianSchedule(nbasis=15, terms=((zz, 0.8),), t_op=1.0)
    ok, residual = sn.superop_commute_identity_check(
        sched,
        RateMatrix(sn.damping(0.3, qubits=2, qubit=0)),
        pauli2,
        tol=1e-7,
        steps=512,
    )
    assert ok and residual < 1e-7
