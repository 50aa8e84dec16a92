import numpy as np
import pytest

import sepnoise as sn
from sepnoise.basis import PAULI_1Q


def gram(basis):
    return np.einsum("mij,nij->mn", basis.ops.conj(), basis.ops) / basis.dim


def test_pauli_1q_elements(pauli1):
    assert pauli1.names == ("X", "Y", "Z")
    assert np.array_equal(pauli1.ops[0], PAULI_1Q["X"])
    assert np.array_equal(pauli1.ops[1], PAULI_1Q["Y"])
    assert np.array_equal(pauli1.ops[2], PAULI_1Q["Z"])
    assert np.abs(gram(pauli1) - np.eye(3)).max() == 0.0


def test_pauli_traceless(pauli1):
    assert abs(np.trace(pauli1.ops[0])) == 0.0


def test_pauli_2q_enumeration(pauli2):
    assert pauli2.size == 15
    assert pauli2.names[0] == "IX"
    assert pauli2.names[-1] == "ZZ"
    assert np.abs(gram(pauli2) - np.eye(15)).max() < 1e-15


def test_pauli_index(pauli2):
    for i, name in enumerate(pauli2.names):
        assert sn.pauli_index(name) == i
    with pytest.raises(ValueError):
        sn.pauli_index("II")


def test_gell_mann_d2_matches_pauli(pauli1):
    g2 = sn.gell_mann_basis(2)
    assert np.abs(g2.ops - pauli1.ops).max() == 0.0


def test_gell_mann_d3_diagonals():
    g3 = sn.gell_mann_basis(3)
    scale = np.sqrt(3 / 2)
    lam3 = np.diag([1.0, -1.0, 0.0])
    lam8 = np.diag([1.0, 1.0, -2.0]) / np.sqrt(3)
    assert np.abs(g3.ops[2] - scale * lam3).max() < 1e-15
    assert np.abs(g3.ops[7] - scale * lam8).max() < 1e-15


def test_gell_mann_d3_orthonormal():
    g3 = sn.gell_mann_basis(3)
    assert np.abs(gram(g3) - np.eye(8)).max() < 1e-12


@pytest.mark.parametrize("dim", [2, 3, 4, 5, 6, 7, 8])
def test_gell_mann_valid_up_to_d8(dim):
    basis = sn.gell_mann_basis(dim)
    assert basis.size == dim * dim - 1
    assert np.abs(np.einsum("nii->n", basis.ops)).max() < 1e-12
    assert np.abs(gram(basis) - np.eye(basis.size)).max() < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
def test_pauli_valid_up_to_3_qubits(k):
    basis = sn.pauli_basis(k)
    assert basis.size == 4**k - 1
    assert np.abs(np.einsum("nii->n", basis.ops)).max() < 1e-12
    assert np.abs(gram(basis) - np.eye(basis.size)).max() < 1e-12


def test_invalid_arguments():
    with pytest.raises(ValueError):
        sn.pauli_basis(0)
    with pytest.raises(ValueError):
        sn.gell_mann_basis(1)


def test_frobenius_examples(pauli1):
    x, y, z = pauli1.ops
    assert sn.frobenius_inner(x, x, 2) == pytest.approx(1.0)
    assert sn.frobenius_inner(x, y, 2) == pytest.approx(0.0)
    # XY = iZ, so <<Z || XY>> = i
    assert sn.frobenius_inner(z, x @ y, 2) == pytest.approx(1j)


def test_frobenius_shape_mismatch(pauli1):
    with pytest.raises(ValueError):
        sn.frobenius_inner(pauli1.ops[0], np.eye(3), 2)


def test_structure_tensor_ad_x_element(tensor1):
    # [X, Y] = 2iZ, so the adjoint matrix of X couples Z <- Y with 2i
    assert tensor1.omega_p[0][2, 1] == pytest.approx(2j)
    assert tensor1.omega_p[0][1, 2] == pytest.approx(-2j)


def test_structure_tensor_real_antisymmetric(tensor1, tensor2):
    for tensor in (tensor1, tensor2):
        g = tensor.g
        assert np.abs(g.imag).max() < 1e-12
        assert np.abs(g + np.transpose(g, (1, 0, 2))).max() < 1e-12
        assert np.abs(g + np.transpose(g, (0, 2, 1))).max() < 1e-12


def test_structure_tensor_diagonal_zero(tensor2):
    n = tensor2.g.shape[0]
    for p in range(0, n, 4):
        assert np.abs(np.diagonal(tensor2.g[p])).max() < 1e-12


def test_omega_p_reproduces_inner_products(pauli2, tensor2, rng):
    ops = pauli2.ops
    for _ in range(20):
        p, m, n = rng.integers(0, 15, size=3)
        comm = ops[p] @ ops[n] - ops[n] @ ops[p]
        expected = np.trace(ops[m].conj().T @ comm) / pauli2.dim
        assert tensor2.omega_p[p][m, n] == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2])
def test_adjoint_closure_roundtrip(k, rng):
    # commutators of basis elements stay inside the traceless span
    basis = sn.pauli_basis(k)
    ops = basis.ops
    idx = range(basis.size) if k == 1 else rng.integers(0, 15, size=(8, 2))
    pairs = [(p, n) for p in range(basis.size) for n in range(basis.size)] \
        if k == 1 else [tuple(row) for row in idx]
    for p, n in pairs:
        comm = ops[p] @ ops[n] - ops[n] @ ops[p]
        coeffs = np.einsum("mij,ij->m", ops.conj(), comm) / basis.dim
        rebuilt = np.einsum("m,mij->ij", coeffs, ops)
        assert np.abs(rebuilt - comm).max() < 1e-10


def test_custom_basis_non_hermitian():
    sp = np.sqrt(2) * np.array([[0, 1], [0, 0]], dtype=complex)
    sm = sp.conj().T
    z = PAULI_1Q["Z"]
    basis = sn.custom_basis([sp, sm, z], 2)
    assert basis.label == "custom"
    tensor = sn.structure_tensor(basis)  # no antisymmetry assertion here
    assert tensor.g.shape == (3, 3, 3)


def test_custom_basis_rejects_non_orthonormal():
    x = PAULI_1Q["X"]
    with pytest.raises(ValueError):
        sn.custom_basis([x, x, PAULI_1Q["Z"]], 2)
