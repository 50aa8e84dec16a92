import numpy as np
import pytest

import sepnoise as sn


@pytest.fixture(scope="session")
def pauli1():
    return sn.pauli_basis(1)


@pytest.fixture(scope="session")
def pauli2():
    return sn.pauli_basis(2)


@pytest.fixture(scope="session")
def tensor1(pauli1):
    return sn.structure_tensor(pauli1)


@pytest.fixture(scope="session")
def tensor2(pauli2):
    return sn.structure_tensor(pauli2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_psd(rng, n, strength):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    g = m @ m.conj().T
    return strength * g / np.trace(g).real


def random_hermitian(rng, n, scale=1.0):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (m + m.conj().T)
