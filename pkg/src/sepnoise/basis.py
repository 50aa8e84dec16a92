"""Traceless operator bases and the structure tensor of their commutator algebra.

Every superoperator matrix in this package is expressed with respect to an
ordered basis ``{A_n}`` of traceless operators on a ``dim``-dimensional
Hilbert space, orthonormal under the scaled Frobenius product
``<<A|B>> = Tr[A^dag B] / dim``.  Two families are generated here:

* ``pauli_basis(k)`` -- all non-identity Pauli strings on ``k`` qubits, in
  lexicographic order over the per-qubit symbols ``I < X < Y < Z``.
* ``gell_mann_basis(dim)`` -- generalized Gell-Mann matrices rescaled to be
  orthonormal under the same product.  For ``dim = 3`` the ordering matches
  the conventional ``lambda_1 .. lambda_8`` numbering, and for ``dim = 2``
  it reduces to ``[X, Y, Z]``.

The ordering of a basis is part of its contract: rate matrices are plain
arrays indexed by basis position, so reordering the basis silently permutes
every rate matrix expressed in it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

TRACELESS_TOL = 1e-12
ORTHONORMAL_TOL = 1e-12

PAULI_1Q = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
}

_PAULI_ORDER = "IXYZ"


def frobenius_inner(a: np.ndarray, b: np.ndarray, dim: int) -> complex:
    """Scaled Frobenius inner product ``Tr[a^dag b] / dim``.

    Raises ``ValueError`` if either operand is not ``dim x dim``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != (dim, dim) or b.shape != (dim, dim):
        raise ValueError(
            f"operands must be {dim}x{dim}, got {a.shape} and {b.shape}"
        )
    return complex(np.einsum("ij,ij->", a.conj(), b)) / dim


@dataclass(frozen=True)
class OperatorBasis:
    """Ordered, validated basis of the traceless-operator space.

    Attributes
    ----------
    dim : Hilbert-space dimension.
    ops : complex array of shape ``(dim**2 - 1, dim, dim)``.
    label : family tag, one of ``pauli``, ``gell_mann``, ``custom``.
    names : per-element labels (Pauli strings such as ``"IX"``, or
        ``"l1" .. "lN"`` for the Gell-Mann family), used by the config layer.
    """

    dim: int
    ops: np.ndarray
    label: str
    names: tuple[str, ...]

    def __post_init__(self):
        n_expected = self.dim * self.dim - 1
        ops = np.asarray(self.ops, dtype=np.complex128)
        if ops.shape != (n_expected, self.dim, self.dim):
            raise ValueError(
                f"expected {n_expected} operators of shape "
                f"({self.dim},{self.dim}), got array of shape {ops.shape}"
            )
        if len(self.names) != n_expected:
            raise ValueError("one name per basis element required")
        traces = np.einsum("nii->n", ops)
        if np.abs(traces).max() > TRACELESS_TOL:
            raise ValueError("basis elements must be traceless")
        gram = np.einsum("mij,nij->mn", ops.conj(), ops) / self.dim
        if np.abs(gram - np.eye(n_expected)).max() > ORTHONORMAL_TOL:
            raise ValueError("basis is not orthonormal under Tr[a^dag b]/dim")
        object.__setattr__(self, "ops", ops)

    @property
    def size(self) -> int:
        """Number of basis elements, ``dim**2 - 1``."""
        return self.dim * self.dim - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown basis label {name!r}") from None


@dataclass(frozen=True)
class StructureTensor:
    """Commutator structure tensor of a basis.

    ``g[p, m, n] = i * Tr[A_m^dag [A_p, A_n]] / dim`` and
    ``omega_p[p] = -i * g[p]`` is the matrix of the adjoint action
    ``[A_p, .]`` restricted to the traceless space.  For the Hermitian
    families ``g`` is real and totally antisymmetric.
    """

    g: np.ndarray
    omega_p: np.ndarray


def pauli_string(name: str) -> np.ndarray:
    """Dense matrix of a Pauli string such as ``"IXZ"``."""
    mats = [PAULI_1Q[c] for c in name]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def pauli_index(name: str) -> int:
    """Position of a non-identity Pauli string in ``pauli_basis(len(name))``."""
    value = 0
    for c in name:
        value = 4 * value + _PAULI_ORDER.index(c)
    if value == 0:
        raise ValueError("the identity string is not a basis element")
    return value - 1


def pauli_basis(k: int) -> OperatorBasis:
    """All 4**k - 1 non-identity Pauli strings on ``k`` qubits.

    Lexicographic order over per-qubit symbols ``I < X < Y < Z``; each
    string is already orthonormal under the scaled Frobenius product.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"qubit count must be a positive integer, got {k!r}")
    names = []
    mats = []
    for symbols in itertools.product(_PAULI_ORDER, repeat=k):
        name = "".join(symbols)
        if set(name) == {"I"}:
            continue
        names.append(name)
        mats.append(pauli_string(name))
    return OperatorBasis(
        dim=2**k, ops=np.array(mats), label="pauli", names=tuple(names)
    )


def _gell_mann_raw(dim: int):
    # Conventional su(dim) generator ordering: for each m = 2..dim emit the
    # symmetric and antisymmetric pair for every j < m, then the (m-1)-th
    # diagonal generator.  Reproduces lambda_1..lambda_8 at dim = 3.
    for m in range(2, dim + 1):
        for j in range(1, m):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[j - 1, m - 1] = 1.0
            sym[m - 1, j - 1] = 1.0
            yield sym
            asym = np.zeros((dim, dim), dtype=np.complex128)
            asym[j - 1, m - 1] = -1.0j
            asym[m - 1, j - 1] = 1.0j
            yield asym
        kk = m - 1
        diag = np.zeros(dim, dtype=np.complex128)
        diag[:kk] = 1.0
        diag[kk] = -kk
        yield np.sqrt(2.0 / (kk * (kk + 1))) * np.diag(diag)


def gell_mann_basis(dim: int) -> OperatorBasis:
    """Generalized Gell-Mann matrices rescaled by ``sqrt(dim/2)``.

    The rescaling turns the conventional normalization
    ``Tr[lambda_a lambda_b] = 2 delta_ab`` into orthonormality under
    ``Tr[a^dag b]/dim``.
    """
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {dim!r}")
    scale = np.sqrt(dim / 2.0)
    mats = np.array([scale * m for m in _gell_mann_raw(dim)])
    names = tuple(f"l{i + 1}" for i in range(dim * dim - 1))
    return OperatorBasis(dim=dim, ops=mats, label="gell_mann", names=names)


def custom_basis(ops, dim: int, names=None) -> OperatorBasis:
    """Wrap user-supplied operators; validates count, trace, orthonormality.

    Non-Hermitian elements are accepted -- only orthonormality and
    tracelessness are enforced, and the structure tensor of such a basis is
    not checked for antisymmetry.
    """
    ops = np.asarray(ops, dtype=np.complex128)
    if names is None:
        names = tuple(f"b{i}" for i in range(ops.shape[0]))
    return OperatorBasis(dim=dim, ops=ops, label="custom", names=tuple(names))


def structure_tensor(basis: OperatorBasis) -> StructureTensor:
    """Structure tensor ``g`` and adjoint-action matrices of a basis.

    For the built-in Hermitian families the tensor is checked to be real
    and totally antisymmetric (tolerance ``1e-12``); custom bases skip the
    antisymmetry check.
    """
    ops = basis.ops
    comm = np.einsum("pab,nbc->pnac", ops, ops) - np.einsum(
        "nab,pbc->pnac", ops, ops
    )
    g = 1.0j * np.einsum("mij,pnij->pmn", ops.conj(), comm) / basis.dim
    if basis.label != "custom":
        if np.abs(g.imag).max() > TRACELESS_TOL:
            raise ValueError("structure tensor of a Hermitian basis must be real")
        if (
            np.abs(g + np.transpose(g, (1, 0, 2))).max() > TRACELESS_TOL
            or np.abs(g + np.transpose(g, (0, 2, 1))).max() > TRACELESS_TOL
        ):
            raise ValueError("structure tensor must be totally antisymmetric")
    return StructureTensor(g=g, omega_p=-1.0j * g)
