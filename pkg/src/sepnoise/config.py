"""Line-oriented experiment configuration.

Grammar
-------
A config file is a sequence of ``[section]`` headers followed by
``key = value`` lines.  ``#`` starts a comment (whole line or trailing),
blank lines are ignored, repeated keys accumulate in order.  Sections:

``[system]``
    ``qubits = K`` (Pauli-string basis) or ``dim = D`` (Gell-Mann basis);
    ``basis = pauli | gell_mann`` overrides the default.

``[hamiltonian]``
    ``term = LABEL : COEFF`` -- a basis label (``X``, ``IZ``, ``l3``, ...)
    and a coefficient, either a number or an expression in ``t``;
    ``t_op = FLOAT`` (required); ``steps = INT`` (optional).

``[noise]``
    ``preset = dephasing : RATE [: QUBIT]``
    ``preset = damping : RATE [: QUBIT]``
    ``preset = depolarizing : ALPHA``
    ``entry = A,B : COEFF`` -- adds ``COEFF`` (number or expression) to the
    rate-matrix entries (A, B) and (B, A); labels are basis labels.

``[op N]`` (one section per gate operation, ordered by ``N``)
    ``term = LABEL : COEFF``; ``duration = FLOAT``;
    ``idle_after = FLOAT`` (default 0).

``[output]``
    ``observables = LABEL LABEL ...``; ``grid = START : STOP : POINTS``;
    ``initial = e0`` or per-qubit tokens like ``z+ x- y+``.

Parsing then printing then parsing is idempotent; ``format_doc`` emits the
canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import channels
from .basis import OperatorBasis, gell_mann_basis, pauli_basis
from .expr import ExprError, parse_expr
from .gates import GateOp, GateSpec
from .lindblad import LindbladGenerator
from .schedule import HamiltonianSchedule, RateSchedule


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass
class ConfigDoc:
    """Raw parsed form: ordered sections of ordered key/value pairs."""

    sections: list[tuple[str, list[tuple[str, str]]]] = field(default_factory=list)

    def section(self, name: str) -> list[tuple[str, str]]:
        for sec, pairs in self.sections:
            if sec == name:
                return pairs
        return []

    def get(self, section: str, key: str, default: str | None = None):
        for k, v in self.section(section):
            if k == key:
                return v
        return default

    def getall(self, section: str, key: str) -> list[str]:
        return [v for k, v in self.section(section) if k == key]


def parse_doc(text: str) -> ConfigDoc:
    doc = ConfigDoc()
    current: list[tuple[str, str]] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = " ".join(line[1:-1].split())
            current = []
            doc.sections.append((name, current))
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = line.split("=", 1)
        if current is None:
            raise ConfigError("key/value outside any [section]", lineno)
        current.append((key.strip(), " ".join(value.split())))
    return doc


def format_doc(doc: ConfigDoc) -> str:
    out = []
    for name, pairs in doc.sections:
        out.append(f"[{name}]")
        for key, value in pairs:
            out.append(f"{key} = {value}")
        out.append("")
    return "\n".join(out)


def _parse_coeff(text: str, lineno_hint: str):
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return parse_expr(text)
    except ExprError as exc:
        raise ConfigError(f"{lineno_hint}: bad coefficient {text!r}: {exc}") from exc


def _split_fields(value: str, n_min: int, n_max: int, what: str):
    parts = [p.strip() for p in value.split(":")]
    if not n_min <= len(parts) <= n_max:
        raise ConfigError(f"{what}: expected {n_min}-{n_max} ':'-fields in {value!r}")
    return parts


@dataclass(frozen=True)
class GateOpConfig:
    terms: tuple[tuple[str, object], ...]
    duration: float
    idle_after: float


@dataclass(frozen=True)
class ExperimentConfig:
    basis: OperatorBasis
    qubits: int | None
    h_terms: tuple[tuple[str, object], ...]
    t_op: float
    steps: int | None
    noise: RateSchedule | None
    gate_ops: tuple[GateOpConfig, ...]
    observables: tuple[str, ...]
    grid: tuple[float, float, int] | None
    initial: str

    def hamiltonian_schedule(self, t_op: float | None = None) -> HamiltonianSchedule:
        terms = tuple(
            (self.basis.index(label), coeff) for label, coeff in self.h_terms
        )
        return HamiltonianSchedule(
            nbasis=self.basis.size, terms=terms, t_op=t_op or self.t_op
        )

    def generator(
        self, t_op: float | None = None, noise_scale: float | None = None
    ) -> LindbladGenerator:
        if self.noise is None:
            raise ConfigError("config has no [noise] section")
        noise = self.noise
        if noise_scale is not None:
            noise = noise.scaled(noise_scale)
        return LindbladGenerator(
            schedule=self.hamiltonian_schedule(t_op), noise=noise, basis=self.basis
        )

    def gate_spec(self, noise_scale: float | None = None) -> GateSpec:
        if not self.gate_ops:
            raise ConfigError("config has no [op N] sections")
        if self.noise is None:
            raise ConfigError("gate compilation needs a [noise] section")
        noise = self.noise
        if noise_scale is not None:
            noise = noise.scaled(noise_scale)
        ops = []
        idles = []
        for op in self.gate_ops:
            terms = tuple(
                (self.basis.index(label), coeff) for label, coeff in op.terms
            )
            ops.append(
                GateOp(
                    schedule=HamiltonianSchedule(
                        nbasis=self.basis.size, terms=terms, t_op=op.duration
                    )
                )
            )
            idles.append(op.idle_after)
        return GateSpec(
            ops=tuple(ops),
            idles=tuple(idles),
            hardware_noise=noise,
            basis=self.basis,
        )

    def initial_state(self) -> np.ndarray:
        return _initial_state(self.initial, self.basis.dim, self.qubits)


_QUBIT_TOKENS = {
    "z+": np.array([1.0, 0.0], dtype=np.complex128),
    "z-": np.array([0.0, 1.0], dtype=np.complex128),
    "x+": np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2),
    "x-": np.array([1.0, -1.0], dtype=np.complex128) / np.sqrt(2),
    "y+": np.array([1.0, 1.0j], dtype=np.complex128) / np.sqrt(2),
    "y-": np.array([1.0, -1.0j], dtype=np.complex128) / np.sqrt(2),
}


def _initial_state(spec: str, dim: int, qubits: int | None) -> np.ndarray:
    spec = spec.strip().lower()
    if spec.startswith("e"):
        k = int(spec[1:])
        if not 0 <= k < dim:
            raise ConfigError(f"initial state index {k} out of range")
        rho = np.zeros((dim, dim), dtype=np.complex128)
        rho[k, k] = 1.0
        return rho
    tokens = spec.split()
    if qubits is None or len(tokens) != qubits:
        raise ConfigError(f"initial state {spec!r} does not match the system")
    psi = np.ones(1, dtype=np.complex128)
    for tok in tokens:
        if tok not in _QUBIT_TOKENS:
            raise ConfigError(f"unknown initial-state token {tok!r}")
        psi = np.kron(psi, _QUBIT_TOKENS[tok])
    return np.outer(psi, psi.conj())


def _build_noise(doc: ConfigDoc, basis: OperatorBasis, qubits: int | None):
    terms = []
    n = basis.size
    for value in doc.getall("noise", "preset"):
        parts = _split_fields(value, 2, 3, "noise preset")
        kind = parts[0]
        rate = float(parts[1])
        qubit = int(parts[2]) if len(parts) == 3 else 0
        if kind in ("dephasing", "damping") and qubits is None:
            raise ConfigError(f"{kind} preset requires a qubit system")
        if kind == "dephasing":
            mat = channels.dephasing(rate, qubits=qubits, qubit=qubit)
        elif kind == "damping":
            mat = channels.damping(rate, qubits=qubits, qubit=qubit)
        elif kind == "depolarizing":
            mat = channels.depolarizing(rate, dim=basis.dim)
        else:
            raise ConfigError(f"unknown noise preset {kind!r}")
        terms.append((1.0, mat))
    for value in doc.getall("noise", "entry"):
        parts = _split_fields(value, 2, 2, "noise entry")
        labels = [p.strip() for p in parts[0].split(",")]
        if len(labels) != 2:
            raise ConfigError(f"noise entry needs 'A,B : coeff', got {value!r}")
        try:
            a, b = basis.index(labels[0]), basis.index(labels[1])
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        coeff = _parse_coeff(parts[1], "noise entry")
        mat = np.zeros((n, n), dtype=np.complex128)
        mat[a, b] = 1.0
        mat[b, a] = 1.0
        if a == b:
            mat[a, b] = 1.0
        terms.append((coeff, mat))
    if not terms:
        return None
    return RateSchedule(terms=tuple(terms))


def _parse_terms(pairs, basis: OperatorBasis, what: str):
    terms = []
    for key, value in pairs:
        if key != "term":
            continue
        parts = _split_fields(value, 2, 2, f"{what} term")
        label = parts[0]
        try:
            basis.index(label)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        terms.append((label, _parse_coeff(parts[1], f"{what} term")))
    return tuple(terms)


def experiment_from_doc(doc: ConfigDoc) -> ExperimentConfig:
    qubits_s = doc.get("system", "qubits")
    dim_s = doc.get("system", "dim")
    if (qubits_s is None) == (dim_s is None):
        raise ConfigError("[system] needs exactly one of 'qubits' or 'dim'")
    if qubits_s is not None:
        qubits = int(qubits_s)
        basis_kind = doc.get("system", "basis", "pauli")
    else:
        qubits = None
        basis_kind = doc.get("system", "basis", "gell_mann")
    if basis_kind == "pauli":
        if qubits is None:
            raise ConfigError("the pauli basis requires 'qubits'")
        basis = pauli_basis(qubits)
    elif basis_kind == "gell_mann":
        basis = gell_mann_basis(int(dim_s) if dim_s else 2**qubits)
    else:
        raise ConfigError(f"unknown basis {basis_kind!r}")

    h_terms = _parse_terms(doc.section("hamiltonian"), basis, "hamiltonian")
    t_op_s = doc.get("hamiltonian", "t_op")
    if t_op_s is None and not any(
        name.startswith("op ") for name, _ in doc.sections
    ):
        raise ConfigError("[hamiltonian] t_op is required")
    t_op = float(t_op_s) if t_op_s is not None else 1.0
    steps_s = doc.get("hamiltonian", "steps")
    steps = int(steps_s) if steps_s is not None else None

    noise = _build_noise(doc, basis, qubits)

    op_sections = []
    for name, pairs in doc.sections:
        if name.startswith("op "):
            try:
                number = int(name[3:])
            except ValueError:
                raise ConfigError(f"bad gate section name [{name}]") from None
            op_sections.append((number, pairs))
    op_sections.sort(key=lambda item: item[0])
    gate_ops = []
    for number, pairs in op_sections:
        duration_s = dict(pairs).get("duration")
        if duration_s is None:
            raise ConfigError(f"[op {number}] needs a duration")
        gate_ops.append(
            GateOpConfig(
                terms=_parse_terms(pairs, basis, f"op {number}"),
                duration=float(duration_s),
                idle_after=float(dict(pairs).get("idle_after", "0")),
            )
        )

    observables = tuple(doc.get("output", "observables", "").split())
    for label in observables:
        try:
            basis.index(label)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
    grid_s = doc.get("output", "grid")
    grid = None
    if grid_s is not None:
        parts = _split_fields(grid_s, 3, 3, "output grid")
        grid = (float(parts[0]), float(parts[1]), int(parts[2]))
        if grid[2] < 2 or grid[1] <= grid[0]:
            raise ConfigError(f"bad grid {grid_s!r}")
    initial = doc.get("output", "initial", "e0")

    return ExperimentConfig(
        basis=basis,
        qubits=qubits,
        h_terms=h_terms,
        t_op=t_op,
        steps=steps,
        noise=noise,
        gate_ops=tuple(gate_ops),
        observables=observables,
        grid=grid,
        initial=initial,
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return experiment_from_doc(parse_doc(text))
