"""Gates as multilinear and quasi-multilinear maps on :class:`TensorState`.

Every application reduces to sweeping a 2x2 matrix along one tensor axis:
for each fixed setting of the other axes the amplitude pair on that axis
is left-multiplied by the matrix (4 complex mults, 2 complex adds).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .opcount import OpCounter
from .state import TensorState, _check_qubit

UNITARY_TOL = 1e-10


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=tol, rtol=0)


@dataclass(frozen=True, eq=False)
class SingleQubitGate:
    """A 2x2 complex matrix, flagged as unitary or not.

    Projector factors such as |0><0| are legitimate gate factors inside
    term sums but must carry ``unitary=False``.
    """

    matrix: np.ndarray
    name: str = ""
    unitary: bool = True

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"single-qubit gate must be 2x2, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("gate matrix has non-finite entries")
        if self.unitary and not is_unitary(m):
            raise ValueError(f"gate {self.name or m.tolist()} is flagged unitary but G^dag G != 1")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, _I))

    def scaled(self, coeff: complex) -> SingleQubitGate:
        if coeff == 1:
            return self
        m = coeff * self.matrix
        return SingleQubitGate(m, f"{coeff}*{self.name}", unitary=is_unitary(m))

    def __matmul__(self, other: SingleQubitGate) -> SingleQubitGate:
        m = self.matrix @ other.matrix
        return SingleQubitGate(m, f"{self.name}{other.name}", unitary=self.unitary and other.unitary)

    def __repr__(self) -> str:
        return f"SingleQubitGate({self.name or self.matrix.tolist()})"


def as_gate(g) -> SingleQubitGate:
    if isinstance(g, SingleQubitGate):
        return g
    m = np.asarray(g, dtype=np.complex128)
    return SingleQubitGate(m, unitary=m.shape == (2, 2) and is_unitary(m))


_I = np.eye(2, dtype=np.complex128)
_S2 = 1 / np.sqrt(2)

_FIXED = {
    "i": (_I, True),
    "x": (np.array([[0, 1], [1, 0]]), True),
    "y": (np.array([[0, -1j], [1j, 0]]), True),
    "z": (np.array([[1, 0], [0, -1]]), True),
    "h": (np.array([[_S2, _S2], [_S2, -_S2]]), True),
    "s": (np.array([[1, 0], [0, 1j]]), True),
    "t": (np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]]), True),
    # rank-1 projectors |0><0| and |1><1|
    "m0": (np.array([[1, 0], [0, 0]]), False),
    "m1": (np.array([[0, 0], [0, 1]]), False),
}


def _rx(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]])


def _rz(t):
    return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]])


_ROTATIONS = {"rx": _rx, "ry": _ry, "rz": _rz}

GATE_NAMES = tuple(_FIXED) + tuple(_ROTATIONS)


class UnknownGateError(ValueError):
    pass


def gate_arity(name: str) -> int:
    key = name.lower()
    if key in _FIXED:
        return 0
    if key in _ROTATIONS:
        return 1
    raise UnknownGateError(f"unknown gate '{name}'")


def gate_library(name: str, *params: float) -> SingleQubitGate:
    """Look up I, X, Y, Z, H, S, T, Rx, Ry, Rz (radians) or projectors M0, M1."""
    key = name.lower()
    arity = gate_arity(name)
    if len(params) != arity:
        raise UnknownGateError(f"gate '{name}' takes {arity} parameter(s), got {len(params)}")
    if key in _FIXED:
        m, unitary = _FIXED[key]
        return SingleQubitGate(m, key.upper(), unitary=unitary)
    theta = float(params[0])
    return SingleQubitGate(_ROTATIONS[key](theta), f"{key.upper()}({theta!r})")


I = gate_library("i")
X = gate_library("x")
Y = gate_library("y")
Z = gate_library("z")
H = gate_library("h")
M0 = gate_library("m0")
M1 = gate_library("m1")


def projector(bit: int) -> SingleQubitGate:
    return M1 if bit else M0


@dataclass(frozen=True)
class GateTerm:
    """An n-tuple (M1, ..., Mn) acting factor-wise on an order-n tensor."""

    factors: tuple[SingleQubitGate, ...]

    def __init__(self, factors: Iterable):
        fs = tuple(as_gate(f) for f in factors)
        if not fs:
            raise ValueError("a gate term needs at least one factor")
        object.__setattr__(self, "factors", fs)

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def unitary(self) -> bool:
        return all(f.unitary for f in self.factors)


@dataclass(frozen=True)
class MultilinearGate:
    """Sum of r gate terms, summed in listed order."""

    terms: tuple[GateTerm, ...]
    unitary: bool = False

    def __init__(self, terms: Iterable[GateTerm], unitary: bool = False):
        ts = tuple(t if isinstance(t, GateTerm) else GateTerm(t) for t in terms)
        if not ts:
            raise ValueError("a multilinear gate needs at least one term")
        widths = {t.n for t in ts}
        if len(widths) != 1:
            raise ValueError(f"all terms must have the same width, got {sorted(widths)}")
        object.__setattr__(self, "terms", ts)
        object.__setattr__(self, "unitary", unitary)
        if unitary and not is_unitary(self._dense()):
            raise ValueError("term sum is flagged unitary but its matrix is not")

    @property
    def n(self) -> int:
        return self.terms[0].n

    @property
    def r(self) -> int:
        return len(self.terms)

    def _dense(self) -> np.ndarray:
        total = 0
        for t in self.terms:
            chain = np.ones((1, 1), dtype=np.complex128)
            for f in t.factors:
                chain = np.kron(chain, f.matrix)
            total = total + chain
        return total


@dataclass(frozen=True)
class QuasiMultilinearGate:
    """Controlled gate: conditions on control qubits plus one target gate.

    ``controls`` holds (qubit, required bit) pairs; indices are 1-based.
    """

    controls: tuple[tuple[int, int], ...]
    target: int
    gate: SingleQubitGate

    def __init__(self, controls: Iterable[tuple[int, int]], target: int, gate):
        ctrl = tuple((int(q), int(b)) for q, b in controls)
        object.__setattr__(self, "controls", ctrl)
        object.__setattr__(self, "target", int(target))
        object.__setattr__(self, "gate", as_gate(gate))
        qubits = [q for q, _ in ctrl]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate control qubit in {ctrl}")
        if self.target in qubits:
            raise ValueError(f"target qubit {self.target} is also a control")
        if any(b not in (0, 1) for _, b in ctrl):
            raise ValueError(f"control bits must be 0 or 1, got {ctrl}")

    def validate(self, n: int) -> None:
        for q in [q for q, _ in self.controls] + [self.target]:
            _check_qubit(n, q)


def _sweep_axis(data: np.ndarray, axis: int, m: np.ndarray, counter: OpCounter | None) -> None:
    """Left-multiply every amplitude pair along ``axis`` by m, in place."""
    view = np.moveaxis(data, axis, 0)
    lo = view[0].copy()
    hi = view[1]
    view[0] = m[0, 0] * lo + m[0, 1] * hi
    view[1] = m[1, 0] * lo + m[1, 1] * hi
    if counter is not None:
        pairs = lo.size
        counter.add(4 * pairs, 2 * pairs)


def _require_unitary(g: SingleQubitGate, unnormalized: bool) -> None:
    if not g.unitary and not unnormalized:
        raise ValueError(f"{g!r} is not unitary; pass unnormalized=True to apply it")


def apply_single(
    s: TensorState,
    qubit: int,
    g,
    *,
    counter: OpCounter | None = None,
    unnormalized: bool = False,
) -> TensorState:
    """Apply a 2x2 gate along the axis of ``qubit`` (2^(n-1) pair updates)."""
    g = as_gate(g)
    _require_unitary(g, unnormalized)
    axis = _check_qubit(s.n, qubit)
    data = s.data.copy()
    _sweep_axis(data, axis, g.matrix, counter)
    return TensorState(data, copy=False)


def apply_term(
    s: TensorState,
    t: GateTerm | Sequence,
    *,
    counter: OpCounter | None = None,
    unnormalized: bool = False,
) -> TensorState:
    """Apply (M1, ..., Mn) as n sequential axis sweeps, k = 1..n.

    Identity factors are swept like any other so the cost of a term is
    always n * 2^(n+1) multiplications.
    """
    if not isinstance(t, GateTerm):
        t = GateTerm(t)
    if t.n != s.n:
        raise ValueError(f"term has {t.n} factors but the state has {s.n} qubits")
    for f in t.factors:
        _require_unitary(f, unnormalized)
    data = s.data.copy()
    for axis, f in enumerate(t.factors):
        _sweep_axis(data, axis, f.matrix, counter)
    return TensorState(data, copy=False)


def apply_multilinear(
    s: TensorState,
    g: MultilinearGate | Sequence,
    *,
    counter: OpCounter | None = None,
) -> TensorState:
    """Sum of apply_term over the terms, accumulated amplitude-wise in order."""
    if not isinstance(g, MultilinearGate):
        g = MultilinearGate(g)
    if g.n != s.n:
        raise ValueError(f"gate acts on {g.n} qubits but the state has {s.n}")
    acc = None
    for t in g.terms:
        part = apply_term(s, t, counter=counter, unnormalized=True).data
        if acc is None:
            acc = part.copy()
        else:
            acc += part
            if counter is not None:
                counter.add(0, part.size)
    return TensorState(acc, copy=False)


def apply_controlled(
    s: TensorState,
    g: QuasiMultilinearGate,
    *,
    counter: OpCounter | None = None,
    unnormalized: bool = False,
) -> TensorState:
    """Apply g.gate along the target axis of the sub-tensor meeting every condition.

    Each control halves the region touched, so 2^(n-1-c) pairs are updated.
    """
    g.validate(s.n)
    _require_unitary(g.gate, unnormalized)
    data = s.data.copy()
    index: list = [slice(None)] * s.n
    for q, b in g.controls:
        index[q - 1] = b
    region = data[tuple(index)]  # basic indexing: a view into data
    target_axis = (g.target - 1) - sum(1 for q, _ in g.controls if q < g.target)
    _sweep_axis(region, target_axis, g.gate.matrix, counter)
    return TensorState(data, copy=False)


def controlled_to_terms(g: QuasiMultilinearGate, n: int | None = None) -> MultilinearGate:
    """Expand a controlled gate into a sum of gate terms.

    One term carries the projector |c_k><c_k| on every control and the gate
    on the target.  The complement is expanded over the 2^c - 1 control
    patterns that violate the condition, each with the identity on the
    target.  For a single control this is the two-term form
    (M_c, G) + (M_c^perp, 1).  Width defaults to the largest qubit index.
    """
    qubits = [q for q, _ in g.controls] + [g.target]
    width = max(qubits) if n is None else n
    g.validate(width)
    required = tuple(b for _, b in g.controls)

    def term(pattern, target_gate):
        factors = [I] * width
        for (q, _), bit in zip(g.controls, pattern):
            factors[q - 1] = projector(bit)
        factors[g.target - 1] = target_gate
        return GateTerm(factors)

    terms = [term(required, g.gate)]
    for pattern in itertools.product((0, 1), repeat=len(g.controls)):
        if pattern != required:
            terms.append(term(pattern, I))
    return MultilinearGate(terms, unitary=g.gate.unitary)


def pauli_rotation(paulis: str, theta: float) -> MultilinearGate:
    """exp(-i theta/2 P1 x ... x Pn) as the two-term sum cos(.)1 - i sin(.)P."""
    ps = [gate_library(p) for p in paulis.lower()]
    n = len(ps)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    first = GateTerm([I.scaled(c)] + [I] * (n - 1))
    second = GateTerm([ps[0].scaled(-1j * s)] + ps[1:])
    return MultilinearGate([first, second], unitary=True)


def swap_terms(n: int = 2, a: int = 1, b: int = 2) -> MultilinearGate:
    """SWAP of qubits a and b as (11 + XX + YY + ZZ) / 2."""
    if a == b:
        raise ValueError("swap needs two distinct qubits")
    terms = []
    for p in (I, X, Y, Z):
        factors = [I] * n
        factors[a - 1] = p
        factors[b - 1] = p
        first = min(a, b) - 1
        factors[first] = factors[first].scaled(0.5)
        terms.append(GateTerm(factors))
    return MultilinearGate(terms, unitary=True)
