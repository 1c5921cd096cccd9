"""Separability diagnostics for states and gates.

States: unfoldings across a bipartition, Schmidt ranks and decompositions,
and the three-qubit entanglement class (product / biproduct / W / GHZ).
Gates: realignment of a gate matrix so that product gates A kron B become
rank-1 matrices, and the operator-Schmidt decomposition obtained from it.

Exact CP rank is not computed for more than three qubits; the largest
unfolding rank is reported instead and is a lower bound on it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .linalg import jacobi_svd, numerical_rank
from .state import TensorState

RANK_TOL = 1e-9
HYPERDET_TOL = 1e-10


@dataclass(frozen=True)
class Bipartition:
    left: tuple[int, ...]
    right: tuple[int, ...]

    @classmethod
    def of(cls, left: Iterable[int], n: int) -> Bipartition:
        lhs = tuple(sorted(int(q) for q in left))
        if len(set(lhs)) != len(lhs):
            raise ValueError(f"repeated qubit in bipartition {lhs}")
        if not lhs or len(lhs) >= n:
            raise ValueError(f"left side must be a nonempty proper subset of 1..{n}, got {lhs}")
        if lhs[0] < 1 or lhs[-1] > n:
            raise ValueError(f"bipartition {lhs} out of range 1..{n}")
        rhs = tuple(q for q in range(1, n + 1) if q not in lhs)
        return cls(lhs, rhs)

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    def swapped(self) -> Bipartition:
        return Bipartition(self.right, self.left)


def all_bipartitions(n: int) -> list[Bipartition]:
    """Every unordered split of 1..n, listed once with qubit 1 on the left."""
    out = []
    rest = range(2, n + 1)
    for k in range(0, n - 1):
        for combo in itertools.combinations(rest, k):
            out.append(Bipartition.of((1,) + combo, n))
    return out


def _as_bipartition(p, n: int) -> Bipartition:
    if isinstance(p, Bipartition):
        if p.n != n or sorted(p.left + p.right) != list(range(1, n + 1)):
            raise ValueError(f"bipartition {p} does not cover 1..{n}")
        return p
    return Bipartition.of(p, n)


def mode_unfolding(s: TensorState, p: Bipartition | Sequence[int]) -> np.ndarray:
    """Matrix with rows indexed by the left qubits and columns by the right.

    Both sides are flattened most-significant-first in ascending qubit order.
    """
    p = _as_bipartition(p, s.n)
    perm = [q - 1 for q in p.left] + [q - 1 for q in p.right]
    return np.transpose(s.data, perm).reshape(2 ** len(p.left), 2 ** len(p.right))


def schmidt_coefficients(s: TensorState, p) -> np.ndarray:
    return jacobi_svd(mode_unfolding(s, p))[1]


def schmidt_rank(s: TensorState, p, tol: float = RANK_TOL) -> int:
    """Number of Schmidt coefficients above tol * (largest coefficient)."""
    return numerical_rank(schmidt_coefficients(s, p), tol)


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_vectors: np.ndarray   # columns, 2^|left| entries each
    right_vectors: np.ndarray  # columns, 2^|right| entries each
    partition: Bipartition

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def reconstruct(self) -> TensorState:
        p = self.partition
        mat = (self.left_vectors * self.coefficients) @ self.right_vectors.T
        perm = [q - 1 for q in p.left] + [q - 1 for q in p.right]
        data = np.transpose(mat.reshape((2,) * p.n), np.argsort(perm))
        return TensorState(data)


def schmidt_decompose(s: TensorState, p, tol: float = RANK_TOL) -> SchmidtDecomposition:
    p = _as_bipartition(p, s.n)
    u, sv, vh = jacobi_svd(mode_unfolding(s, p))
    k = max(numerical_rank(sv, tol), 1)
    return SchmidtDecomposition(sv[:k].copy(), u[:, :k].copy(), vh[:k].T.copy(), p)


def unfolding_ranks(s: TensorState, tol: float = RANK_TOL,
                    partitions: Iterable[Bipartition] | None = None) -> list[tuple[Bipartition, int]]:
    parts = all_bipartitions(s.n) if partitions is None else partitions
    return [(p, schmidt_rank(s, p, tol)) for p in parts]


def max_unfolding_rank(s: TensorState, tol: float = RANK_TOL) -> int:
    """Largest Schmidt rank over all bipartitions; a lower bound on CP rank."""
    if s.n == 1:
        return 1 if s.norm() > 0 else 0
    return max(r for _, r in unfolding_ranks(s, tol))


def cayley_hyperdeterminant(s: TensorState) -> complex:
    """Degree-4 Cayley hyperdeterminant of a 2x2x2 amplitude tensor."""
    if s.n != 3:
        raise ValueError(f"hyperdeterminant is defined here for 3 qubits, got {s.n}")
    a = s.data
    a000, a001, a010, a011 = a[0, 0, 0], a[0, 0, 1], a[0, 1, 0], a[0, 1, 1]
    a100, a101, a110, a111 = a[1, 0, 0], a[1, 0, 1], a[1, 1, 0], a[1, 1, 1]
    squares = (a000**2 * a111**2 + a001**2 * a110**2
               + a010**2 * a101**2 + a100**2 * a011**2)
    pairs = (a000 * a111 * a011 * a100 + a000 * a111 * a101 * a010
             + a000 * a111 * a110 * a001 + a011 * a100 * a101 * a010
             + a011 * a100 * a110 * a001 + a101 * a010 * a110 * a001)
    quads = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return complex(squares - 2 * pairs + 4 * quads)


class ThreeQubitClass(NamedTuple):
    kind: str  # PRODUCT, BIPRODUCT, W or GHZ
    qubit: int | None = None  # the separable qubit of a biproduct state

    def __str__(self) -> str:
        return f"BIPRODUCT({self.qubit})" if self.kind == "BIPRODUCT" else self.kind


def three_qubit_class(s: TensorState, tol: float = HYPERDET_TOL, rank_tol: float = RANK_TOL) -> ThreeQubitClass:
    if s.n != 3:
        raise ValueError(f"three-qubit classification needs n = 3, got {s.n}")
    single = [schmidt_rank(s, [k], rank_tol) for k in (1, 2, 3)]
    separable = [k for k, r in zip((1, 2, 3), single) if r == 1]
    if len(separable) == 3:
        return ThreeQubitClass("PRODUCT")
    if len(separable) == 1:
        return ThreeQubitClass("BIPRODUCT", separable[0])
    if abs(cayley_hyperdeterminant(s)) > tol:
        return ThreeQubitClass("GHZ")
    return ThreeQubitClass("W")


def _realign(m: np.ndarray, p: Bipartition) -> np.ndarray:
    n = p.n
    t = m.reshape((2,) * (2 * n))
    rows_l = [q - 1 for q in p.left]
    rows_r = [q - 1 for q in p.right]
    perm = rows_l + [n + a for a in rows_l] + rows_r + [n + a for a in rows_r]
    return np.transpose(t, perm).reshape(4 ** len(p.left), 4 ** len(p.right))


def _gate_width(m: np.ndarray) -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 4 or m.shape[0] & (m.shape[0] - 1):
        raise ValueError(f"expected a 2^n x 2^n matrix with n >= 2, got shape {m.shape}")
    return m.shape[0].bit_length() - 1


def gate_realignment(m: np.ndarray) -> np.ndarray:
    """Rearrange a two-qubit gate so that A kron B maps to vec(A) vec(B)^T.

    vec is row-major, so R[(i1, j1), (i2, j2)] = m[(i1, i2), (j1, j2)].
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError(f"gate realignment expects a 4x4 matrix, got {m.shape}")
    return _realign(m, Bipartition((1,), (2,)))


def realignment_rank(m: np.ndarray, p=None, tol: float = RANK_TOL) -> int:
    m = np.asarray(m, dtype=np.complex128)
    n = _gate_width(m)
    p = Bipartition.of([1], n) if p is None else _as_bipartition(p, n)
    return numerical_rank(jacobi_svd(_realign(m, p))[1], tol)


@dataclass(frozen=True)
class OperatorSchmidt:
    coefficients: np.ndarray
    factor_pairs: tuple[tuple[np.ndarray, np.ndarray], ...]
    partition: Bipartition

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def reconstruct(self) -> np.ndarray:
        """Sum of c_i A_i (left qubits) kron B_i (right qubits), in qubit order."""
        p = self.partition
        n = p.n
        dim = 2**n
        total = np.zeros((dim, dim), dtype=np.complex128)
        for c, (a, b) in zip(self.coefficients, self.factor_pairs):
            total += c * np.kron(a, b)
        # rows/cols are currently ordered (left qubits, right qubits)
        order = [q - 1 for q in p.left] + [q - 1 for q in p.right]
        inv = list(np.argsort(order))
        t = total.reshape((2,) * (2 * n))
        t = np.transpose(t, inv + [n + a for a in inv])
        return t.reshape(dim, dim)


def operator_schmidt(m: np.ndarray, p=None, tol: float = RANK_TOL) -> OperatorSchmidt:
    """Minimal sum of Kronecker products across the bipartition p."""
    m = np.asarray(m, dtype=np.complex128)
    n = _gate_width(m)
    p = Bipartition.of([1], n) if p is None else _as_bipartition(p, n)
    u, sv, vh = jacobi_svd(_realign(m, p))
    k = max(numerical_rank(sv, tol), 1)
    dl, dr = 2 ** len(p.left), 2 ** len(p.right)
    pairs = tuple((u[:, i].reshape(dl, dl), vh[i].reshape(dr, dr)) for i in range(k))
    return OperatorSchmidt(sv[:k].copy(), pairs, p)
