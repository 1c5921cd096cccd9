"""n-qubit states stored as order-n tensors of shape (2, 2, ..., 2).

Qubits are 1-indexed in the public API.  Axis k-1 of the underlying array
holds qubit k, so row-major flattening gives the linear index

    L = q1 * 2**(n-1) + q2 * 2**(n-2) + ... + qn

which is the ordering produced by Kronecker products of single-qubit
column vectors (|01> = (1,0) kron (0,1) = (0,1,0,0)).
"""
from __future__ import annotations

import json
from typing import Sequence

import numpy as np

NORM_TOL = 1e-10
DEFAULT_TOL = 1e-12


class TensorState:
    """Amplitudes of an n-qubit register as an order-n hypermatrix.

    The array is frozen after construction; operations return new states.
    Instances need not be normalized (tensor slices are not), but every
    amplitude must be finite.
    """

    __slots__ = ("_data",)

    def __init__(self, data: np.ndarray, *, copy: bool = True):
        arr = np.array(data, dtype=np.complex128, copy=copy)
        if arr.ndim < 1 or any(d != 2 for d in arr.shape):
            raise ValueError(f"state tensor must have shape (2,)*n with n >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("state contains NaN or Inf amplitudes")
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def from_kron_vector(cls, vec: Sequence[complex] | np.ndarray) -> TensorState:
        v = np.asarray(vec, dtype=np.complex128)
        if v.ndim != 1 or v.size < 2 or v.size & (v.size - 1):
            raise ValueError(f"vector length must be a power of two >= 2, got {v.size}")
        n = v.size.bit_length() - 1
        return cls(v.reshape((2,) * n))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def n(self) -> int:
        return self._data.ndim

    def to_kron_vector(self) -> np.ndarray:
        return self._data.reshape(-1).copy()

    def norm(self) -> float:
        return float(np.linalg.norm(self._data.reshape(-1)))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> TensorState:
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero tensor")
        return TensorState(self._data / nrm, copy=False)

    def __getitem__(self, bits: Sequence[int]) -> complex:
        return complex(self._data[tuple(bits)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorState):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._data, other._data))

    def __repr__(self) -> str:
        return f"TensorState(n={self.n}, amps={np.array2string(self.to_kron_vector(), precision=4)})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "amps": [[float(a.real), float(a.imag)] for a in self._data.reshape(-1)],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> TensorState:
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            n = int(obj["n"])
            amps = [complex(float(re), float(im)) for re, im in obj["amps"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed state JSON: {exc}") from exc
        if len(amps) != 2**n:
            raise ValueError(f"state JSON declares n={n} but has {len(amps)} amplitudes")
        return cls.from_kron_vector(amps)


def _check_qubit(n: int, qubit: int) -> int:
    if not isinstance(qubit, (int, np.integer)) or not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")
    return int(qubit) - 1


def basis_state(n: int, idx: Sequence[int]) -> TensorState:
    """Computational basis state |q1 ... qn>."""
    if n < 1:
        raise ValueError("a state needs at least one qubit")
    bits = tuple(int(b) for b in idx)
    if len(bits) != n:
        raise ValueError(f"multi-index has length {len(bits)}, expected {n}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"multi-index entries must be 0 or 1, got {bits}")
    data = np.zeros((2,) * n, dtype=np.complex128)
    data[bits] = 1.0
    return TensorState(data, copy=False)


def qubit_state(alpha: complex, beta: complex) -> TensorState:
    """Single-qubit state alpha|0> + beta|1> (not renormalized)."""
    return TensorState(np.array([alpha, beta], dtype=np.complex128), copy=False)


def tensor_product(a: TensorState, b: TensorState) -> TensorState:
    """Order n_a + n_b state with amplitude a[i] * b[j] at index (i, j)."""
    return TensorState(np.multiply.outer(a.data, b.data), copy=False)


def product_state(*factors: TensorState) -> TensorState:
    if not factors:
        raise ValueError("product_state needs at least one factor")
    out = factors[0]
    for f in factors[1:]:
        out = tensor_product(out, f)
    return out


def slice_state(s: TensorState, qubit: int, bit: int) -> TensorState:
    """Sub-tensor of order n-1 with qubit fixed to bit, left unnormalized.

    Its squared norm is the probability of reading `bit` on `qubit`.
    """
    if s.n < 2:
        raise ValueError("slicing needs at least two qubits; measure a single qubit directly")
    axis = _check_qubit(s.n, qubit)
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    return TensorState(np.take(s.data, bit, axis=axis))


def approx_equal(
    a: TensorState,
    b: TensorState,
    tol: float = DEFAULT_TOL,
    up_to_global_phase: bool = False,
) -> bool:
    """Compare two states elementwise or modulo a global phase.

    With ``up_to_global_phase`` the best phase is taken from the inner
    product <b|a>, which minimises ||a - e^{i theta} b||.
    """
    if a.n != b.n:
        raise ValueError(f"cannot compare states of {a.n} and {b.n} qubits")
    va, vb = a.to_kron_vector(), b.to_kron_vector()
    if not up_to_global_phase:
        return bool(np.max(np.abs(va - vb)) <= tol)
    overlap = np.vdot(vb, va)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return bool(np.linalg.norm(va - phase * vb) <= tol)


def fidelity(a: TensorState, b: TensorState) -> float:
    """|<a|b>| for normalized states."""
    if a.n != b.n:
        raise ValueError(f"cannot compare states of {a.n} and {b.n} qubits")
    return float(abs(np.vdot(a.to_kron_vector(), b.to_kron_vector())))
