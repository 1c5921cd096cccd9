"""Random inputs for property tests and the acceptance suite."""
from __future__ import annotations

import numpy as np

from .ir import Circuit, Controlled, GateSpec, Instruction, Local, TermSpec, TermSum
from .state import TensorState, product_state

FIXED_GATES = ("i", "x", "y", "z", "h", "s", "t")
ROTATIONS = ("rx", "ry", "rz")


def random_state(n: int, rng: np.random.Generator) -> TensorState:
    """Haar-like random normalized state on n qubits."""
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return TensorState.from_kron_vector(v / np.linalg.norm(v))


def random_product_state(n: int, rng: np.random.Generator) -> TensorState:
    return product_state(*(random_state(1, rng) for _ in range(n)))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar random d x d unitary: QR of a Ginibre matrix with the phases of R fixed."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def random_gate_spec(rng: np.random.Generator) -> GateSpec:
    if rng.random() < 0.4:
        return GateSpec(str(rng.choice(ROTATIONS)), (float(rng.uniform(-np.pi, np.pi)),))
    return GateSpec(str(rng.choice(FIXED_GATES)))


def _pauli_rotation_instr(n: int, rng: np.random.Generator) -> TermSum:
    # exp(-i theta P) = cos(theta) I + (-i sin(theta)) P for a Pauli string P
    theta = float(rng.uniform(-np.pi, np.pi))
    paulis = [GateSpec(str(rng.choice(("i", "x", "y", "z")))) for _ in range(n)]
    ident = tuple(GateSpec("i") for _ in range(n))
    return TermSum((TermSpec(complex(np.cos(theta)), ident), TermSpec(-1j * np.sin(theta), tuple(paulis))))


def _swap_instr(n: int, rng: np.random.Generator) -> TermSum:
    a, b = sorted(rng.choice(np.arange(1, n + 1), size=2, replace=False).tolist())
    terms = []
    for p in ("i", "x", "y", "z"):
        gates = tuple(GateSpec(p) if q in (a, b) else GateSpec("i") for q in range(1, n + 1))
        terms.append(TermSpec(0.5, gates))
    return TermSum(tuple(terms))


def _local_tuple_instr(n: int, rng: np.random.Generator) -> TermSum:
    return TermSum((TermSpec(1.0, tuple(random_gate_spec(rng) for _ in range(n))),))


def random_instruction(n: int, rng: np.random.Generator) -> Instruction:
    """One unitary gate instruction: local, controlled (1..n-1 controls) or a term sum."""
    kind = rng.integers(3)
    if kind == 0:
        return Local(int(rng.integers(1, n + 1)), random_gate_spec(rng))
    if kind == 1:
        c = int(rng.integers(1, n))
        qubits = rng.permutation(np.arange(1, n + 1))[: c + 1].tolist()
        controls = tuple(sorted((int(q), int(rng.integers(2))) for q in qubits[:c]))
        return Controlled(controls, int(qubits[c]), random_gate_spec(rng))
    builder = (_pauli_rotation_instr, _swap_instr, _local_tuple_instr)[int(rng.integers(3))]
    return builder(n, rng)


def random_circuit(n: int, depth: int, rng: np.random.Generator) -> Circuit:
    if n < 2:
        raise ValueError("random circuits need at least 2 qubits")
    return Circuit(n, tuple(random_instruction(n, rng) for _ in range(depth)))
