"""Reference engine in standard notation: 2^n vectors and dense 2^n x 2^n
matrices assembled from Kronecker products.

Deliberately naive.  Gate matrices are built as full Kronecker chains and
applied by a dense matrix-vector product, so the operation counts are
exactly 4^n multiplications and 2^n (2^n - 1) additions per gate.  Controlled
gates use the projector form M_c kron G + (1 - M_c) kron 1 rather than the
term expansion of :mod:`qtensor.gates`, keeping the two routes independent.
"""
from __future__ import annotations

import numpy as np

from .ir import ClassicallyControlled, Controlled, Instruction, Local, TermSum
from .opcount import OpCounter

MAX_ORACLE_QUBITS = 12

_I2 = np.eye(2, dtype=np.complex128)
_KET = (np.array([[1, 0], [0, 0]], dtype=np.complex128), np.array([[0, 0], [0, 1]], dtype=np.complex128))


class OracleSizeError(ValueError):
    pass


def _guard(n: int) -> None:
    if n > MAX_ORACLE_QUBITS:
        raise OracleSizeError(f"oracle refuses n = {n} > {MAX_ORACLE_QUBITS} (dense matrices too large)")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is a[i, j] * b.

    1-D inputs are treated as column vectors and give a 1-D result.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim == 1 and b.ndim == 1:
        return kron(a[:, None], b[:, None])[:, 0]
    a2 = a if a.ndim == 2 else a[:, None]
    b2 = b if b.ndim == 2 else b[:, None]
    (ra, ca), (rb, cb) = a2.shape, b2.shape
    out = np.empty((ra * rb, ca * cb), dtype=np.complex128)
    for i in range(ra):
        for j in range(ca):
            out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = a2[i, j] * b2
    return out


def kron_chain(mats) -> np.ndarray:
    mats = list(mats)
    out = np.asarray(mats[0], dtype=np.complex128)
    for m in mats[1:]:
        out = kron(out, m)
    return out


def local_matrix(n: int, placements: dict[int, np.ndarray]) -> np.ndarray:
    """Chain with the given 2x2 matrices at their qubits and identity elsewhere."""
    _guard(n)
    return kron_chain([placements.get(q, _I2) for q in range(1, n + 1)])


def build_gate_matrix(instr: Instruction, n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a gate instruction."""
    _guard(n)
    if isinstance(instr, ClassicallyControlled):
        raise ValueError("classically controlled instructions have no fixed matrix; build the inner gate")
    if isinstance(instr, Local):
        _check(n, instr.qubit)
        return local_matrix(n, {instr.qubit: instr.gate.matrix().matrix})
    if isinstance(instr, Controlled):
        qubits = [q for q, _ in instr.controls] + [instr.target]
        for q in qubits:
            _check(n, q)
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"overlapping control/target qubits in {instr}")
        g = instr.gate.matrix().matrix
        if not instr.controls:
            return local_matrix(n, {instr.target: g})
        proj = {q: _KET[b] for q, b in instr.controls}
        satisfied = local_matrix(n, {**proj, instr.target: g})
        projector = local_matrix(n, proj)
        return satisfied + (np.eye(2**n, dtype=np.complex128) - projector)
    if isinstance(instr, TermSum):
        total = np.zeros((2**n, 2**n), dtype=np.complex128)
        for t in instr.terms:
            if len(t.gates) != n:
                raise ValueError(f"term has {len(t.gates)} factors, expected {n}")
            total += complex(t.coeff) * kron_chain(g.matrix().matrix for g in t.gates)
        return total
    raise ValueError(f"not a gate instruction: {instr!r}")


def _check(n: int, q: int) -> None:
    if not 1 <= q <= n:
        raise ValueError(f"qubit {q} out of range 1..{n}")


def term_matrix(term) -> np.ndarray:
    """Kronecker chain of a GateTerm's factors."""
    return kron_chain(f.matrix for f in term.factors)


def multilinear_matrix(g) -> np.ndarray:
    total = term_matrix(g.terms[0])
    for t in g.terms[1:]:
        total = total + term_matrix(t)
    return total


def apply_oracle(v: np.ndarray, m: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    """Dense matrix-vector product, counted as rows*cols mults and rows*(cols-1) adds."""
    v = np.asarray(v, dtype=np.complex128)
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or v.ndim != 1 or m.shape[1] != v.shape[0]:
        raise ValueError(f"cannot apply a {m.shape} matrix to a vector of length {v.shape}")
    out = m @ v
    if counter is not None:
        rows, cols = m.shape
        counter.add(rows * cols, rows * (cols - 1))
    return out


def basis_vector(bits) -> np.ndarray:
    """|q1...qn> as a Kronecker product of unit column vectors."""
    units = (np.array([1, 0], dtype=np.complex128), np.array([0, 1], dtype=np.complex128))
    return kron_chain(units[int(b)] for b in bits)


def project(v: np.ndarray, n: int, qubit: int, bit: int) -> tuple[np.ndarray, float]:
    """Apply the projector |bit><bit| on ``qubit`` and renormalize.

    Returns the collapsed vector (still of length 2^n) and the branch
    probability.
    """
    p = local_matrix(n, {qubit: _KET[bit]})
    w = apply_oracle(v, p)
    prob = float(np.vdot(w, w).real)
    if prob <= 0.0:
        raise ValueError(f"outcome {bit} on qubit {qubit} has zero probability")
    return w / np.sqrt(prob), prob
