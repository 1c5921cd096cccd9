"""Complex-operation tallies and the closed-form cost of each gate species.

One count is one complex multiplication or one complex addition.  The
engines in :mod:`qtensor.gates` and :mod:`qtensor.oracle` increment an
:class:`OpCounter` by what their kernels actually execute, so the tallies
can be checked against the predictions below with integer equality.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple


@dataclass
class OpCounter:
    mults: int = 0
    adds: int = 0

    def add(self, mults: int, adds: int) -> None:
        if mults < 0 or adds < 0:
            raise ValueError("operation counts only grow")
        self.mults += int(mults)
        self.adds += int(adds)

    def __add__(self, other: OpCounter) -> OpCounter:
        return OpCounter(self.mults + other.mults, self.adds + other.adds)

    def snapshot(self) -> OpCounter:
        return OpCounter(self.mults, self.adds)

    def as_tuple(self) -> tuple[int, int]:
        return (self.mults, self.adds)


class OpCount(NamedTuple):
    mults: int
    adds: int


class TermSumCost(NamedTuple):
    mults: int
    intra_adds: int
    accumulation_adds: int

    @property
    def adds(self) -> int:
        return self.intra_adds + self.accumulation_adds


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def predict_standard(n: int) -> OpCount:
    """Dense 2^n x 2^n matrix times a 2^n vector."""
    _check_n(n)
    d = 2**n
    return OpCount(d * d, d * (d - 1))


def predict_single(n: int) -> OpCount:
    """One 2x2 factor swept over the 2^(n-1) edges along its axis."""
    _check_n(n)
    return OpCount(4 * 2 ** (n - 1), 2 * 2 ** (n - 1))


def predict_local(n: int) -> dict[str, OpCount]:
    """Cost of a local gate (G1, ..., Gn) in both representations.

    The tensor column assumes all n factors are applied.
    """
    _check_n(n)
    return {
        "standard": predict_standard(n),
        "tensor": OpCount(n * 2 ** (n + 1), n * 2**n),
    }


def predict_controlled(n: int, c: int) -> OpCount:
    """Quasi-multilinear application with c control conditions."""
    _check_n(n)
    if not 0 <= c <= n - 1:
        raise ValueError(f"control count must lie in 0..{n - 1}, got {c}")
    edges = 2 ** (n - 1 - c)
    return OpCount(4 * edges, 2 * edges)


def predict_term_sum(n: int, r: int) -> TermSumCost:
    """Sum of r full n-tuples.

    Multiplications are r * n * 2^(n+1).  Adds are split into the
    per-term contractions (r * n * 2^n) and the (r - 1) * 2^n amplitude
    additions that accumulate the term results.
    """
    _check_n(n)
    if not 1 <= r <= 2**n:
        raise ValueError(f"term count must lie in 1..{2**n}, got {r}")
    return TermSumCost(r * n * 2 ** (n + 1), r * n * 2**n, (r - 1) * 2**n)


def crossover_table(n_max: int, rank=lambda n: n) -> list[dict]:
    """Tensor vs dense multiplication counts for a rank-r(n) term sum."""
    rows = []
    for n in range(1, n_max + 1):
        r = rank(n)
        tensor = predict_term_sum(n, r).mults
        standard = predict_standard(n).mults
        rows.append({"n": n, "r": r, "tensor_mults": tensor, "standard_mults": standard,
                     "tensor_cheaper": tensor < standard})
    return rows


CSV_FIELDS = ("engine", "gate", "n", "c", "r", "mults_pred", "mults_meas", "adds_pred", "adds_meas")


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else row[k]) for k in CSV_FIELDS})
    return buf.getvalue()
