"""Instrumented cost table: run every gate species on both engines and set the
counted operations beside the closed-form predictions."""
from __future__ import annotations

import numpy as np

from . import oracle
from .gates import GateTerm, MultilinearGate, QuasiMultilinearGate, apply_controlled, apply_multilinear, apply_term
from .opcount import OpCounter, predict_controlled, predict_local, predict_standard, predict_term_sum
from .state import TensorState
from .testing import random_state, random_unitary


def _row(engine, gate, n, c, r, pred, meas: OpCounter, adds_formula=None) -> dict:
    row = {"engine": engine, "gate": gate, "n": n, "c": c, "r": r,
           "mults_pred": pred[0], "mults_meas": meas.mults, "adds_pred": pred[1], "adds_meas": meas.adds}
    if adds_formula is not None:
        row["adds_formula"] = adds_formula
    return row


def _run_standard(psi: TensorState, m: np.ndarray) -> OpCounter:
    ctr = OpCounter()
    oracle.apply_oracle(psi.to_kron_vector(), m, ctr)
    return ctr


def measured_rows(n_max: int, seed: int = 0, max_oracle: int = 8) -> list[dict]:
    """Counted vs predicted operations for n = 1..n_max.

    Standard-engine rows stop at ``max_oracle`` qubits since the dense
    matrices grow as 4^n.  Term-sum rows carry an extra ``adds_formula``
    field with the per-term adds alone, without accumulation.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = np.random.default_rng(seed)
    rows = []
    for n in range(1, n_max + 1):
        psi = random_state(n, rng)
        factors = [random_unitary(2, rng) for _ in range(n)]
        term = GateTerm(factors)

        ctr = OpCounter()
        apply_term(psi, term, counter=ctr)
        rows.append(_row("tensor", "local", n, 0, 1, predict_local(n)["tensor"], ctr))
        if n <= max_oracle:
            rows.append(_row("standard", "local", n, 0, 1, predict_standard(n),
                             _run_standard(psi, oracle.term_matrix(term))))

        for c in range(n):
            g = QuasiMultilinearGate([(q, int(rng.integers(2))) for q in range(1, c + 1)], n, factors[-1])
            ctr = OpCounter()
            apply_controlled(psi, g, counter=ctr)
            rows.append(_row("tensor", "controlled", n, c, None, predict_controlled(n, c), ctr))

        for r in sorted({1, 2, n} & set(range(1, 2**n + 1))):
            mg = MultilinearGate([GateTerm([rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                                            for _ in range(n)]) for _ in range(r)])
            ctr = OpCounter()
            apply_multilinear(psi, mg, counter=ctr)
            cost = predict_term_sum(n, r)
            rows.append(_row("tensor", "term-sum", n, None, r, (cost.mults, cost.adds), ctr, cost.intra_adds))
            if n <= max_oracle:
                rows.append(_row("standard", "term-sum", n, None, r, predict_standard(n),
                                 _run_standard(psi, oracle.multilinear_matrix(mg))))
    return rows


def all_match(rows: list[dict]) -> bool:
    return all(r["mults_pred"] == r["mults_meas"] and r["adds_pred"] == r["adds_meas"] for r in rows)
