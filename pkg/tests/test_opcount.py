import pytest

from qtensor.costs import all_match, measured_rows
from qtensor.gates import MultilinearGate, QuasiMultilinearGate, X, apply_controlled, apply_multilinear, \
    apply_single, controlled_to_terms
from qtensor.opcount import (CSV_FIELDS, OpCounter, crossover_table, predict_controlled, predict_local,
                             predict_single, predict_standard, predict_term_sum, rows_to_csv)
from qtensor.state import basis_state

# computed by substituting into each closed form and checked by instrumented runs below
CROSSOVER_R_EQUALS_N = {
    1: (4, 4), 2: (32, 16), 3: (144, 64), 4: (512, 256), 5: (1600, 1024),
    6: (4608, 4096), 7: (12544, 16384), 8: (32768, 65536), 9: (82944, 262144), 10: (204800, 1048576),
}


def test_local_examples():
    assert predict_local(3) == {"standard": (64, 56), "tensor": (48, 24)}
    assert predict_local(1) == {"standard": (4, 2), "tensor": (4, 2)}
    assert predict_local(5)["tensor"] == (320, 160)


def test_controlled_examples():
    for n in range(1, 9):
        assert predict_controlled(n, n - 1) == (4, 2)
        assert predict_controlled(n, 0) == (2 ** (n + 1), 2 ** n) == predict_single(n)
    assert predict_controlled(3, 1) == (8, 4)


@pytest.mark.parametrize("n,c", [(3, 3), (3, -1), (0, 0)])
def test_controlled_bounds(n, c):
    with pytest.raises(ValueError):
        predict_controlled(n, c)


def test_term_sum_examples():
    for n in range(1, 9):
        cost = predict_term_sum(n, 1)
        assert (cost.mults, cost.intra_adds) == predict_local(n)["tensor"]
        assert cost.accumulation_adds == 0
    assert predict_term_sum(2, 2).mults == 32


@pytest.mark.parametrize("r", [0, 9])
def test_term_sum_bounds(r):
    with pytest.raises(ValueError):
        predict_term_sum(3, r)


def test_cnot_term_sum_instrumented():
    ctr = OpCounter()
    cnot = controlled_to_terms(QuasiMultilinearGate([(1, 1)], 2, X))
    apply_multilinear(basis_state(2, [1, 0]), cnot, counter=ctr)
    assert ctr.mults == 32
    assert ctr.adds == predict_term_sum(2, 2).adds


def test_controlled_instrumented_n3_c1():
    ctr = OpCounter()
    apply_controlled(basis_state(3, [1, 0, 0]), QuasiMultilinearGate([(1, 1)], 3, X), counter=ctr)
    assert ctr.as_tuple() == (8, 4)


def test_crossover_table():
    rows = crossover_table(10)
    for row in rows:
        assert (row["tensor_mults"], row["standard_mults"]) == CROSSOVER_R_EQUALS_N[row["n"]]
    # the tensor route wins from n = 7 on when r = n
    assert [r["n"] for r in rows if r["tensor_cheaper"]] == [7, 8, 9, 10]
    assert all(r["tensor_cheaper"] for r in crossover_table(10, rank=lambda n: 1) if r["n"] >= 3)


def test_measured_rows_match_predictions():
    rows = measured_rows(8)
    assert all_match(rows)
    species = {(r["engine"], r["gate"]) for r in rows}
    assert species == {("tensor", "local"), ("standard", "local"), ("tensor", "controlled"),
                       ("tensor", "term-sum"), ("standard", "term-sum")}


def test_counters_additive():
    a, b = OpCounter(), OpCounter()
    s = basis_state(3, [0, 0, 0])
    apply_single(s, 1, X, counter=a)
    apply_single(s, 2, X, counter=b)
    both = OpCounter()
    apply_single(apply_single(s, 1, X, counter=both), 2, X, counter=both)
    assert (a + b) == both


def test_counter_rejects_negative():
    with pytest.raises(ValueError):
        OpCounter().add(-1, 0)


def test_csv_layout():
    text = rows_to_csv([{"engine": "tensor", "gate": "local", "n": 3, "c": 0, "r": 1, "mults_pred": 48,
                         "mults_meas": 48, "adds_pred": 24, "adds_meas": 24, "adds_formula": 24}])
    header, line = text.strip().split("\n")
    assert header == ",".join(CSV_FIELDS)
    assert line == "tensor,local,3,0,1,48,48,24,24"


def test_standard_formula():
    for n in range(1, 9):
        assert predict_standard(n) == (4 ** n, 2 ** n * (2 ** n - 1))


def test_multilinear_accumulation_counted():
    ctr = OpCounter()
    g = MultilinearGate([[X, X, X]] * 3)
    apply_multilinear(basis_state(3, [0, 0, 0]), g, counter=ctr)
    cost = predict_term_sum(3, 3)
    assert ctr.as_tuple() == (cost.mults, cost.intra_adds + cost.accumulation_adds)
