import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtensor import oracle
from qtensor.gates import (GATE_NAMES, H, I, M0, M1, X, Z, GateTerm, MultilinearGate, QuasiMultilinearGate,
                           SingleQubitGate, UnknownGateError, apply_controlled, apply_multilinear, apply_single,
                           apply_term, controlled_to_terms, gate_library, pauli_rotation, swap_terms)
from qtensor.rank import all_bipartitions, schmidt_rank
from qtensor.state import TensorState, approx_equal, basis_state, product_state, qubit_state
from qtensor.testing import random_matrix, random_state, random_unitary

A, B = 0.6, 0.8
SQ = 1 / np.sqrt(2)


def psi(k):
    """Teleportation snapshots; steps 0..3 written out by hand in Dirac form."""
    phi = np.array([A, B])
    z, o = np.array([1.0, 0]), np.array([0, 1.0])
    plus = (z + o) * SQ
    k3 = lambda a, b, c: np.kron(np.kron(a, b), c)
    table = {
        0: k3(phi, z, z),
        1: k3(phi, plus, z),
        2: np.kron(phi, (np.kron(z, z) + np.kron(o, o)) * SQ),
        3: A * k3(z, z, z) * SQ + A * k3(z, o, o) * SQ + B * k3(o, o, z) * SQ + B * k3(o, z, o) * SQ,
    }
    # after H on qubit 1, taken from the dense oracle rather than written by hand
    table[4] = oracle.kron_chain([H.matrix, np.eye(2), np.eye(2)]) @ table[3]
    return TensorState.from_kron_vector(table[k])


def test_library_matrices():
    np.testing.assert_array_equal(gate_library("x").matrix, [[0, 1], [1, 0]])
    np.testing.assert_allclose((H @ H).matrix, np.eye(2), atol=1e-15)
    rz = gate_library("rz", np.pi).matrix
    phase = np.vdot(Z.matrix, rz) / 2
    assert abs(abs(phase) - 1) < 1e-12
    np.testing.assert_allclose(rz, phase * Z.matrix, atol=1e-12)


@pytest.mark.parametrize("name", GATE_NAMES)
def test_library_is_unitary_except_projectors(name):
    params = (0.37,) if name.startswith("r") else ()
    g = gate_library(name, *params)
    assert g.unitary == (name not in ("m0", "m1"))


@pytest.mark.parametrize("bad", [("foo",), ("rx",), ("x", 1.0)])
def test_library_rejects(bad):
    with pytest.raises(UnknownGateError if bad[0] == "foo" else ValueError):
        gate_library(*bad)


def test_unitary_flag_enforced():
    with pytest.raises(ValueError):
        SingleQubitGate(np.diag([1, 0]), unitary=True)
    with pytest.raises(ValueError):
        apply_single(basis_state(1, [0]), 1, M0)
    assert apply_single(basis_state(1, [0]), 1, M0, unnormalized=True) == basis_state(1, [0])


def test_apply_single_examples():
    plus = apply_single(basis_state(1, [0]), 1, H)
    assert approx_equal(plus, qubit_state(SQ, SQ), 1e-15)
    assert approx_equal(apply_single(psi(0), 2, H), psi(1), 1e-12)
    out = apply_single(basis_state(2, [0, 0]), 2, X)
    np.testing.assert_array_equal(out.to_kron_vector(), np.kron(np.eye(2), X.matrix) @ [1, 0, 0, 0])


def test_apply_single_out_of_range():
    with pytest.raises(ValueError):
        apply_single(basis_state(2, [0, 0]), 3, X)


def test_apply_term_examples():
    rng = np.random.default_rng(3)
    s = random_state(2, rng)
    assert approx_equal(apply_term(s, [I, I]), s, 0)
    assert approx_equal(apply_term(psi(3), [H, I, I]), psi(4), 1e-12)


def test_apply_term_matrix_identity():
    rng = np.random.default_rng(4)
    g1, g2 = random_unitary(2, rng), random_unitary(2, rng)
    v1, v2, w1, w2 = (rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(4))
    m = np.outer(v1, v2) + np.outer(w1, w2)
    out = apply_term(TensorState(m), [g1, g2], unnormalized=True)
    np.testing.assert_allclose(out.data, g1 @ m @ g2.T, atol=1e-14)


def test_apply_term_length_mismatch():
    with pytest.raises(ValueError):
        apply_term(basis_state(2, [0, 0]), [I, I, I])


def test_multilinear_single_term_equals_term():
    rng = np.random.default_rng(5)
    s = random_state(3, rng)
    t = GateTerm([random_unitary(2, rng) for _ in range(3)])
    assert approx_equal(apply_multilinear(s, MultilinearGate([t])), apply_term(s, t), 0)


def test_cnot_term_sum_swaps_lower_row():
    a, b, c, d = 0.1, 0.2 + 0.3j, 0.5, 0.7j
    s = TensorState(np.array([[a, b], [c, d]]))
    cnot = MultilinearGate([[M0, I], [M1, X]], unitary=True)
    np.testing.assert_array_equal(apply_multilinear(s, cnot).data, [[a, b], [d, c]])


def test_swap_term_sum():
    out = apply_multilinear(basis_state(2, [0, 1]), swap_terms())
    swap = np.eye(4)[[0, 2, 1, 3]]
    np.testing.assert_allclose(out.to_kron_vector(), swap @ [0, 1, 0, 0], atol=1e-15)


def test_empty_multilinear_rejected():
    with pytest.raises(ValueError):
        MultilinearGate([])
    with pytest.raises(ValueError):
        MultilinearGate([[I, I], [I]])


def test_unitary_flag_on_term_sum_checked():
    with pytest.raises(ValueError):
        MultilinearGate([[M0, I], [M1, I], [M1, X]], unitary=True)


def test_apply_controlled_examples():
    a, b, c, d = 0.1, 0.2, 0.3, 0.4
    s = TensorState(np.array([[a, b], [c, d]]))
    out = apply_controlled(s, QuasiMultilinearGate([(1, 1)], 2, X))
    np.testing.assert_array_equal(out.data, [[a, b], [d, c]])
    assert approx_equal(apply_controlled(psi(2), QuasiMultilinearGate([(1, 1)], 2, X)), psi(3), 1e-12)
    toffoli = QuasiMultilinearGate([(2, 1), (3, 1)], 1, X)
    assert apply_controlled(basis_state(3, [0, 1, 1]), toffoli) == basis_state(3, [1, 1, 1])


@pytest.mark.parametrize("controls,target", [([(1, 1)], 1), ([(1, 1), (1, 0)], 2), ([(1, 2)], 2)])
def test_quasi_gate_validation(controls, target):
    with pytest.raises(ValueError):
        QuasiMultilinearGate(controls, target, X)


def test_controlled_out_of_range():
    with pytest.raises(ValueError):
        apply_controlled(basis_state(2, [0, 0]), QuasiMultilinearGate([(3, 1)], 1, X))


def test_controlled_to_terms_cnot():
    g = controlled_to_terms(QuasiMultilinearGate([(1, 1)], 2, X))
    assert g.r == 2
    mats = [[f.matrix for f in t.factors] for t in g.terms]
    np.testing.assert_array_equal(mats[0][0], M1.matrix)
    np.testing.assert_array_equal(mats[0][1], X.matrix)
    np.testing.assert_array_equal(mats[1][0], M0.matrix)
    np.testing.assert_array_equal(mats[1][1], I.matrix)


def test_controlled_to_terms_toffoli_matches_projector_form():
    g = controlled_to_terms(QuasiMultilinearGate([(2, 1), (3, 1)], 1, X))
    assert g.r == 4
    mc = np.zeros((4, 4))
    mc[3, 3] = 1
    expected = np.kron(X.matrix, mc) + np.kron(np.eye(2), np.eye(4) - mc)
    np.testing.assert_allclose(oracle.multilinear_matrix(g), expected, atol=1e-15)


def test_controlled_identity_is_identity():
    rng = np.random.default_rng(6)
    s = random_state(3, rng)
    g = QuasiMultilinearGate([(1, 0), (3, 1)], 2, I)
    assert approx_equal(apply_multilinear(s, controlled_to_terms(g, 3)), s, 1e-15)
    assert approx_equal(apply_controlled(s, g), s, 0)


def test_pauli_rotation_matches_exponential():
    theta = 0.73
    g = pauli_rotation("xz", theta)
    xz = np.kron(X.matrix, Z.matrix)
    expected = np.cos(theta / 2) * np.eye(4) - 1j * np.sin(theta / 2) * xz
    np.testing.assert_allclose(oracle.multilinear_matrix(g), expected, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_local_factors_commute(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    q1, q2 = rng.choice(np.arange(1, n + 1), size=2, replace=False)
    g1, g2 = random_unitary(2, rng), random_unitary(2, rng)
    ab = apply_single(apply_single(s, int(q1), g1), int(q2), g2)
    ba = apply_single(apply_single(s, int(q2), g2), int(q1), g1)
    assert approx_equal(ab, ba, 1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_controlled_agrees_with_term_expansion(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    c = int(rng.integers(0, n))
    qubits = rng.permutation(np.arange(1, n + 1))
    g = QuasiMultilinearGate([(int(q), int(rng.integers(2))) for q in qubits[:c]], int(qubits[c]),
                             random_unitary(2, rng))
    assert approx_equal(apply_controlled(s, g), apply_multilinear(s, controlled_to_terms(g, n)), 1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_unitary_term_keeps_norm(n, seed):
    rng = np.random.default_rng(seed)
    out = apply_term(random_state(n, rng), [random_unitary(2, rng) for _ in range(n)])
    assert abs(out.norm() - 1) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_term_ranks_preserved_or_not_increased(n, seed):
    rng = np.random.default_rng(seed)
    # a low-rank start so that increases would be visible
    s = product_state(random_state(2, rng), *(random_state(1, rng) for _ in range(n - 2))) if n > 2 \
        else random_state(2, rng)
    before = [schmidt_rank(s, p) for p in all_bipartitions(n)]
    unitary = apply_term(s, [random_unitary(2, rng) for _ in range(n)])
    assert [schmidt_rank(unitary, p) for p in all_bipartitions(n)] == before
    general = [random_matrix(2, rng) if rng.random() < 0.5 else (M0, M1)[int(rng.integers(2))]
               for _ in range(n)]
    out = apply_term(s, general, unnormalized=True)
    if out.norm() > 0:
        after = [schmidt_rank(out, p) for p in all_bipartitions(n)]
        assert all(a <= b for a, b in zip(after, before))


def test_teleport_local_gates_preserve_class_and_cnot_matches_realignment():
    from qtensor.rank import three_qubit_class
    rng = np.random.default_rng(9)
    for _ in range(20):
        s = random_state(3, rng)
        cls = three_qubit_class(s).kind
        t = apply_term(s, [random_unitary(2, rng) for _ in range(3)])
        assert three_qubit_class(t).kind == cls
    plus = qubit_state(SQ, SQ)
    s = product_state(plus, basis_state(1, [0]), random_state(1, rng))
    out = apply_controlled(s, QuasiMultilinearGate([(1, 1)], 2, X))
    assert str(three_qubit_class(out)) == "BIPRODUCT(3)"
    assert schmidt_rank(out, [1]) == 2
