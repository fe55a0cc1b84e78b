import json

import numpy as np
import pytest

from conftest import genuinely_quantum_square, local_rotation, sudoku_grid
from qdesigns.classical import GL3, GL4, OrthogonalPair, latin_cyclic, ols_odd, permutation_encoding
from qdesigns.golden import bell_matrix, build_golden_u
from qdesigns.quantum import (
    QOLSDesign,
    QuantumLatinSquare,
    VerificationReport,
    bell_grid_design,
    cardinality,
    check_A_prime,
    check_B_prime,
    check_C_prime,
    check_d2_bell_grids,
    check_two_unitary,
    design_from_json,
    design_to_json,
    embed_classical,
    is_quantum_latin_square,
    verify_design,
)
from qdesigns.search import random_unitary
from qdesigns.tensor_core import partial_trace

CONDITIONS = ["A'", "B'_B", "B'_A", "C'_B", "C'_A"]


def test_design_construction():
    q = QOLSDesign.from_matrix(np.eye(9))
    assert q.d == 3 and q.state(1, 2)[5] == 1
    assert q.grid().shape == (3, 3, 9)
    with pytest.raises(ValueError):
        QOLSDesign.from_matrix(np.eye(35))
    with pytest.raises(ValueError):
        QOLSDesign(2, np.eye(9))
    one = embed_classical(OrthogonalPair.from_grids([[0]], [[0]]))
    assert np.array_equal(one.matrix, [[1]])


def test_embed_gl3_is_product_design():
    q = embed_classical(GL3)
    for i, j, a, b in GL3.cells():
        expected = np.zeros(9)
        expected[3 * a + b] = 1
        assert np.array_equal(q.state(i, j), expected)
    assert check_A_prime(q).residual < 1e-14
    assert verify_design(q).passed
    with pytest.raises(ValueError):
        embed_classical(OrthogonalPair(latin_cyclic(3), latin_cyclic(3)))


def test_golden_passes_every_condition():
    report = verify_design(QOLSDesign.from_matrix(build_golden_u()))
    assert report.passed
    assert report.conditions() == CONDITIONS + ["2U_U", "2U_R", "2U_Gamma"]
    assert max(e.residual for e in report.entries) < 1e-13


def test_duplicate_state_fails_A_prime():
    u = build_golden_u()
    q = QOLSDesign.from_matrix(np.vstack([u[:1], u[:1], u[2:]]))
    entry = check_A_prime(q)
    assert not entry.passed
    assert entry.residual == pytest.approx(1, abs=1e-12)


def test_golden_row_cancellation():
    # tracing out colours of sum_k |psi_0k><psi_1k| leaves zero
    u = build_golden_u()
    s = sum(np.outer(u[0 * 6 + k], u[1 * 6 + k].conj()) for k in range(6))
    assert np.linalg.norm(partial_trace(s, (6, 6), "B")) < 1e-14
    assert np.linalg.norm(partial_trace(s, (6, 6), "A")) < 1e-14
    diag = sum(np.outer(u[k], u[k].conj()) for k in range(6))
    assert np.allclose(partial_trace(diag, (6, 6), "B"), np.eye(6), atol=1e-14)


def test_b_prime_fails_on_non_latin_classical():
    q = QOLSDesign.from_matrix(np.eye(9))
    b_b, b_a = check_B_prime(q)
    assert check_A_prime(q).passed
    assert not (b_b.passed and b_a.passed)


def test_entries_and_report_formats():
    q = embed_classical(GL4)
    entries = [check_A_prime(q), *check_B_prime(q), *check_C_prime(q), *check_two_unitary(q)]
    assert all(e.passed for e in entries)
    report = VerificationReport(entries)
    obj = json.loads(report.to_json())
    assert obj["passed"] is True
    assert {c["condition"] for c in obj["entries"]} >= set(CONDITIONS)
    assert "overall   PASS" in report.to_text()
    with pytest.raises(KeyError):
        report["nonexistent"]
    assert report["A'"].tolerance == 1e-10


def test_two_unitary_examples():
    q = QOLSDesign.from_matrix(permutation_encoding(GL3).T)
    assert all(e.passed for e in check_two_unitary(q))
    naive = QOLSDesign.from_matrix(np.kron(np.eye(9), bell_matrix()))
    u_entry, r_entry, g_entry = check_two_unitary(naive)
    assert u_entry.passed and not (r_entry.passed and g_entry.passed)


def test_corpus_condition_equivalence(design_corpus):
    assert len(design_corpus) >= 20
    outcomes = set()
    for name, q in design_corpus.items():
        report = verify_design(q)
        primed = all(report[c].passed for c in CONDITIONS)
        two_u = all(report[c].passed for c in ("2U_U", "2U_R", "2U_Gamma"))
        assert primed == two_u, name
        outcomes.add(primed)
    assert outcomes == {True, False}


def test_corpus_single_correspondences(design_corpus):
    # given A', each primed condition matches unitarity of one reordering
    pairs = {"B'_B": "2U_R", "C'_A": "2U_R", "B'_A": "2U_Gamma", "C'_B": "2U_Gamma"}
    for name, q in design_corpus.items():
        report = verify_design(q)
        if not report["A'"].passed:
            continue
        for primed, two_u in pairs.items():
            assert report[primed].passed == report[two_u].passed, (name, primed)


@pytest.mark.parametrize("name", ["golden", "embed_GL4", "random_unitary_d3", "identity_d3", "golden_bumped"])
def test_local_unitary_invariance(design_corpus, name):
    rng = np.random.default_rng(99)
    q = design_corpus[name]
    base = verify_design(q, two_unitary=False)
    for _ in range(3):
        rotated = QOLSDesign(q.d, local_rotation(q.matrix, q.d, rng))
        rep = verify_design(rotated, two_unitary=False)
        for c in CONDITIONS:
            assert abs(rep[c].residual - base[c].residual) < 1e-9


def test_breaking_one_cell_of_classical_design():
    for p in (GL3, GL4, ols_odd(5)):
        m = embed_classical(p).matrix.copy()
        m[0] = m[1]
        assert not verify_design(QOLSDesign(p.d, m)).passed


def test_cardinality_classical_sudoku():
    q = QuantumLatinSquare.from_classical(sudoku_grid())
    assert is_quantum_latin_square(q)
    assert cardinality(q) == (4, "apparently quantum")


def test_cardinality_rotated_pair():
    plus = np.array([1, 1, 0, 0]) / np.sqrt(2)
    minus = np.array([1, -1, 0, 0]) / np.sqrt(2)
    basis = [plus, minus, np.eye(4)[2], np.eye(4)[3]]
    states = np.array([[basis[s] for s in row] for row in sudoku_grid()])
    q = QuantumLatinSquare(states)
    assert is_quantum_latin_square(q)
    assert cardinality(q) == (4, "apparently quantum")


def test_cardinality_genuinely_quantum():
    q = genuinely_quantum_square()
    assert is_quantum_latin_square(q)
    c, label = cardinality(q)
    assert c == 8 and c > q.d and label == "genuinely quantum"


def test_cardinality_phase_invariance():
    rng = np.random.default_rng(5)
    q = genuinely_quantum_square()
    phases = np.exp(2j * np.pi * rng.random((4, 4, 1)))
    assert cardinality(QuantumLatinSquare(q.states * phases)) == cardinality(q)


def test_cardinality_rejects_non_qls():
    bad = np.tile(np.eye(4)[0], (4, 4, 1))
    with pytest.raises(ValueError):
        cardinality(QuantumLatinSquare(bad))


def test_d2_bell_grids_all_fail():
    results = check_d2_bell_grids()
    assert len(results) == 24
    for perm, first_failed, report in results:
        assert first_failed is not None
        assert report["A'"].passed
        failed = set(report.failed())
        assert failed in ({"B'_B", "C'_A"}, {"B'_A", "C'_B"}), perm
    assert any(not r["C'_B"].passed for _, _, r in results)


def test_d2_bell_grid_repeated_state():
    report = verify_design(bell_grid_design((0, 0, 0, 0)), two_unitary=False)
    assert report.failed()[0] == "A'"


def test_d2_bell_grid_transpose_swaps_rows_and_columns():
    swap = {"B'_B": "C'_B", "B'_A": "C'_A", "C'_B": "B'_B", "C'_A": "B'_A", "A'": "A'"}
    for perm, _, report in check_d2_bell_grids():
        transposed = (perm[0], perm[2], perm[1], perm[3])
        rep_t = verify_design(bell_grid_design(transposed), two_unitary=False)
        assert {swap[c] for c in report.failed()} == set(rep_t.failed())


def test_design_json_roundtrip():
    rng = np.random.default_rng(3)
    q = QOLSDesign.from_matrix(random_unitary(9, rng))
    back = design_from_json(json.loads(json.dumps(design_to_json(q))))
    assert np.array_equal(back.matrix, q.matrix)
    with pytest.raises(ValueError):
        design_from_json({"d": 2, "states": [[[1, 0]]]})
    with pytest.raises(ValueError):
        design_from_json({"states": []})


def test_tolerance_is_respected():
    u = build_golden_u().copy()
    u[0, 0] += 1e-7
    q = QOLSDesign.from_matrix(u)
    assert not verify_design(q, 1e-10).passed
    assert verify_design(q, 1e-5).passed
