import numpy as np
import pytest

from qdesigns.classical import GL3, GL4, latin_cyclic, ols_odd, permutation_encoding
from qdesigns.golden import bell_matrix, build_golden_u, golden_partial_transpose, golden_reshuffled
from qdesigns.quantum import QOLSDesign, QuantumLatinSquare, bell_grid_design, embed_classical
from qdesigns.search import SearchConfig, random_unitary, search

ACCEPTANCE_LINES: list[str] = []


def local_rotation(m, d, rng):
    ua, ub = random_unitary(d, rng), random_unitary(d, rng)
    return m @ np.kron(ua, ub).T


def build_corpus():
    """Named designs: 2-unitary ones, classical product bases and broken ones."""
    rng = np.random.default_rng(2024)
    u = build_golden_u()
    corpus = {
        "golden": u,
        "golden_R": golden_reshuffled(),
        "golden_Gamma": golden_partial_transpose(),
        "golden_T": u.T.copy(),
        "perm_GL3": permutation_encoding(GL3).T,
        "embed_GL3": embed_classical(GL3).matrix,
        "embed_GL4": embed_classical(GL4).matrix,
        "embed_OLS5": embed_classical(ols_odd(5)).matrix,
    }
    for n in range(3):
        corpus[f"golden_local_{n}"] = local_rotation(u, 6, rng)
        corpus[f"embed_GL4_local_{n}"] = local_rotation(embed_classical(GL4).matrix, 4, rng)
    for seed in (0, 1):
        corpus[f"search_d3_seed{seed}"] = search(SearchConfig(3, seed=seed, max_iterations=2000, target_deficit=1e-13)).matrix
    # product basis |i j> in cell (i, j): all pairs distinct, but neither square is Latin
    corpus["identity_d2"] = np.eye(4, dtype=complex)
    corpus["identity_d3"] = np.eye(9, dtype=complex)
    square = latin_cyclic(3)
    same = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        for j in range(3):
            a = square[i, j]
            same[3 * i + j, 3 * a + a] = 1
    corpus["cyclic_self_pair"] = same
    for n in range(3):
        corpus[f"random_unitary_d{2 + n}"] = random_unitary((2 + n) ** 2, rng)
    bumped = u.copy()
    bumped[0, 0] += 1e-6
    corpus["golden_bumped"] = bumped
    swapped = u.copy()
    swapped[[0, 1]] = swapped[[1, 0]]
    corpus["golden_rows_swapped"] = swapped
    corpus["golden_scaled"] = 1.001 * u
    corpus["bell_direct_sum"] = np.kron(np.eye(9), bell_matrix())
    for perm in [(0, 1, 2, 3), (3, 2, 1, 0), (1, 3, 0, 2)]:
        corpus[f"bell_grid_{''.join(map(str, perm))}"] = bell_grid_design(perm).matrix
    corpus["duplicate_state"] = np.vstack([u[:1], u[:1], u[2:]])
    return corpus


def sudoku_grid():
    """4x4 Latin square whose 2x2 quadrants also hold every symbol."""
    return [[0, 1, 2, 3], [2, 3, 0, 1], [1, 0, 3, 2], [3, 2, 1, 0]]


def genuinely_quantum_square():
    """Klein-group square whose 2x2 intercalates each use their own rotated qubit basis."""
    grid = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    angles = {(0, 0): 0.1, (0, 1): 0.4, (1, 0): 0.7, (1, 1): 1.0}
    states = np.zeros((4, 4, 4))
    for i in range(4):
        for j in range(4):
            s = grid[i][j]
            t = angles[i // 2, j // 2]
            lo = 2 * (s // 2)
            c, sn = np.cos(t), np.sin(t)
            states[i, j, lo:lo + 2] = (c, sn) if s % 2 == 0 else (-sn, c)
    return QuantumLatinSquare(states)



@pytest.fixture(scope="session")
def design_corpus():
    return {name: QOLSDesign.from_matrix(m) for name, m in build_corpus().items()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
