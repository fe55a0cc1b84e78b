"""The golden AME(4,6) state: an explicit 2-unitary matrix of order 36.

Row ``6*i + j`` of :func:`build_golden_u` is the officer state ``|psi_ij>``
in ``H_6 (x) H_6``.  Each nonzero entry is one of three amplitudes ``a < b < c``
times a power of ``omega = exp(2 pi i / 20)``; the phases are stored as
integer exponents and only turned into complex numbers when the matrix is
built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .tensor_core import (
    BipartiteShape,
    BipartiteState,
    as_matrix,
    partial_transpose,
    reshuffle,
    unitarity_deficit,
)

__all__ = [
    "GoldenConstants",
    "GOLDEN",
    "GOLDEN_TABLE",
    "P1_VECTOR",
    "P2_VECTOR",
    "FIGURES",
    "COLORS",
    "ChessPiece",
    "BlockDecomposition",
    "omega_power",
    "build_golden_u",
    "golden_reshuffled",
    "golden_partial_transpose",
    "bell_matrix",
    "bell_basis_alpha",
    "basis_beta",
    "basis_gamma",
    "gamma_raw_norms",
    "permutation_matrix",
    "block_decompose",
    "chess_encoding",
    "chess_table",
    "decode_chess",
    "assemble_from_scheme",
    "factor_bell_block",
    "golden_scheme_parameters",
]

OMEGA_ORDER = 20


@dataclass(frozen=True)
class GoldenConstants:
    a: float
    b: float
    c: float
    phi: float

    @classmethod
    def compute(cls) -> "GoldenConstants":
        s5 = math.sqrt(5.0)
        return cls(
            a=0.5 * math.sqrt(1.0 - 1.0 / s5),
            b=0.5 * math.sqrt(1.0 + 1.0 / s5),
            c=1.0 / math.sqrt(2.0),
            phi=(1.0 + s5) / 2.0,
        )

    def amplitude(self, name: str) -> float:
        return {"a": self.a, "b": self.b, "c": self.c}[name]

    @property
    def omega(self) -> complex:
        return omega_power(1)


GOLDEN = GoldenConstants.compute()

_OMEGA_TABLE = np.exp(2j * np.pi * np.arange(OMEGA_ORDER) / OMEGA_ORDER)


def omega_power(k: int) -> complex:
    """``omega**k`` with the exponent reduced mod 20 before evaluation."""
    return complex(_OMEGA_TABLE[k % OMEGA_ORDER])


# (i, j) -> terms (amplitude, phase exponent, k, l) of |psi_ij> = sum amp * omega^e |k l>
GOLDEN_TABLE: dict[tuple[int, int], tuple[tuple[str, int, int, int], ...]] = {
    (0, 0): (("c", 0, 1, 0), ("a", 3, 4, 3), ("b", 0, 5, 3)),
    (0, 1): (("c", 0, 0, 0), ("b", 0, 4, 3), ("a", 7, 5, 3)),
    (0, 2): (("c", 17, 0, 1), ("b", 0, 2, 4), ("a", 5, 3, 4)),
    (0, 3): (("c", 19, 1, 1), ("a", 5, 2, 4), ("b", 0, 3, 4)),
    (0, 4): (("b", 14, 2, 5), ("a", 15, 3, 5), ("a", 18, 4, 2), ("b", 3, 5, 2)),
    (0, 5): (("a", 1, 2, 5), ("b", 12, 3, 5), ("b", 3, 4, 2), ("a", 18, 5, 2)),
    (1, 0): (("c", 10, 2, 3), ("c", 10, 5, 0)),
    (1, 1): (("c", 6, 3, 3), ("c", 0, 4, 0)),
    (1, 2): (("a", 2, 0, 4), ("b", 5, 1, 4), ("c", 7, 4, 1)),
    (1, 3): (("b", 1, 0, 4), ("a", 14, 1, 4), ("c", 19, 5, 1)),
    (1, 4): (("b", 4, 0, 5), ("a", 9, 1, 5), ("a", 2, 2, 2), ("b", 13, 3, 2)),
    (1, 5): (("a", 3, 0, 5), ("b", 18, 1, 5), ("b", 19, 2, 2), ("a", 0, 3, 2)),
    (2, 0): (("c", 2, 3, 1), ("c", 13, 4, 4)),
    (2, 1): (("c", 2, 2, 1), ("c", 7, 5, 4)),
    (2, 2): (("c", 19, 1, 2), ("a", 12, 4, 5), ("b", 1, 5, 5)),
    (2, 3): (("c", 5, 0, 2), ("b", 15, 4, 5), ("a", 14, 5, 5)),
    (2, 4): (("a", 1, 0, 3), ("b", 4, 1, 3), ("c", 8, 2, 0)),
    (2, 5): (("b", 10, 0, 3), ("a", 3, 1, 3), ("c", 16, 3, 0)),
    (3, 0): (("b", 10, 0, 1), ("a", 15, 1, 1), ("a", 4, 2, 4), ("b", 7, 3, 4)),
    (3, 1): (("a", 5, 0, 1), ("b", 0, 1, 1), ("b", 17, 2, 4), ("a", 10, 3, 4)),
    (3, 2): (("a", 0, 2, 5), ("b", 15, 3, 5), ("b", 14, 4, 2), ("a", 13, 5, 2)),
    (3, 3): (("b", 15, 2, 5), ("a", 0, 3, 5), ("a", 7, 4, 2), ("b", 16, 5, 2)),
    (3, 4): (("a", 1, 0, 0), ("b", 16, 1, 0), ("b", 10, 4, 3), ("a", 5, 5, 3)),
    (3, 5): (("b", 14, 0, 0), ("a", 19, 1, 0), ("a", 5, 4, 3), ("b", 10, 5, 3)),
    (4, 0): (("c", 0, 0, 5), ("b", 7, 2, 2), ("a", 0, 3, 2)),
    (4, 1): (("c", 0, 1, 5), ("a", 10, 2, 2), ("b", 13, 3, 2)),
    (4, 2): (("c", 0, 2, 3), ("c", 10, 5, 0)),
    (4, 3): (("c", 10, 3, 3), ("c", 14, 4, 0)),
    (4, 4): (("b", 2, 0, 4), ("a", 15, 1, 4), ("c", 10, 5, 1)),
    (4, 5): (("a", 5, 0, 4), ("b", 8, 1, 4), ("c", 0, 4, 1)),
    (5, 0): (("a", 10, 0, 2), ("b", 5, 1, 2), ("b", 9, 4, 5), ("a", 16, 5, 5)),
    (5, 1): (("b", 15, 0, 2), ("a", 0, 1, 2), ("a", 16, 4, 5), ("b", 13, 5, 5)),
    (5, 2): (("b", 14, 0, 3), ("a", 7, 1, 3), ("c", 10, 3, 0)),
    (5, 3): (("a", 3, 0, 3), ("b", 6, 1, 3), ("c", 0, 2, 0)),
    (5, 4): (("c", 0, 3, 1), ("c", 1, 4, 4)),
    (5, 5): (("c", 16, 2, 1), ("c", 11, 5, 4)),
}

# Column vectors of the two permutations (1-based): entry n is the row of the
# unit in column n.  Reading them as rows instead does not block-diagonalize
# U^Gamma (checked in the tests), so the column reading is the one used here.
P1_VECTOR = (6, 2, 36, 24, 13, 29, 22, 10, 32, 27, 1, 17, 31, 26, 3, 19, 23, 9,
             18, 5, 12, 33, 28, 16, 11, 34, 25, 15, 20, 7, 14, 30, 8, 4, 35, 21)
P2_VECTOR = (3, 4, 9, 10, 7, 8, 1, 2, 27, 28, 33, 34, 16, 15, 22, 21, 11, 5, 12,
             6, 25, 26, 31, 32, 13, 14, 19, 20, 17, 18, 23, 24, 29, 35, 30, 36)

SHAPE = BipartiteShape(6, 6)
FIGURES = ("king", "queen", "knight", "bishop", "rook", "pawn")
COLORS = ("red", "cyan", "green", "magenta", "blue", "yellow")


def build_golden_u() -> np.ndarray:
    u = np.zeros((36, 36), dtype=complex)
    for (i, j), terms in GOLDEN_TABLE.items():
        for amp, e, k, l in terms:
            u[6 * i + j, 6 * k + l] += GOLDEN.amplitude(amp) * omega_power(e)
    return u


def golden_reshuffled() -> np.ndarray:
    return reshuffle(build_golden_u(), SHAPE)


def golden_partial_transpose() -> np.ndarray:
    return partial_transpose(build_golden_u(), SHAPE)


def bell_matrix() -> np.ndarray:
    """Columns are the Bell states ``alpha_1..alpha_4`` in the basis ``|00>,|01>,|10>,|11>``."""
    return np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]], dtype=complex) / math.sqrt(2)


def bell_basis_alpha() -> list[BipartiteState]:
    return [BipartiteState((2, 2), col) for col in bell_matrix().T]


def basis_beta() -> list[BipartiteState]:
    """The beta vectors exactly as tabulated.

    Note that ``beta_1`` is the product state ``|+>|+>`` and is not orthogonal
    to ``beta_2``; the values are kept verbatim rather than guessing a sign.
    """
    signs = [(1, 1, 1, 1), (1, 1, -1, 1), (1, -1, 1, 1), (-1, 1, 1, 1)]
    return [BipartiteState((2, 2), np.array(s, dtype=complex) / 2) for s in signs]


_GAMMA_TERMS = (
    (("a", 1), ("a", 19), ("b", 14), ("b", 16)),
    (("a", 1), ("a", 3), ("b", 10), ("b", 4)),
    (("b", 4), ("b", 18), ("a", 3), ("a", 9)),
    (("b", 2), ("b", 8), ("a", 5), ("a", 15)),
)


def _gamma_raw() -> np.ndarray:
    return np.array([[GOLDEN.amplitude(amp) * omega_power(e) for amp, e in row] for row in _GAMMA_TERMS])


def gamma_raw_norms() -> np.ndarray:
    """Norms of the gamma vectors before normalization; each is ``sqrt(2(a^2+b^2))``."""
    return np.linalg.norm(_gamma_raw(), axis=1)


def basis_gamma() -> list[BipartiteState]:
    raw = _gamma_raw()
    return [BipartiteState((2, 2), v / np.linalg.norm(v)) for v in raw]


def permutation_matrix(vector: Sequence[int], one_based: bool = False) -> np.ndarray:
    """Permutation matrix with the unit of column ``n`` in row ``vector[n]``."""
    idx = np.asarray(vector, dtype=int) - (1 if one_based else 0)
    n = idx.size
    if sorted(idx.tolist()) != list(range(n)):
        raise ValueError("vector is not a permutation")
    p = np.zeros((n, n))
    p[idx, np.arange(n)] = 1
    return p


def _off_block_mass(m: np.ndarray, size: int) -> float:
    mask = np.ones(m.shape, dtype=bool)
    for s in range(0, m.shape[0], size):
        mask[s:s + size, s:s + size] = False
    return float(np.linalg.norm(m[mask]))


class BlockDecomposition(NamedTuple):
    p1: np.ndarray
    p2: np.ndarray
    blocks: list
    off_block_mass: float


def block_decompose(tol: float = 1e-12) -> BlockDecomposition:
    """Permute ``U^Gamma`` into nine 4x4 blocks: ``P1 U^Gamma P2 = diag(G_1..G_9)``."""
    p1 = np.array(P1_VECTOR) - 1
    p2 = np.array(P2_VECTOR) - 1
    m = permutation_matrix(p1) @ golden_partial_transpose() @ permutation_matrix(p2)
    mass = _off_block_mass(m, 4)
    if mass > tol:
        raise ValueError(f"permutations do not block-diagonalize U^Gamma (off-block mass {mass:.3g})")
    blocks = [m[s:s + 4, s:s + 4].copy() for s in range(0, 36, 4)]
    return BlockDecomposition(p1, p2, blocks, mass)


class ChessPiece(NamedTuple):
    figure: str
    color: str
    amp: str
    phase: int


def chess_encoding(i: int, j: int) -> list[ChessPiece]:
    """Officer ``|psi_ij>`` as chess pieces: basis ket ``|k l>`` is figure ``k`` in colour ``l``."""
    if not (0 <= i < 6 and 0 <= j < 6):
        raise IndexError(f"officer index {(i, j)} out of range 0..5")
    return [ChessPiece(FIGURES[k], COLORS[l], amp, e) for amp, e, k, l in GOLDEN_TABLE[i, j]]


def chess_table() -> list[dict]:
    return [
        {"row": [i, j], "figure": p.figure, "color": p.color, "amp": p.amp, "phase": p.phase}
        for i in range(6) for j in range(6) for p in chess_encoding(i, j)
    ]


def decode_chess(records: Sequence[dict]) -> np.ndarray:
    u = np.zeros((36, 36), dtype=complex)
    for rec in records:
        i, j = rec["row"]
        k, l = FIGURES.index(rec["figure"]), COLORS.index(rec["color"])
        u[6 * i + j, 6 * k + l] += GOLDEN.amplitude(rec["amp"]) * omega_power(rec["phase"])
    return u


def _require_unitary(m: np.ndarray, what: str, tol: float) -> None:
    if unitarity_deficit(m) > tol:
        raise ValueError(f"{what} is not unitary (deficit {unitarity_deficit(m):.3g})")


def assemble_from_scheme(w_pairs, phases, p1, p2, tol: float = 1e-10) -> np.ndarray:
    """Assemble ``(P1 (+)_q (W_q (x) W~_q) B D_q P2)^Gamma``.

    ``w_pairs`` holds one pair of 2x2 unitaries per block, ``phases`` one
    diagonal 4x4 unitary (or its diagonal) per block, and ``p1``, ``p2`` are
    0-based column vectors as accepted by :func:`permutation_matrix`.  The
    partial transpose of the result is unitary by construction; the result
    itself need not be, and whether it is 2-unitary depends entirely on the
    parameters.
    """
    if len(w_pairs) != len(phases):
        raise ValueError("need one phase matrix per pair of local unitaries")
    n = 4 * len(w_pairs)
    d = math.isqrt(n)
    if d * d != n:
        raise ValueError(f"{len(w_pairs)} blocks of order 4 do not form a d^2 x d^2 matrix")
    bell = bell_matrix()
    body = np.zeros((n, n), dtype=complex)
    for q, ((w, wt), ph) in enumerate(zip(w_pairs, phases)):
        w, wt = as_matrix(w, 2, 2), as_matrix(wt, 2, 2)
        _require_unitary(w, f"W_{q}", tol)
        _require_unitary(wt, f"W~_{q}", tol)
        ph = np.asarray(ph, dtype=complex)
        if ph.ndim == 2:
            if np.linalg.norm(ph - np.diag(np.diag(ph))) > tol:
                raise ValueError(f"D_{q} is not diagonal")
            ph = np.diag(ph)
        if ph.shape != (4,) or np.max(np.abs(np.abs(ph) - 1)) > tol:
            raise ValueError(f"D_{q} is not a diagonal unitary of order 4")
        body[4 * q:4 * q + 4, 4 * q:4 * q + 4] = np.kron(w, wt) @ bell @ np.diag(ph)
    m = permutation_matrix(p1) @ body @ permutation_matrix(p2)
    return partial_transpose(m, (d, d))


# reshaped Bell columns: alpha_k = (1/sqrt2) vec(sigma_k) with sigma = I, X, [[0,1],[-1,0]], Z
def factor_bell_block(g, tol: float = 1e-10):
    """Write a 4x4 unitary with maximally entangled columns as ``(W (x) W~) B D``.

    Returns ``(W, W~, phases)``.  Raises ``ValueError`` if ``g`` is not of
    that form.
    """
    g = as_matrix(g, 4, 4)
    v = [math.sqrt(2) * g[:, k].reshape(2, 2) for k in range(4)]
    for k, vk in enumerate(v):
        if unitarity_deficit(vk) > 1e-8:
            raise ValueError(f"column {k} is not maximally entangled")
    a1, a3 = v[1] @ v[0].conj().T, v[3] @ v[0].conj().T
    # a3 = e^{i phi} W Z W^dagger
    lam = np.sqrt(complex((a3 @ a3)[0, 0]))
    vals, vecs = np.linalg.eigh((a3 / lam + (a3 / lam).conj().T) / 2)
    w0 = vecs[:, ::-1]
    n = w0.conj().T @ a1 @ w0
    p, q = n[0, 1], n[1, 0]
    chi = np.angle(q / p) / 2
    w = w0 @ np.diag([1, np.exp(1j * chi)])
    wt = (w.conj().T @ v[0]).T
    d = bell_matrix().conj().T @ np.kron(w, wt).conj().T @ g
    ph = np.diag(d).copy()
    if np.linalg.norm(d - np.diag(ph)) > tol:
        raise ValueError("block is not a locally rotated Bell basis times phases")
    return w, wt, ph


def golden_scheme_parameters():
    """Scheme parameters for the golden solution, read off from its block form.

    The blocks of ``P1 U^Gamma P2`` are Bell bases by *rows*, while the scheme
    rotates Bell *columns*, so the factorization is done on the transposed
    blocks with the two permutations swapped.  With these parameters
    :func:`assemble_from_scheme` returns ``U^T``, which is 2-unitary exactly
    when ``U`` is.
    """
    dec = block_decompose()
    w_pairs, phases = [], []
    for blk in dec.blocks:
        w, wt, ph = factor_bell_block(blk.T)
        w_pairs.append((w, wt))
        phases.append(ph)
    return w_pairs, phases, dec.p2, dec.p1
