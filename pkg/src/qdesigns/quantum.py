"""Quantum Latin squares and quantum orthogonal Latin squares (QOLS).

A QOLS of order ``d`` is stored as the ``d^2 x d^2`` matrix whose row
``i*d + j`` holds the amplitudes of the bipartite state in cell ``(i, j)``.
The verifiers below return :class:`ReportEntry` objects carrying the raw
residual, so callers can see how far a design is from passing.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .classical import OrthogonalPair, is_orthogonal_pair
from .tensor_core import (
    DEFAULT_TOL,
    BipartiteShape,
    as_matrix,
    partial_trace,
    partial_transpose,
    reshuffle,
    unitarity_deficit,
)

__all__ = [
    "PHASE_EQUIVALENCE",
    "QuantumLatinSquare",
    "QOLSDesign",
    "ReportEntry",
    "VerificationReport",
    "check_A_prime",
    "check_B_prime",
    "check_C_prime",
    "check_two_unitary",
    "verify_design",
    "is_quantum_latin_square",
    "cardinality",
    "bell_grid_design",
    "check_d2_bell_grids",
    "embed_classical",
    "design_to_json",
    "design_from_json",
]

PHASE_EQUIVALENCE = 1e-8


@dataclass(frozen=True)
class QOLSDesign:
    d: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, self.d * self.d, self.d * self.d).copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, m) -> "QOLSDesign":
        m = as_matrix(m)
        n = m.shape[0]
        d = math.isqrt(n)
        if m.shape != (n, n) or d * d != n:
            raise ValueError(f"a design matrix must be d^2 x d^2, got {m.shape[0]}x{m.shape[1]}")
        return cls(d, m)

    @classmethod
    def from_states(cls, states) -> "QOLSDesign":
        """From a ``d x d`` grid (nested lists or array) of length-``d^2`` vectors."""
        arr = np.asarray(states, dtype=complex)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != arr.shape[0] ** 2:
            raise ValueError(f"expected a d x d grid of d^2 vectors, got shape {arr.shape}")
        d = arr.shape[0]
        return cls(d, arr.reshape(d * d, d * d))

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(self.d, self.d)

    def state(self, i: int, j: int) -> np.ndarray:
        return self.matrix[i * self.d + j]

    def grid(self) -> np.ndarray:
        """States as an array indexed ``[i, j, :]``."""
        return self.matrix.reshape(self.d, self.d, self.d * self.d)


@dataclass(frozen=True)
class ReportEntry:
    condition: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


@dataclass
class VerificationReport:
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, condition: str) -> ReportEntry:
        for e in self.entries:
            if e.condition == condition:
                return e
        raise KeyError(condition)

    def conditions(self) -> list[str]:
        return [e.condition for e in self.entries]

    def failed(self) -> list[str]:
        return [e.condition for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "entries": [
                {"condition": e.condition, "residual": e.residual, "tolerance": e.tolerance, "passed": e.passed}
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [
            f"{e.condition:<9} {'PASS' if e.passed else 'FAIL'}  residual={e.residual:.12g}  tol={e.tolerance:.12g}"
            for e in self.entries
        ]
        lines.append(f"overall   {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def check_A_prime(q: QOLSDesign, tol: float = DEFAULT_TOL) -> ReportEntry:
    """All ``d^2`` states mutually orthonormal: max ``|<psi_ij|psi_kl> - delta|``."""
    gram = q.matrix.conj() @ q.matrix.T
    residual = float(np.max(np.abs(gram - np.eye(q.d * q.d))))
    return ReportEntry("A'", residual, tol)


def _line_residual(lines: np.ndarray, shape: BipartiteShape, which: str) -> float:
    # lines[i, k] is the k-th state of the i-th row (or column); all ordered pairs (i, j)
    d = lines.shape[0]
    worst = 0.0
    for i, j in itertools.product(range(d), repeat=2):
        s = lines[i].T @ lines[j].conj()
        reduced = partial_trace(s, shape, which)
        target = np.eye(reduced.shape[0]) if i == j else 0.0
        worst = max(worst, float(np.linalg.norm(reduced - target)))
    return worst


def check_B_prime(q: QOLSDesign, tol: float = DEFAULT_TOL) -> tuple[ReportEntry, ReportEntry]:
    """Row conditions ``Tr_X(sum_k |psi_ik><psi_jk|) = delta_ij I`` for X = B and X = A."""
    grid = q.grid()
    return (
        ReportEntry("B'_B", _line_residual(grid, q.shape, "B"), tol),
        ReportEntry("B'_A", _line_residual(grid, q.shape, "A"), tol),
    )


def check_C_prime(q: QOLSDesign, tol: float = DEFAULT_TOL) -> tuple[ReportEntry, ReportEntry]:
    """Column analogue of :func:`check_B_prime`."""
    grid = q.grid().transpose(1, 0, 2)
    return (
        ReportEntry("C'_B", _line_residual(grid, q.shape, "B"), tol),
        ReportEntry("C'_A", _line_residual(grid, q.shape, "A"), tol),
    )


def check_two_unitary(q: QOLSDesign, tol: float = DEFAULT_TOL) -> tuple[ReportEntry, ReportEntry, ReportEntry]:
    """Unitarity deficits of ``U``, ``U^R`` and ``U^Gamma``."""
    u = q.matrix
    return (
        ReportEntry("2U_U", unitarity_deficit(u), tol),
        ReportEntry("2U_R", unitarity_deficit(reshuffle(u, q.shape)), tol),
        ReportEntry("2U_Gamma", unitarity_deficit(partial_transpose(u, q.shape)), tol),
    )


def verify_design(q: QOLSDesign, tol: float = DEFAULT_TOL, two_unitary: bool = True) -> VerificationReport:
    """Run A', both B' traces, both C' traces and (optionally) the 2-unitarity checks."""
    entries = [check_A_prime(q, tol), *check_B_prime(q, tol), *check_C_prime(q, tol)]
    if two_unitary:
        entries.extend(check_two_unitary(q, tol))
    return VerificationReport(entries)


@dataclass(frozen=True)
class QuantumLatinSquare:
    """``d x d`` grid of unit vectors in ``H_d``; ``states[i, j]`` is cell ``(i, j)``."""

    states: np.ndarray

    def __post_init__(self):
        arr = np.array(self.states, dtype=complex)
        if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
            raise ValueError(f"expected a d x d grid of vectors in C^d, got shape {arr.shape}")
        norms = np.linalg.norm(arr, axis=2, keepdims=True)
        if np.any(norms == 0):
            raise ValueError("zero vector in grid")
        arr = arr / norms
        arr.setflags(write=False)
        object.__setattr__(self, "states", arr)

    @property
    def d(self) -> int:
        return self.states.shape[0]

    @classmethod
    def from_classical(cls, grid) -> "QuantumLatinSquare":
        g = np.asarray(grid, dtype=int)
        return cls(np.eye(g.shape[0], dtype=complex)[g])


def is_quantum_latin_square(q: QuantumLatinSquare, tol: float = DEFAULT_TOL) -> bool:
    eye = np.eye(q.d)
    for line in itertools.chain(q.states, q.states.transpose(1, 0, 2)):
        if np.linalg.norm(line.conj() @ line.T - eye) > tol:
            return False
    return True


def cardinality(q: QuantumLatinSquare, tol: float = DEFAULT_TOL) -> tuple[int, str]:
    """Number of distinct states up to a global phase, and the resulting class.

    Two states count as equal when ``|<u|v>| >= 1 - 1e-8``.  A square with
    more than ``d`` distinct states is "genuinely quantum", otherwise it is
    "apparently quantum".
    """
    if not is_quantum_latin_square(q, tol):
        raise ValueError("rows and columns are not all orthonormal bases")
    reps: list[np.ndarray] = []
    for v in q.states.reshape(-1, q.d):
        if not any(abs(np.vdot(r, v)) >= 1 - PHASE_EQUIVALENCE for r in reps):
            reps.append(v)
    c = len(reps)
    return c, "genuinely quantum" if c > q.d else "apparently quantum"


def bell_grid_design(assignment) -> QOLSDesign:
    """2x2 design placing Bell states ``alpha_{assignment[n]}`` row-major (indices 0..3)."""
    from .golden import bell_matrix

    alphas = bell_matrix().T  # rows are the Bell states alpha_1..alpha_4
    return QOLSDesign(2, alphas[list(assignment)])


def check_d2_bell_grids(tol: float = DEFAULT_TOL) -> list[tuple[tuple[int, ...], str | None, VerificationReport]]:
    """Verify all 24 placements of the four Bell states on a 2x2 grid.

    Returns ``(assignment, first failing condition or None, report)`` for
    each permutation, in lexicographic order.
    """
    out = []
    for perm in itertools.permutations(range(4)):
        report = verify_design(bell_grid_design(perm), tol, two_unitary=False)
        failed = report.failed()
        out.append((perm, failed[0] if failed else None, report))
    return out


def embed_classical(p: OrthogonalPair) -> QOLSDesign:
    """Product design with ``|first[i][j]> (x) |second[i][j]>`` in cell ``(i, j)``."""
    check = is_orthogonal_pair(p)
    if not check:
        raise ValueError(f"squares are not orthogonal: {check.message}")
    d = p.d
    m = np.zeros((d * d, d * d), dtype=complex)
    for i, j, a, b in p.cells():
        m[i * d + j, a * d + b] = 1
    return QOLSDesign(d, m)


def design_to_json(q: QOLSDesign) -> dict:
    return {
        "d": q.d,
        "states": [[[float(z.real), float(z.imag)] for z in row] for row in q.matrix],
    }


def design_from_json(obj: dict) -> QOLSDesign:
    try:
        d, states = int(obj["d"]), obj["states"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a QOLS object: {exc}") from None
    if len(states) != d * d or any(len(s) != d * d for s in states):
        raise ValueError(f"QOLS of order {d} needs {d * d} states of length {d * d}")
    m = np.array([[complex(re, im) for re, im in s] for s in states], dtype=complex)
    return QOLSDesign(d, m)
