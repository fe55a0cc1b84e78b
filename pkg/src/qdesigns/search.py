"""Alternating unitarization search for 2-unitary matrices.

One sweep projects ``m``, its realignment ``m^R`` and its partial transpose
``m^Gamma`` onto the unitary group in turn (polar projection, i.e. the
nearest unitary in Frobenius norm), then projects ``m`` once more so every
iterate is itself unitary.  2-unitary matrices are fixed points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .quantum import QOLSDesign, VerificationReport, verify_design
from .tensor_core import (
    DEFAULT_TOL,
    BipartiteShape,
    partial_transpose,
    polar_unitary,
    reshuffle,
    unitarity_deficit,
    unreshuffle,
)

__all__ = ["SearchConfig", "SearchTrace", "random_unitary", "deficits", "iterate_once", "search", "certify"]


@dataclass(frozen=True)
class SearchConfig:
    d: int
    max_iterations: int = 100_000
    target_deficit: float = 1e-8
    seed: int = 0
    damping: float = 1.0
    dual_unitary: bool = False
    stagnation_window: int = 100
    stagnation_rtol: float = 1e-12

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.target_deficit > 0:
            raise ValueError("target_deficit must be positive")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")


@dataclass
class SearchTrace:
    config: SearchConfig
    deficits: list[tuple[float, float, float]] = field(default_factory=list)
    matrix: np.ndarray | None = None
    converged: bool = False
    stagnated: bool = False

    @property
    def iterations(self) -> int:
        return len(self.deficits)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"iter": n + 1, "delta_u": du, "delta_r": dr, "delta_gamma": dg}) + "\n"
            for n, (du, dr, dg) in enumerate(self.deficits)
        )


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def deficits(m: np.ndarray, shape) -> tuple[float, float, float]:
    return (
        unitarity_deficit(m),
        unitarity_deficit(reshuffle(m, shape)),
        unitarity_deficit(partial_transpose(m, shape)),
    )


def iterate_once(m: np.ndarray, shape, dual_unitary: bool = False) -> np.ndarray:
    """One sweep U -> R -> Gamma -> U of polar projections.

    ``dual_unitary`` skips the partial-transpose leg.  Raises
    ``np.linalg.LinAlgError`` when an intermediate matrix is singular.
    """
    shape = BipartiteShape(*shape)
    m = polar_unitary(m)
    m = unreshuffle(polar_unitary(reshuffle(m, shape)), shape)
    if not dual_unitary:
        m = partial_transpose(polar_unitary(partial_transpose(m, shape)), shape)
    return polar_unitary(m)


def _objective(delta: tuple[float, float, float], dual_unitary: bool) -> float:
    return max(delta[:2]) if dual_unitary else max(delta)


def search(config: SearchConfig) -> SearchTrace:
    """Run the alternating projections from a seeded Haar-random unitary.

    Stops when the largest deficit reaches ``target_deficit``, when it has
    improved by less than ``stagnation_rtol`` (relative) over the last
    ``stagnation_window`` sweeps, or after ``max_iterations`` sweeps.
    Non-convergence is reported, never raised.
    """
    shape = BipartiteShape(config.d, config.d)
    rng = np.random.default_rng(config.seed)
    m = random_unitary(config.d * config.d, rng)
    trace = SearchTrace(config)
    history: list[float] = []
    for _ in range(config.max_iterations):
        try:
            candidate = iterate_once(m, shape, config.dual_unitary)
            if config.damping < 1:
                candidate = polar_unitary((1 - config.damping) * m + config.damping * candidate)
        except np.linalg.LinAlgError:
            break
        m = candidate
        delta = deficits(m, shape)
        trace.deficits.append(delta)
        obj = _objective(delta, config.dual_unitary)
        history.append(obj)
        if obj <= config.target_deficit:
            trace.converged = True
            break
        w = config.stagnation_window
        if len(history) > w and history[-w - 1] - obj < config.stagnation_rtol * history[-w - 1]:
            trace.stagnated = True
            break
    trace.matrix = m
    return trace


def certify(trace: SearchTrace, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Full design verification of the trace's final matrix."""
    if trace.matrix is None:
        raise ValueError("trace has no final matrix")
    return verify_design(QOLSDesign.from_matrix(trace.matrix), tol)
