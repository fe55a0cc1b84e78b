"""Dense complex linear algebra on bipartite spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  A composite
index of the pair ``(k, l)`` in ``H_a (x) H_b`` is ``k * d_b + l`` (zero
based), so a ``d_a*d_b`` square matrix can be viewed as a four-index tensor
``X[i, j, k, l] = X[i*d_b + j, k*d_b + l]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "BipartiteShape",
    "BipartiteState",
    "as_matrix",
    "reshuffle",
    "unreshuffle",
    "partial_transpose",
    "partial_trace",
    "unitarity_deficit",
    "schmidt_values",
    "polar_unitary",
    "matrix_to_json",
    "matrix_from_json",
]

DEFAULT_TOL = 1e-10


class BipartiteShape(NamedTuple):
    d_a: int
    d_b: int

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b


def _shape(shape) -> BipartiteShape:
    shape = BipartiteShape(*shape)
    if shape.d_a < 1 or shape.d_b < 1:
        raise ValueError(f"subsystem dimensions must be positive, got {tuple(shape)}")
    return shape


def as_matrix(m, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d complex array, optionally checking its size."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array with shape {arr.shape}")
    if rows is not None and arr.shape[0] != rows or cols is not None and arr.shape[1] != cols:
        raise ValueError(f"expected a {rows}x{cols} matrix, got {arr.shape[0]}x{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def _square_bipartite(m, shape) -> tuple[np.ndarray, BipartiteShape]:
    shape = _shape(shape)
    return as_matrix(m, shape.dim, shape.dim), shape


@dataclass(frozen=True)
class BipartiteState:
    """A pure state of ``H_a (x) H_b`` stored as a flat amplitude vector."""

    shape: BipartiteShape
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        shape = _shape(self.shape)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != shape.dim:
            raise ValueError(f"state of length {amps.size} does not fit shape {tuple(shape)}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        if self.normalized and abs(np.vdot(amps, amps).real - 1.0) > DEFAULT_TOL:
            raise ValueError("state is not normalized; pass normalized=False to allow this")
        amps.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_terms(cls, shape, terms: Sequence[tuple[complex, int, int]], normalized: bool = True):
        """Build ``sum coeff |k l>`` from ``(coeff, k, l)`` triples."""
        shape = _shape(shape)
        amps = np.zeros(shape.dim, dtype=complex)
        for coeff, k, l in terms:
            amps[k * shape.d_b + l] += coeff
        return cls(shape, amps, normalized)

    def coefficient_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape.d_a, self.shape.d_b)

    def __len__(self):
        return self.amplitudes.size


def reshuffle(m, shape) -> np.ndarray:
    """Realignment ``X^R`` with entries ``R[(i,k),(j,l)] = X[(i,j),(k,l)]``.

    For ``d_a == d_b`` the result is again square and the map is an
    involution.  In general the result has shape ``(d_a**2, d_b**2)``; use
    :func:`unreshuffle` to go back.
    """
    x, (da, db) = _square_bipartite(m, shape)
    return x.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)


def unreshuffle(z, shape) -> np.ndarray:
    """Inverse of :func:`reshuffle` for the given subsystem shape."""
    da, db = _shape(shape)
    z = as_matrix(z, da * da, db * db)
    return z.reshape(da, da, db, db).transpose(0, 2, 1, 3).reshape(da * db, da * db)


def partial_transpose(m, shape) -> np.ndarray:
    """Transpose on the second factor: ``G[(i,j),(k,l)] = X[(i,l),(k,j)]``.

    An involution: ``partial_transpose(partial_transpose(x)) == x`` exactly.
    """
    x, (da, db) = _square_bipartite(m, shape)
    return x.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)


def partial_trace(m, shape, which: str) -> np.ndarray:
    """Trace out subsystem ``"A"`` or ``"B"`` of a ``d_a*d_b`` square matrix.

    ``Tr_A`` returns a ``d_b x d_b`` matrix, ``Tr_B`` a ``d_a x d_a`` one.
    """
    x, (da, db) = _square_bipartite(m, shape)
    t = x.reshape(da, db, da, db)
    if which == "A":
        return np.einsum("ijil->jl", t)
    if which == "B":
        return np.einsum("ijkj->ik", t)
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def unitarity_deficit(m) -> float:
    """Frobenius norm of ``m^dagger m - I``; zero iff ``m`` is unitary."""
    x = as_matrix(m)
    if x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got {x.shape}")
    return float(np.linalg.norm(x.conj().T @ x - np.eye(x.shape[0])))


def schmidt_values(state: BipartiteState, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Schmidt coefficients of a normalized bipartite state, in descending order.

    These are the singular values of the ``d_a x d_b`` coefficient matrix, so
    there are ``min(d_a, d_b)`` of them and their squares sum to one.
    """
    amps = state.amplitudes
    if abs(np.vdot(amps, amps).real - 1.0) > tol:
        raise ValueError("Schmidt values are only defined here for normalized states")
    return np.linalg.svd(state.coefficient_matrix(), compute_uv=False)


def polar_unitary(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unitary factor ``W V^dagger`` of the SVD ``m = W S V^dagger``.

    This is the unitary closest to ``m`` in Frobenius norm.  Raises
    ``np.linalg.LinAlgError`` if the smallest singular value is below ``tol``
    (relative to the largest), where the factor is no longer unique.
    """
    x = as_matrix(m)
    if x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got {x.shape}")
    w, s, vh = np.linalg.svd(x)
    if s[-1] <= tol * max(s[0], 1.0):
        raise np.linalg.LinAlgError(f"matrix is rank deficient (smallest singular value {s[-1]:.3g})")
    return w @ vh


def matrix_to_json(m) -> dict:
    x = as_matrix(m)
    return {
        "rows": int(x.shape[0]),
        "cols": int(x.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in x.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a matrix object: {exc}") from None
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise ValueError(f"matrix object declares {rows}x{cols} but has {len(entries)} entries")
    vals = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return as_matrix(vals.reshape(rows, cols))
