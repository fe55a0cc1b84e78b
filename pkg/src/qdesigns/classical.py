"""Classical Latin squares, Graeco-Latin pairs and their encodings.

Symbols are always ``0..d-1``.  A Graeco-Latin pair is held as an
:class:`OrthogonalPair`; orthogonality is *checked*, not enforced, so the
same container also carries candidate pairs that turn out not to be
orthogonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .exact_cover import ExactCover

__all__ = [
    "LatinSquare",
    "OrthogonalPair",
    "DesignTable",
    "Check",
    "SearchResult",
    "is_latin",
    "latin_cyclic",
    "ols_odd",
    "is_orthogonal_pair",
    "magic_square_of",
    "permutation_encoding",
    "table_form",
    "inverse_functions",
    "all_latin_squares",
    "search_ols_exhaustive",
    "transversals",
    "orthogonal_mate_search",
    "mols_check",
    "random_latin_square",
    "parse_square",
    "format_square",
    "parse_pair",
    "format_pair",
    "GL3",
    "GL4",
    "GLH4",
]


def is_latin(grid) -> bool:
    g = np.asarray(grid)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
        return False
    d = g.shape[0]
    target = np.arange(d)
    return all(np.array_equal(np.sort(g[i]), target) and np.array_equal(np.sort(g[:, i]), target) for i in range(d))


@dataclass(frozen=True)
class LatinSquare:
    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(int(s) for s in row) for row in self.grid)
        if not is_latin(grid):
            raise ValueError(f"not a Latin square over 0..d-1: {grid}")
        object.__setattr__(self, "grid", grid)

    @property
    def d(self) -> int:
        return len(self.grid)

    def array(self) -> np.ndarray:
        return np.array(self.grid, dtype=int)

    def __getitem__(self, ij):
        i, j = ij
        return self.grid[i][j]


@dataclass(frozen=True)
class OrthogonalPair:
    first: LatinSquare
    second: LatinSquare

    def __post_init__(self):
        if self.first.d != self.second.d:
            raise ValueError(f"squares have different orders {self.first.d} and {self.second.d}")

    @property
    def d(self) -> int:
        return self.first.d

    @classmethod
    def from_grids(cls, first, second) -> "OrthogonalPair":
        return cls(LatinSquare(first), LatinSquare(second))

    def cells(self) -> Iterator[tuple[int, int, int, int]]:
        """Yield ``(row, column, first symbol, second symbol)`` in row-major order."""
        for i in range(self.d):
            for j in range(self.d):
                yield i, j, self.first[i, j], self.second[i, j]


@dataclass
class Check:
    """Outcome of a yes/no check with an optional witness of failure."""

    ok: bool
    witness: object = None
    message: str = ""

    def __bool__(self):
        return self.ok


@dataclass
class SearchResult:
    """Result of an exhaustive search; ``pair is None`` means certified absence."""

    pair: OrthogonalPair | None
    exhausted: bool
    examined: int = 0
    transversals: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.pair is not None


# The d=3 pair from the card/number table: rank (green) and colour (blue).
GL3 = OrthogonalPair.from_grids(
    [[1, 2, 0], [2, 0, 1], [0, 1, 2]],
    [[0, 2, 1], [1, 0, 2], [2, 1, 0]],
)

# Ozanam's card arrangement in Greek/Latin letter form (alpha..delta, A..D -> 0..3).
GL4 = OrthogonalPair.from_grids(
    [[0, 1, 2, 3], [2, 3, 0, 1], [3, 2, 1, 0], [1, 0, 3, 2]],
    [[0, 1, 2, 3], [3, 2, 1, 0], [1, 0, 3, 2], [2, 3, 0, 1]],
)

# Three MOLS of order four: Greek, Latin and Hebrew (aleph..daleth -> 0..3) letters.
GLH4 = (
    GL4.first,
    GL4.second,
    LatinSquare([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]),
)


def latin_cyclic(d: int) -> LatinSquare:
    """Cyclic square with ``(i + j) mod d`` at column ``i``, row ``j``."""
    if d < 1:
        raise ValueError("order must be positive")
    return LatinSquare([[(i + j) % d for i in range(d)] for j in range(d)])


def ols_odd(d: int) -> OrthogonalPair:
    """Graeco-Latin square of odd order with cell pair ``(i+j, i+2j) mod d``."""
    if d < 3 or d % 2 == 0:
        raise ValueError(f"ols_odd needs an odd order >= 3, got {d}")
    first = [[(i + j) % d for i in range(d)] for j in range(d)]
    second = [[(i + 2 * j) % d for i in range(d)] for j in range(d)]
    return OrthogonalPair.from_grids(first, second)


def is_orthogonal_pair(p: OrthogonalPair) -> Check:
    """Superpose the squares; the witness is the first cell repeating a symbol pair."""
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for i, j, a, b in p.cells():
        if (a, b) in seen:
            return Check(False, (i, j), f"pair {(a, b)} at cell {(i, j)} repeats cell {seen[a, b]}")
        seen[a, b] = (i, j)
    return Check(True)


def _require_orthogonal(p: OrthogonalPair) -> None:
    check = is_orthogonal_pair(p)
    if not check:
        raise ValueError(f"squares are not orthogonal: {check.message}")


def magic_square_of(p: OrthogonalPair) -> tuple[np.ndarray, int]:
    """Euler's magic square ``X[i, j] = a*d + b + 1`` and its common line sum."""
    _require_orthogonal(p)
    d = p.d
    x = p.first.array() * d + p.second.array() + 1
    sums = set(x.sum(axis=0).tolist()) | set(x.sum(axis=1).tolist())
    if len(sums) != 1:
        raise AssertionError(f"row/column sums differ: {sorted(sums)}")
    return x, sums.pop()


def permutation_encoding(p: OrthogonalPair) -> np.ndarray:
    """``d^2 x d^2`` 0/1 matrix with the unity of column ``d*i + j`` at row ``d*a + b``.

    Here ``(a, b)`` is the symbol pair in cell ``(i, j)``.  The result is
    returned as a complex array so it plugs into the quantum verifiers.
    """
    _require_orthogonal(p)
    d = p.d
    perm = np.zeros((d * d, d * d), dtype=complex)
    for i, j, a, b in p.cells():
        perm[d * a + b, d * i + j] = 1
    return perm


@dataclass(frozen=True)
class DesignTable:
    """The ``d^2`` records ``(row, column, rank, colour)`` of a pair of squares."""

    d: int
    rows: tuple[tuple[int, int, int, int], ...]


def table_form(p: OrthogonalPair) -> DesignTable:
    return DesignTable(p.d, tuple(p.cells()))


def inverse_functions(t: DesignTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three maps ``(i,j)->(k,l)``, ``(i,k)->(j,l)``, ``(i,l)->(k,j)``.

    Each is returned as an integer array ``F`` of length ``d^2`` with
    ``F[x*d + y] = u*d + v``.  Raises ``ValueError`` if any of them fails to be a
    bijection, which happens exactly when the squares are not orthogonal (or
    not Latin).
    """
    d = t.d
    if len(t.rows) != d * d:
        raise ValueError(f"table of order {d} needs {d * d} records, got {len(t.rows)}")
    maps = []
    for name, key, val in (
        ("F1", lambda i, j, k, l: (i, j), lambda i, j, k, l: (k, l)),
        ("F2", lambda i, j, k, l: (i, k), lambda i, j, k, l: (j, l)),
        ("F3", lambda i, j, k, l: (i, l), lambda i, j, k, l: (k, j)),
    ):
        f = np.full(d * d, -1, dtype=int)
        for rec in t.rows:
            x, y = key(*rec)
            u, v = val(*rec)
            if f[x * d + y] != -1:
                raise ValueError(f"{name} is not injective: argument {(x, y)} occurs twice")
            f[x * d + y] = u * d + v
        if sorted(f.tolist()) != list(range(d * d)):
            raise ValueError(f"{name} is not a bijection of 0..{d * d - 1}")
        maps.append(f)
    return maps[0], maps[1], maps[2]


def all_latin_squares(d: int) -> Iterator[LatinSquare]:
    """Every Latin square of order ``d`` in lexicographic row-major order."""
    grid = [[-1] * d for _ in range(d)]
    row_used = [set() for _ in range(d)]
    col_used = [set() for _ in range(d)]

    def fill(cell: int):
        if cell == d * d:
            yield LatinSquare(grid)
            return
        i, j = divmod(cell, d)
        for s in range(d):
            if s in row_used[i] or s in col_used[j]:
                continue
            grid[i][j] = s
            row_used[i].add(s)
            col_used[j].add(s)
            yield from fill(cell + 1)
            row_used[i].discard(s)
            col_used[j].discard(s)
        grid[i][j] = -1

    yield from fill(0)


def search_ols_exhaustive(d: int) -> SearchResult:
    """Try every ordered pair of Latin squares of order ``d <= 4``."""
    if d < 1:
        raise ValueError("order must be positive")
    if d > 4:
        raise ValueError(f"exhaustive pair search is limited to d <= 4, got {d}")
    squares = list(all_latin_squares(d))
    examined = 0
    for first, second in itertools.product(squares, repeat=2):
        examined += 1
        pair = OrthogonalPair(first, second)
        if is_orthogonal_pair(pair):
            return SearchResult(pair, exhausted=False, examined=examined)
    return SearchResult(None, exhausted=True, examined=examined)


def transversals(s: LatinSquare) -> list[tuple[int, ...]]:
    """All transversals of ``s``; each is the tuple of chosen columns, row by row."""
    d = s.d
    found: list[tuple[int, ...]] = []
    cols: list[int] = []
    used_cols: set[int] = set()
    used_syms: set[int] = set()

    def extend(i: int):
        if i == d:
            found.append(tuple(cols))
            return
        for j in range(d):
            sym = s[i, j]
            if j in used_cols or sym in used_syms:
                continue
            cols.append(j)
            used_cols.add(j)
            used_syms.add(sym)
            extend(i + 1)
            cols.pop()
            used_cols.discard(j)
            used_syms.discard(sym)

    extend(0)
    return found


def orthogonal_mate_search(s: LatinSquare) -> SearchResult:
    """Look for a Latin square orthogonal to ``s``.

    A mate exists iff the cells of ``s`` split into ``d`` disjoint
    transversals; the split is found (or ruled out) as an exact cover of the
    ``d^2`` cells by transversals.  The mate puts symbol ``t`` on the cells of
    the ``t``-th chosen transversal.
    """
    d = s.d
    if d > 7:
        raise ValueError(f"transversal enumeration is limited to d <= 7, got {d}")
    trans = transversals(s)
    rows = {n: [(i, j) for i, j in enumerate(t)] for n, t in enumerate(trans)}
    cells = [(i, j) for i in range(d) for j in range(d)]
    if len(trans) < d:
        return SearchResult(None, exhausted=True, examined=0, transversals=trans)
    problem = ExactCover(rows, cells)
    solution = problem.first()
    if solution is None:
        return SearchResult(None, exhausted=True, examined=problem.nodes, transversals=trans)
    mate = [[0] * d for _ in range(d)]
    for sym, n in enumerate(sorted(solution)):
        for i, j in rows[n]:
            mate[i][j] = sym
    return SearchResult(OrthogonalPair(s, LatinSquare(mate)), exhausted=False,
                        examined=problem.nodes, transversals=trans)


def mols_check(squares: Sequence[LatinSquare]) -> Check:
    """Check that every pair in ``squares`` is orthogonal.

    Lists longer than ``d - 1`` (for ``d >= 2``) are rejected outright, since
    no such set of mutually orthogonal squares exists.  The witness is the
    index pair of the first non-orthogonal pair.
    """
    if not squares:
        return Check(True)
    d = squares[0].d
    if any(sq.d != d for sq in squares):
        raise ValueError("all squares must have the same order")
    if d >= 2 and len(squares) > d - 1:
        return Check(False, None, f"{len(squares)} squares exceed the bound of {d - 1} MOLS of order {d}")
    for x, y in itertools.combinations(range(len(squares)), 2):
        if not is_orthogonal_pair(OrthogonalPair(squares[x], squares[y])):
            return Check(False, (x, y), f"squares {x} and {y} are not orthogonal")
    return Check(True)


def random_latin_square(d: int, rng: np.random.Generator) -> LatinSquare:
    """A random Latin square by randomized row-by-row backtracking (not uniform)."""
    grid = [[-1] * d for _ in range(d)]
    col_used = [set() for _ in range(d)]

    def fill(cell: int) -> bool:
        if cell == d * d:
            return True
        i, j = divmod(cell, d)
        for s in rng.permutation(d).tolist():
            if s in grid[i][:j] or s in col_used[j]:
                continue
            grid[i][j] = s
            col_used[j].add(s)
            if fill(cell + 1):
                return True
            col_used[j].discard(s)
            grid[i][j] = -1
        return False

    fill(0)
    return LatinSquare(grid)


def parse_square(text: str) -> LatinSquare:
    """Parse ``"d"`` followed by ``d`` lines of ``d`` integers."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must hold the order d")
    d = int(lines[0][0])
    body = lines[1:]
    if len(body) != d or any(len(row) != d for row in body):
        raise ValueError(f"expected {d} rows of {d} integers")
    return LatinSquare([[int(x) for x in row] for row in body])


def format_square(s: LatinSquare) -> str:
    return "\n".join([str(s.d)] + [" ".join(str(x) for x in row) for row in s.grid]) + "\n"


def parse_pair(text: str) -> OrthogonalPair:
    blocks = [b for b in text.strip().split("\n\n") if b.strip()]
    if len(blocks) != 2:
        raise ValueError(f"a pair file holds two squares separated by a blank line, found {len(blocks)} blocks")
    return OrthogonalPair(parse_square(blocks[0]), parse_square(blocks[1]))


def format_pair(p: OrthogonalPair) -> str:
    return format_square(p.first) + "\n" + format_square(p.second)
