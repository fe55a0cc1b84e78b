"""Algorithm X over dict-of-sets, with fewest-candidates column selection."""

from __future__ import annotations

from typing import Hashable, Iterator, Mapping, Sequence


class ExactCover:
    """Exact-cover instance: choose rows so every item is covered exactly once.

    ``rows`` maps a row label to the items it covers.  ``items`` defaults to
    the union of all rows.  Ties in the column heuristic are broken by the
    position of the item in ``items``, so the search order is deterministic.
    """

    def __init__(self, rows: Mapping[Hashable, Sequence[Hashable]], items: Sequence[Hashable] | None = None):
        self.rows = {r: tuple(cols) for r, cols in rows.items()}
        self.row_order = {r: n for n, r in enumerate(self.rows)}
        if items is None:
            seen: dict = {}
            for cols in self.rows.values():
                for c in cols:
                    seen.setdefault(c, None)
            items = list(seen)
        self.order = {c: n for n, c in enumerate(items)}
        self.cols: dict = {c: set() for c in items}
        for r, cols in self.rows.items():
            for c in cols:
                if c not in self.cols:
                    raise KeyError(f"row {r!r} covers unknown item {c!r}")
                self.cols[c].add(r)
        self.nodes = 0

    def solutions(self) -> Iterator[list]:
        yield from self._search([])

    def first(self) -> list | None:
        return next(self.solutions(), None)

    def _search(self, partial: list) -> Iterator[list]:
        self.nodes += 1
        if not self.cols:
            yield list(partial)
            return
        c = min(self.cols, key=lambda k: (len(self.cols[k]), self.order[k]))
        for r in sorted(self.cols[c], key=self.row_order.__getitem__):
            partial.append(r)
            removed = self._select(r)
            yield from self._search(partial)
            self._deselect(r, removed)
            partial.pop()

    def _select(self, r) -> list:
        removed = []
        for c in self.rows[r]:
            for other in self.cols[c]:
                for c2 in self.rows[other]:
                    if c2 != c:
                        self.cols[c2].remove(other)
            removed.append(self.cols.pop(c))
        return removed

    def _deselect(self, r, removed: list) -> None:
        for c in reversed(self.rows[r]):
            self.cols[c] = removed.pop()
            for other in self.cols[c]:
                for c2 in self.rows[other]:
                    if c2 != c:
                        self.cols[c2].add(other)
