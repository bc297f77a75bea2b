"""Shared computation context: page cache, reducers, and cup tables."""

from __future__ import annotations

from typing import Iterable

from . import roots as rt
from .pages import PageKey, PageStore, TitsPage


class Engine:
    """One rank and field degree, with all derived objects memoized.

    Pages, atom classes, reduction spans and cup tables are shared by every
    higher-level computation, so a single engine instance should be reused
    across queries of the same size.
    """

    def __init__(self, n: int, d_k: int, store: PageStore | None = None):
        if n < 1 or d_k < 1:
            raise ValueError("rank and field degree must be positive")
        self.n = n
        self.d_k = d_k
        self.store = store or PageStore(None)
        self._pages: dict[PageKey, TitsPage] = {}
        self.cup_cache: dict = {}

    def page(self, i0: Iterable[int], i1: Iterable[int]) -> TitsPage:
        key = PageKey(self.n, self.d_k,
                      tuple(sorted(rt.check_subset(self.n, i0))),
                      tuple(sorted(rt.check_subset(self.n, i1))))
        if key not in self._pages:
            self._pages[key] = TitsPage(self.n, self.d_k, key.i0, key.i1,
                                        store=self.store)
        return self._pages[key]

    def delta(self) -> frozenset[int]:
        return rt.delta(self.n)

    def diff_page(self, diff: Iterable[int]) -> TitsPage:
        """Page carrying the bottom Ext spaces with the given difference set."""
        return self.page(self.delta() - frozenset(diff), self.delta())
