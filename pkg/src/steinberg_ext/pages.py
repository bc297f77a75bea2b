"""First and second pages of the Tits-complex spectral sequence.

A page is indexed by a nested pair of root subsets.  Its column at -ell
collects the Levi cohomology bases over all intermediate subsets of size
ell, and the differential is the signed sum of single-root restrictions,
the sign being the parity of the number of smaller elements removed.

Pages are immutable and memoized per bidegree; an optional disk store
round-trips {params, basis, matrix} JSON documents per bidegree.
"""

from __future__ import annotations

import itertools
import json
import os
from fractions import Fraction
from typing import Iterable, NamedTuple

from . import levi
from . import roots as rt
from .linalg import SparseRationalMatrix, Vec, VectorSpan, rank_kernel_image

ThVec = dict[levi.Theta, Fraction]


class PageKey(NamedTuple):
    n: int
    d_k: int
    i0: tuple[int, ...]
    i1: tuple[int, ...]

    def token(self) -> str:
        i0 = ",".join(map(str, self.i0))
        i1 = ",".join(map(str, self.i1))
        return f"n{self.n}-d{self.d_k}-lo[{i0}]-hi[{i1}]"


class PageStore:
    """One JSON document per (page, bidegree) under a cache directory."""

    def __init__(self, directory: str | None):
        self.directory = directory

    def _path(self, key: PageKey, ell: int, k: int) -> str | None:
        if not self.directory:
            return None
        return os.path.join(self.directory, "pages", f"{key.token()}-l{ell}-k{k}.json")

    def load(self, key: PageKey, ell: int, k: int) -> dict | None:
        path = self._path(key, ell, k)
        if not path or not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)

    def save(self, key: PageKey, ell: int, k: int, doc: dict) -> None:
        path = self._path(key, ell, k)
        if not path:
            return
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)  # atomic publish


def bidegree_document(page: "TitsPage", ell: int, k: int) -> dict:
    """Canonical JSON payload for one bidegree (basis plus differential)."""
    basis = page.basis(ell, k)
    matrix = page.d1_matrix(ell, k)
    entries = sorted(
        [[r, c, x.numerator, x.denominator] for (r, c), x in matrix.entries.items()]
    )
    return {
        "params": {"n": page.n, "d_K": page.d_k,
                   "i0": list(page.i0), "i1": list(page.i1),
                   "ell": ell, "k": k},
        "basis": [levi.theta_to_wire(th) for th in basis],
        "matrix": entries,
    }


class TitsPage:
    """E_1 page (bases and differentials) with exact E_2 data on demand."""

    def __init__(self, n: int, d_k: int, i0: Iterable[int], i1: Iterable[int],
                 store: PageStore | None = None):
        self.n = n
        self.d_k = d_k
        self.i0 = tuple(sorted(rt.check_subset(n, i0)))
        self.i1 = tuple(sorted(rt.check_subset(n, i1)))
        self.empty = not (set(self.i0) <= set(self.i1))
        self.store = store or PageStore(None)
        self.key = PageKey(n, d_k, self.i0, self.i1)
        self._basis: dict[tuple[int, int], tuple[levi.Theta, ...]] = {}
        self._index: dict[tuple[int, int], dict[levi.Theta, int]] = {}
        self._matrix: dict[tuple[int, int], SparseRationalMatrix] = {}
        self._rank: dict[tuple[int, int], int] = {}
        self._image_span: dict[tuple[int, int], VectorSpan] = {}
        self._d1_terms: dict[levi.Theta, ThVec] = {}

    # -- layout ------------------------------------------------------------

    @property
    def kmax(self) -> int:
        return (self.n * self.n - 1) * self.d_k

    @property
    def ells(self) -> range:
        if self.empty:
            return range(0)
        return range(len(self.i0), len(self.i1) + 1)

    def intermediate_subsets(self, ell: int) -> list[tuple[int, ...]]:
        lo, hi = set(self.i0), set(self.i1)
        free = sorted(hi - lo)
        take = ell - len(lo)
        if take < 0 or take > len(free):
            return []
        return sorted(tuple(sorted(lo | set(extra)))
                      for extra in itertools.combinations(free, take))

    def basis(self, ell: int, k: int) -> tuple[levi.Theta, ...]:
        if self.empty or ell not in self.ells or not 0 <= k <= self.kmax:
            return ()
        key = (ell, k)
        if key not in self._basis:
            out: list[levi.Theta] = []
            for mid in self.intermediate_subsets(ell):
                out.extend(levi.levi_basis(self.n, self.d_k, mid, k))
            self._basis[key] = tuple(sorted(out))
        return self._basis[key]

    def index(self, ell: int, k: int) -> dict[levi.Theta, int]:
        key = (ell, k)
        if key not in self._index:
            self._index[key] = {th: p for p, th in enumerate(self.basis(ell, k))}
        return self._index[key]

    def dim(self, ell: int, k: int) -> int:
        return len(self.basis(ell, k))

    # -- differential --------------------------------------------------------

    def d1_terms(self, th: levi.Theta) -> ThVec:
        """Differential of one basis element, as a combination of tuples."""
        if th not in self._d1_terms:
            out: ThVec = {}
            lo = set(self.i0)
            for i in th.roots:
                if i in lo:
                    continue
                sign = -1 if rt.count_below(th.roots, i) % 2 else 1
                for th2, par in levi.restriction_terms(th, i).items():
                    new = out.get(th2, Fraction(0)) + sign * par
                    if new:
                        out[th2] = new
                    else:
                        out.pop(th2, None)
            self._d1_terms[th] = out
        return self._d1_terms[th]

    def apply_d1(self, vec: ThVec) -> ThVec:
        out: ThVec = {}
        for th, c in vec.items():
            for th2, x in self.d1_terms(th).items():
                new = out.get(th2, Fraction(0)) + c * x
                if new:
                    out[th2] = new
                else:
                    out.pop(th2, None)
        return out

    def is_cocycle(self, vec: ThVec) -> bool:
        return not self.apply_d1(vec)

    def d1_matrix(self, ell: int, k: int) -> SparseRationalMatrix:
        """Matrix of the differential out of column -ell (rows at -ell+1)."""
        key = (ell, k)
        if key not in self._matrix:
            cached = self.store.load(self.key, ell, k)
            if cached is not None:
                self._restore_bidegree(ell, k, cached)
            else:
                src = self.basis(ell, k)
                dst = self.index(ell - 1, k) if ell - 1 in self.ells else {}
                entries: dict[tuple[int, int], Fraction] = {}
                for c, th in enumerate(src):
                    for th2, x in self.d1_terms(th).items():
                        entries[(dst[th2], c)] = x
                self._matrix[key] = SparseRationalMatrix(len(dst), len(src), entries)
                self.store.save(self.key, ell, k, bidegree_document(self, ell, k))
        return self._matrix[key]

    def _restore_bidegree(self, ell: int, k: int, doc: dict) -> None:
        basis = tuple(levi.theta_from_wire(d) for d in doc["basis"])
        self._basis[(ell, k)] = basis
        rows = self.dim(ell - 1, k) if ell - 1 in self.ells else 0
        entries = {(r, c): Fraction(num, den) for r, c, num, den in doc["matrix"]}
        self._matrix[(ell, k)] = SparseRationalMatrix(rows, len(basis), entries)

    def d1_rank(self, ell: int, k: int) -> int:
        key = (ell, k)
        if key not in self._rank:
            if ell not in self.ells or ell - 1 not in self.ells:
                self._rank[key] = 0
            else:
                rank, _, _ = rank_kernel_image(self.d1_matrix(ell, k))
                self._rank[key] = rank
        return self._rank[key]

    def image_span(self, ell: int, k: int) -> VectorSpan:
        """Span of the image of the differential landing in column -ell."""
        key = (ell, k)
        if key not in self._image_span:
            span = VectorSpan()
            if ell + 1 in self.ells:
                for col in self.d1_matrix(ell + 1, k).columns():
                    span.add(col)
            self._image_span[key] = span
        return self._image_span[key]

    def image_basis(self, ell: int, k: int) -> list[Vec]:
        span = self.image_span(ell, k)
        return [v for v, _ in span.pivots.values()]

    # -- E2 ------------------------------------------------------------------

    def e2_dim(self, ell: int, k: int) -> int:
        if self.empty or ell not in self.ells:
            return 0
        kdim = self.dim(ell, k) - self.d1_rank(ell, k)
        return kdim - self.d1_rank(ell + 1, k)

    def e2_reps(self, ell: int, k: int) -> list[Vec]:
        """Kernel vectors spanning a complement of the image (index coords)."""
        if self.empty or ell not in self.ells:
            return []
        _, kernel, _ = rank_kernel_image(self.d1_matrix(ell, k))
        # seed with the image, then keep kernel vectors that enlarge the span
        span = VectorSpan()
        if ell + 1 in self.ells:
            for col in self.d1_matrix(ell + 1, k).columns():
                span.add(col)
        return [v for v in kernel if span.add(v)]

    def vector_to_coords(self, ell: int, k: int, vec: ThVec) -> Vec:
        idx = self.index(ell, k)
        out: Vec = {}
        for th, c in vec.items():
            if th not in idx:
                raise ValueError(f"tuple outside bidegree (-{ell},{k}): {th}")
            if c:
                out[idx[th]] = Fraction(c)
        return out

    def coords_to_vector(self, ell: int, k: int, coords: Vec) -> ThVec:
        basis = self.basis(ell, k)
        return {basis[i]: c for i, c in coords.items() if c}

    # -- checks ----------------------------------------------------------------

    def d1_squared_is_zero(self, ks: Iterable[int] | None = None) -> bool:
        for k in (ks if ks is not None else range(self.kmax + 1)):
            for ell in self.ells:
                for th in self.basis(ell, k):
                    if self.apply_d1(self.d1_terms(th)):
                        return False
        return True

    def euler_check(self, k: int) -> bool:
        e1 = sum((-1) ** ell * self.dim(ell, k) for ell in self.ells)
        e2 = sum((-1) ** ell * self.e2_dim(ell, k) for ell in self.ells)
        return e1 == e2

    # -- isotypic decomposition --------------------------------------------------

    def char_components(self, ell: int, k: int) -> dict[tuple[levi.CChar, ...], list[int]]:
        """Basis indices grouped by their character subset (d1 preserves it)."""
        out: dict[tuple[levi.CChar, ...], list[int]] = {}
        for pos, th in enumerate(self.basis(ell, k)):
            out.setdefault(th.chars, []).append(pos)
        return out

    def component_e2_dim(self, ell: int, k: int,
                         keep: "callable") -> int:
        """E2 dimension of the direct summand of tuples selected by keep(chars)."""
        def restrict(ell_: int) -> tuple[list[levi.Theta], dict[levi.Theta, int]]:
            sub = [th for th in self.basis(ell_, k) if keep(th.chars)]
            return sub, {th: p for p, th in enumerate(sub)}

        src, _ = restrict(ell)
        _, dst_index = restrict(ell - 1) if ell - 1 in self.ells else ([], {})
        span = VectorSpan()
        for th in src:
            span.add({dst_index[th2]: x for th2, x in self.d1_terms(th).items()})
        rank_out = span.rank
        up_rank = 0
        if ell + 1 in self.ells:
            up_src, _ = restrict(ell + 1)
            _, mid_index = restrict(ell)
            span_up = VectorSpan()
            for th in up_src:
                col = {mid_index[th2]: x for th2, x in self.d1_terms(th).items()}
                span_up.add(col)
            up_rank = span_up.rank
        return len(src) - rank_out - up_rank


def page_cached(cache: dict, n: int, d_k: int, i0: Iterable[int], i1: Iterable[int],
                store: PageStore | None = None) -> TitsPage:
    key = PageKey(n, d_k, tuple(sorted(i0)), tuple(sorted(i1)))
    if key not in cache:
        cache[key] = TitsPage(n, d_k, key.i0, key.i1, store=store)
    return cache[key]
