"""Ext-group dimension and filtration profiles between Steinberg complexes.

Ext groups between two staircase complexes reindex into a single Tits page
with a row shift, so every profile is a read-off from cached second pages:
total dimensions per degree, and for the two bottom degrees the graded
pieces with their atom-class labels.

The general staircase shapes (ordered partition with per-part windows)
only matter through binomial-complex bookkeeping; their cohomology is
computed in closed form and cross-checked against direct assembly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import atoms, levi
from . import roots as rt
from .engine import Engine
from .linalg import VectorSpan


def ps_ext_dim(n: int, d_k: int, i: Iterable[int], i_prime: Iterable[int], k: int) -> int:
    """Dimension of the degree-k Ext between two principal series.

    Nonzero only when the target parabolic is the smaller one, in which
    case it is the Levi cohomology of the smaller.
    """
    iset = rt.check_subset(n, i)
    jset = rt.check_subset(n, i_prime)
    if not iset <= jset:
        return 0
    return len(levi.levi_basis(n, d_k, iset, k))


@dataclass
class ExtProfile:
    n: int
    d_k: int
    i0: tuple[int, ...]
    i1: tuple[int, ...]
    i2: tuple[int, ...]
    i3: tuple[int, ...]
    h_min: int
    dims: dict[int, int] = field(default_factory=dict)
    graded: dict[int, list[int]] = field(default_factory=dict)
    labels: dict[int, list[list[dict]]] = field(default_factory=dict)

    def dim(self, h: int) -> int:
        return self.dims.get(h, 0)


def ext_profile(engine: Engine, i0, i1, i2, i3) -> ExtProfile:
    """Full Ext dimensions between two staircase complexes, plus the graded
    atom data at the two bottom degrees."""
    n, d_k = engine.n, engine.d_k
    i0, i1, i2, i3 = (tuple(sorted(rt.check_subset(n, s))) for s in (i0, i1, i2, i3))
    if not (set(i0) <= set(i1) and set(i2) <= set(i3)):
        raise ValueError("need nested pairs")
    sharp0 = frozenset(i2) | (frozenset(i1) - frozenset(i0))
    sharp1 = frozenset(i1) & frozenset(i3)
    h_min = len(sharp1) - 2 * len(sharp0) + len(i1)
    profile = ExtProfile(n, d_k, i0, i1, i2, i3, h_min)
    if not (set(i2) <= set(i1) and set(i1) <= set(i0) | set(i3)):
        return profile  # identically zero
    page = engine.page(sharp0, sharp1)
    shift = len(i1)
    for h in range(h_min, n * n - n + shift + 1):
        total = 0
        for ell in page.ells:
            k = ell + h - shift
            if 0 <= k <= page.kmax:
                total += page.e2_dim(ell, k)
        if total:
            profile.dims[h] = total
    for h in (h_min, h_min + 1):
        per_ell, lab = [], []
        for ell in page.ells:
            k = ell + h - shift
            if 0 <= k <= page.kmax:
                classes = atoms.psi(page, ell, k)
            else:
                classes = ()
            per_ell.append(len(classes))
            lab.append([levi.theta_to_wire(c.max_theta) for c in classes])
        profile.graded[h] = per_ell
        profile.labels[h] = lab
    return profile


def steinberg_profile(engine: Engine, i0, i2) -> ExtProfile:
    """Profile between two generalized Steinberg representations.

    Degrees are reported for the representations themselves, not for the
    shifted complexes resolving them.
    """
    n = engine.n
    delta = tuple(sorted(rt.delta(n)))
    raw = ext_profile(engine, i0, delta, i2, delta)
    offset = len(set(i2)) - len(set(i0))  # complexes sit at shifted degrees
    fixed = ExtProfile(n, engine.d_k, raw.i0, raw.i1, raw.i2, raw.i3,
                       raw.h_min + offset)
    for h, d in raw.dims.items():
        fixed.dims[h + offset] = d
    for h, g in raw.graded.items():
        fixed.graded[h + offset] = g
    for h, g in raw.labels.items():
        fixed.labels[h + offset] = g
    return fixed


def reindex_sets_match(n: int, i0, i1, i2, i3) -> bool:
    """The index families of the two descriptions of the same page agree."""
    i0, i1, i2, i3 = (rt.check_subset(n, s) for s in (i0, i1, i2, i3))
    direct = {frozenset(s) for r in range(n)
              for s in itertools.combinations(sorted(rt.delta(n)), r)
              if i2 <= frozenset(s) <= i3 and i0 | frozenset(s) == i1}
    sharp0 = i2 | (i1 - i0)
    sharp1 = i1 & i3
    shifted = {frozenset(s) for r in range(n)
               for s in itertools.combinations(sorted(rt.delta(n)), r)
               if sharp0 <= frozenset(s) <= sharp1}
    return direct == shifted


# -- staircase shapes ------------------------------------------------------------

@dataclass(frozen=True)
class ComplexShape:
    """Ordered partition of the simple roots with per-part column windows."""

    parts: tuple[tuple[int, ...], ...]
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for part in self.parts:
            if seen & set(part):
                raise ValueError("parts must be disjoint")
            seen |= set(part)
        for part, a, b in zip(self.parts, self.lo, self.hi):
            if not 0 <= a <= b <= len(part):
                raise ValueError("window outside part size")

    def admits(self, subset: frozenset[int]) -> bool:
        return all(self.lo[r] <= len(subset & set(part)) <= self.hi[r]
                   for r, part in enumerate(self.parts))


def shape_for_pair(n: int, i0, i1) -> ComplexShape:
    """The staircase shape recovering one nested pair."""
    i0 = rt.check_subset(n, i0)
    i1 = rt.check_subset(n, i1)
    parts = (tuple(sorted(i0)), tuple(sorted(i1 - i0)),
             tuple(sorted(rt.delta(n) - i1)))
    return ComplexShape(parts,
                        (len(i0), 0, 0),
                        (len(i0), len(i1 - i0), 0))


def binomial_complex_cohomology(free: int, j_lo: int, j_hi: int) -> dict[int, int]:
    """End dimensions of a truncated exact subset complex on free positions.

    The untruncated complex on one or more free positions is exact, so a
    truncation has cohomology only at its two ends.
    """
    if j_lo > j_hi:
        return {}
    if free == 0:
        return {0: 1} if j_lo <= 0 <= j_hi else {}
    if j_lo == j_hi:
        d = math.comb(free, j_lo)
        return {j_lo: d} if d else {}
    out = {}
    bottom = math.comb(free - 1, j_lo - 1) if j_lo >= 1 else 0
    top = math.comb(free - 1, j_hi)
    if bottom:
        out[j_lo] = bottom
    if top:
        out[j_hi] = top
    return out


def shape_e2_dims(engine: Engine, shape: ComplexShape, i: Iterable[int]) -> dict[tuple[int, int], int]:
    """Predicted second-page dimensions of a shape complex against one
    parabolic, as a map (column, row) -> dimension."""
    n, d_k = engine.n, engine.d_k
    iset = rt.check_subset(n, i)
    factors: list[dict[int, int]] = []
    for r, part in enumerate(shape.parts):
        inside = len(iset & set(part))
        free = len(part) - inside
        j_lo = max(shape.lo[r], inside) - inside
        j_hi = shape.hi[r] - inside
        factors.append(binomial_complex_cohomology(free, j_lo, j_hi))
        if not factors[-1]:
            return {}
    conv: dict[int, int] = {0: 1}
    for fac in factors:
        nxt: dict[int, int] = {}
        for a, da in conv.items():
            for b, db in fac.items():
                nxt[a + b] = nxt.get(a + b, 0) + da * db
        conv = nxt
    levi_table = levi.levi_basis_by_degree(n, d_k, tuple(sorted(iset)))
    out: dict[tuple[int, int], int] = {}
    for j, mult in conv.items():
        ell = len(iset) + j
        for k, basis in levi_table.items():
            out[(ell, k)] = mult * len(basis)
    return out


def shape_direct_dims(engine: Engine, shape: ComplexShape, i: Iterable[int]) -> dict[tuple[int, int], int]:
    """Assembled-complex cohomology of the same data, exact linear algebra.

    The index complex over qualifying supersets with signed removal maps is
    built outright; its cohomology multiplies the Levi dimensions.
    """
    n, d_k = engine.n, engine.d_k
    iset = rt.check_subset(n, i)
    qualifying: dict[int, list[frozenset[int]]] = {}
    for r in range(n):
        for s in itertools.combinations(sorted(rt.delta(n)), r):
            fs = frozenset(s)
            if iset <= fs and shape.admits(fs):
                qualifying.setdefault(len(fs), []).append(fs)
    index: dict[int, dict[frozenset[int], int]] = {}
    for ell, group in qualifying.items():
        ordered = sorted(group, key=lambda s: tuple(sorted(s)))
        index[ell] = {s: p for p, s in enumerate(ordered)}
    ranks: dict[int, int] = {}
    for ell, group in qualifying.items():
        span = VectorSpan()
        target = index.get(ell - 1, {})
        for s in group:
            col = {}
            for x in s:
                if x in iset:
                    continue
                smaller = s - {x}
                if smaller in target:
                    sign = -1 if rt.count_below(s, x) % 2 else 1
                    col[target[smaller]] = Fraction(sign)
            span.add(col)
        ranks[ell] = span.rank
    levi_table = levi.levi_basis_by_degree(n, d_k, tuple(sorted(iset)))
    out: dict[tuple[int, int], int] = {}
    for ell, group in qualifying.items():
        hdim = len(group) - ranks.get(ell, 0) - ranks.get(ell + 1, 0)
        if hdim:
            for k, basis in levi_table.items():
                out[(ell, k)] = hdim * len(basis)
    return out
