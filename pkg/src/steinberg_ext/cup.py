"""Cup products on second-page classes, in atom coordinates.

The graded cup of two columns restricts each side onto the common
intersection locus and wedges there; the intersection map between the two
column index families is a bijection, so each output component comes from
exactly one pair of input components.  The result, a cocycle, is reduced
modulo the image of the differential onto the atom basis.

On atom classes in the bottom rows the product is a single signed atom;
the separated constructor rebuilds that atom purely combinatorially (tail
twist, empty-block restrictions, one wedge) and is used as the
independent cross-check of the direct route.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, NamedTuple

from . import atoms, levi
from . import roots as rt
from .atoms import AtomClass
from .engine import Engine
from .errors import ConsistencyError
from .levi import Theta
from .linalg import Vec, VectorSpan
from .pages import ThVec, TitsPage

EVec = dict[AtomClass, Fraction]


class CupContext(NamedTuple):
    """A nested chain with bottom-degree flags for both factors."""

    n: int
    d_k: int
    i1: tuple[int, ...]
    i0: tuple[int, ...]
    i2: tuple[int, ...]
    i4: tuple[int, ...]
    prime0: bool = False
    prime1: bool = False


def make_context(n: int, d_k: int, i1, i0, i2, i4,
                 prime0: bool = False, prime1: bool = False) -> CupContext:
    i1, i0, i2, i4 = (tuple(sorted(rt.check_subset(n, s))) for s in (i1, i0, i2, i4))
    if not (set(i4) <= set(i2) <= set(i0) <= set(i1)):
        raise ValueError("need a nested chain of subsets")
    if prime0 and prime1:
        raise ValueError("at most one factor may sit one row above the bottom")
    return CupContext(n, d_k, i1, i0, i2, i4, prime0, prime1)


def context_pages(engine: Engine, ctx: CupContext) -> tuple[TitsPage, TitsPage, TitsPage]:
    i1, i0, i2, i4 = (set(ctx.i1), set(ctx.i0), set(ctx.i2), set(ctx.i4))
    page0 = engine.page(i2 | (i1 - i0), i1)
    page1 = engine.page(i4 | (i1 - i2), i1)
    page2 = engine.page(i4 | (i1 - i0), i1)
    return page0, page1, page2


def _component_split(vec: ThVec) -> dict[tuple[int, ...], ThVec]:
    out: dict[tuple[int, ...], ThVec] = {}
    for th, c in vec.items():
        out.setdefault(th.roots, {})[th] = c
    return out


def cup_graded(engine: Engine, ctx: CupContext, ell0: int, ell1: int,
               vec0: ThVec, vec1: ThVec) -> tuple[int, int, ThVec]:
    """Restrict-and-wedge product of two first-page cocycles.

    Returns the target column, row and the raw cochain (not yet reduced).
    Both inputs and the output must be cocycles on their pages.
    """
    page0, page1, page2 = context_pages(engine, ctx)
    row0 = atoms.bottom_row(page0, ell0) + (1 if ctx.prime0 else 0)
    row1 = atoms.bottom_row(page1, ell1) + (1 if ctx.prime1 else 0)
    ell2 = ell0 + ell1 - len(ctx.i1)
    row2 = row0 + row1
    if not page0.is_cocycle(vec0) or not page1.is_cocycle(vec1):
        raise ValueError("cup factors must be cocycles")
    out: ThVec = {}
    for roots0, comp0 in _component_split(vec0).items():
        for roots1, comp1 in _component_split(vec1).items():
            meet = tuple(sorted(set(roots0) & set(roots1)))
            r0 = levi.res_to(comp0, meet)
            if not r0:
                continue
            r1 = levi.res_to(comp1, meet)
            if not r1:
                continue
            for th, c in levi.wedge(r0, r1).items():
                new = out.get(th, Fraction(0)) + c
                if new:
                    out[th] = new
                else:
                    out.pop(th, None)
    if not page2.is_cocycle(out):
        raise ConsistencyError("graded cup product is not a cocycle",
                               context=ctx, columns=(ell0, ell1))
    return ell2, row2, out


def cup_atoms(engine: Engine, ctx: CupContext, cls0: AtomClass, cls1: AtomClass) -> tuple[int, AtomClass]:
    """Product of two basis classes: a single signed class, by recognition."""
    key = (ctx, cls0, cls1)
    if key in engine.cup_cache:
        return engine.cup_cache[key]
    page0, page1, page2 = context_pages(engine, ctx)
    for page, cls, prime in ((page0, cls0, ctx.prime0), (page1, cls1, ctx.prime1)):
        if not set(page.i0) <= set(cls.max_theta.roots) <= set(page.i1):
            raise ValueError("class does not live on the context page")
        if cls.k != atoms.bottom_row(page, cls.ell) + (1 if prime else 0):
            raise ValueError("class row does not match the context flags")
    ell2, row2, raw = cup_graded(engine, ctx, cls0.ell, cls1.ell,
                                 cls0.vector(), cls1.vector())
    coords = atoms.atom_reducer(page2, ell2, row2).reduce(raw)
    if len(coords) != 1:
        raise ConsistencyError("cup of two atoms is not a single atom",
                               context=ctx, support=len(coords))
    cls2, coeff = next(iter(coords.items()))
    if coeff * coeff != 1:
        raise ConsistencyError("cup coefficient is not a unit",
                               context=ctx, coefficient=str(coeff))
    result = (1 if coeff == 1 else -1, cls2)
    engine.cup_cache[key] = result
    return result


# -- the separated combinatorial route -------------------------------------------

def _single_restriction(vec: ThVec, target: tuple[int, ...]) -> tuple[int, Theta]:
    """Iterated restriction that must stay a single +/-1 multiple of a tuple."""
    res = levi.res_to(vec, target)
    if len(res) != 1:
        raise ConsistencyError("restriction expected to be a single term",
                               support=len(res))
    th, c = next(iter(res.items()))
    if c * c != 1:
        raise ConsistencyError("restriction coefficient is not a unit",
                               coefficient=str(c))
    return (1 if c == 1 else -1, th)


def _identify_class(page: TitsPage, ell: int, k: int, th: Theta) -> AtomClass:
    """The class whose maximal tuple twists onto the given tuple."""
    hits = []
    for cls in atoms.atom_classes(page, ell, k):
        if cls.max_theta == th:
            hits.append(cls)
            continue
        for s0, d0 in atoms.saturated_options(page, cls):
            if atoms.twist(page, cls.max_theta, s0, d0) == th:
                hits.append(cls)
                break
    if len(hits) != 1:
        raise ConsistencyError("twisted recognition must be unique",
                               page=page.key, bidegree=(ell, k), hits=len(hits))
    return hits[0]


def cup_atoms_separated(engine: Engine, ctx: CupContext,
                        cls0: AtomClass, cls1: AtomClass) -> tuple[int, AtomClass]:
    """Combinatorial product under the separation hypothesis.

    Requires every element of the first difference set below every element
    of the second.  The first factor is tail-twisted so its trailing block
    is unlabeled, both factors restrict to the common locus in single
    terms, and one wedge plus twisted recognition produces the answer
    without any linear algebra over the target page.
    """
    d_left = set(ctx.i0) - set(ctx.i2)
    d_right = set(ctx.i2) - set(ctx.i4)
    if d_left and d_right and max(d_left) >= min(d_right):
        raise ValueError("separation hypothesis fails; use the direct product")
    page0, page1, page2 = context_pages(engine, ctx)
    th0 = cls0.max_theta
    th1 = cls1.max_theta
    removals = set(th0.roots) - set(th1.roots)
    blocks0 = rt.blocks(th0.n, th0.roots)
    dirty = any(th0.blocks[d] for d, b in enumerate(blocks0)
                if set(b) & removals)
    if dirty:
        seq = atoms.segments(page0, th0)
        s0 = len(seq) - 1
        d0 = len(th0.blocks)
        reason = atoms.saturation_failure(page0, th0, s0)
        if reason is not None:
            raise ConsistencyError("final segment not saturated", reason=reason)
        th0 = atoms.twist(page0, th0, s0, d0)
    meet = tuple(sorted(set(th0.roots) & set(th1.roots)))
    s0_, t0 = _single_restriction({th0: Fraction(1)}, meet)
    s1_, t1 = _single_restriction({th1: Fraction(1)}, meet)
    wedged = levi.wedge_theta(t0, t1)
    if wedged is None:
        raise ConsistencyError("separated product vanished at the wedge step")
    wsign, th2 = wedged
    ell2 = len(meet)
    row2 = th2.degree
    cls2 = _identify_class(page2, ell2, row2, th2)
    sign = s0_ * s1_ * wsign * th0.sign * th1.sign * th2.sign
    return sign, cls2


# -- bottom Ext spaces in atom coordinates ----------------------------------------

class ESpace:
    """Bottom (or bottom-plus-one) Ext space for one difference set."""

    def __init__(self, engine: Engine, diff: Iterable[int], prime: bool = False):
        self.engine = engine
        self.diff = tuple(sorted(rt.check_subset(engine.n, diff))) if diff else ()
        self.prime = prime
        self.page = engine.diff_page(self.diff)
        self.basis: list[AtomClass] = []
        for ell in self.page.ells:
            k = atoms.bottom_row(self.page, ell) + (1 if prime else 0)
            if 0 <= k <= self.page.kmax:
                self.basis.extend(atoms.psi(self.page, ell, k))
        self.index = {cls: i for i, cls in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, vec: EVec) -> Vec:
        out: Vec = {}
        for cls, c in vec.items():
            if cls not in self.index:
                raise ValueError("class outside this space")
            if c:
                out[self.index[cls]] = Fraction(c)
        return out

    def from_coords(self, coords: Vec) -> EVec:
        return {self.basis[i]: c for i, c in coords.items() if c}


def e_space(engine: Engine, diff: Iterable[int], prime: bool = False) -> ESpace:
    cache = getattr(engine, "_espaces", None)
    if cache is None:
        cache = {}
        engine._espaces = cache  # type: ignore[attr-defined]
    key = (tuple(sorted(diff)), prime)
    if key not in cache:
        cache[key] = ESpace(engine, diff, prime)
    return cache[key]


def cup_e(engine: Engine, i0, i2, i4, x: EVec, y: EVec,
          prime0: bool = False, prime1: bool = False) -> EVec:
    """Bilinear extension of the atom product along a chain below the top."""
    ctx = make_context(engine.n, engine.d_k, rt.delta(engine.n), i0, i2, i4,
                       prime0, prime1)
    out: EVec = {}
    for cls0, c0 in x.items():
        for cls1, c1 in y.items():
            sgn, cls2 = cup_atoms(engine, ctx, cls0, cls1)
            new = out.get(cls2, Fraction(0)) + c0 * c1 * sgn
            if new:
                out[cls2] = new
            else:
                out.pop(cls2, None)
    return out


def unit_vec(engine: Engine) -> EVec:
    space = e_space(engine, ())
    if space.dim != 1:
        raise ConsistencyError("unit space must be a line", dim=space.dim)
    return {space.basis[0]: Fraction(1)}


def char_atom(engine: Engine, pos: int, kind: int) -> AtomClass:
    """The rank-one class carrying a single center character."""
    page = engine.diff_page((pos,))
    ell = engine.n - 2
    target = levi.make_theta([(pos, kind)],
                             sorted(rt.delta(engine.n) - {pos}),
                             [(), ()])
    for cls in atoms.psi(page, ell, 1):
        if cls.max_theta == target:
            return cls
    raise ConsistencyError("character class missing", pos=pos, kind=kind)


def smooth_vec(engine: Engine, diff: Iterable[int]) -> EVec:
    """Iterated valuation product spanning the canonical smooth line.

    Positions are consumed in ascending order; any other single-step chain
    gives the same line (checked in the test-suite, not here).
    """
    cache = getattr(engine, "_smooth", None)
    if cache is None:
        cache = {}
        engine._smooth = cache  # type: ignore[attr-defined]
    key = tuple(sorted(diff))
    if key not in cache:
        acc = unit_vec(engine)
        cur: set[int] = set()
        for pos in key:
            valv = {char_atom(engine, pos, levi.VAL): Fraction(1)}
            acc = cup_e(engine, cur | {pos}, cur, (), valv, acc)
            cur.add(pos)
        cache[key] = acc
    return dict(cache[key])


def generators_xbar(engine: Engine, alpha: rt.Root) -> dict[object, EVec]:
    """The generating family of one positive root: valuation plus one class
    per embedding on simple roots, one class per embedding otherwise."""
    run = rt.root_interval(alpha)
    if len(run) == 1:
        pos = run[0]
        out: dict[object, EVec] = {"inf": {char_atom(engine, pos, levi.VAL): Fraction(1)}}
        for iota in range(engine.d_k):
            out[iota] = {char_atom(engine, pos, 1 + iota): Fraction(1)}
        return out
    page = engine.diff_page(run)
    ell = engine.n - 2
    k = 2 * len(run) - 1
    out = {}
    i, j = alpha
    for cls in atoms.psi(page, ell, k):
        th = cls.max_theta
        if th.chars:
            continue
        if set(th.roots) != rt.delta(engine.n) - {i}:
            continue
        label = th.blocks[-1]
        if th.blocks[:-1] != ((),) * (len(th.blocks) - 1) or len(label) != 1:
            continue
        m, iota = label[0]
        if m == k:
            out[iota] = {cls: Fraction(1)}
    if len(out) != engine.d_k:
        raise ConsistencyError("generator family has the wrong size",
                               alpha=alpha, found=sorted(map(str, out)))
    return out


def basis_x(engine: Engine, i0: Iterable[int], i2: Iterable[int]) -> list[tuple]:
    """The cup basis: one vector per interval partition and factor choice.

    Entries are (partition, factor keys, vector); the vectors must span the
    whole bottom Ext space of the difference set.
    """
    i0 = frozenset(rt.check_subset(engine.n, i0)) if i0 else frozenset()
    i2 = frozenset(rt.check_subset(engine.n, i2)) if i2 else frozenset()
    if not i2 <= i0:
        raise ValueError("need nested subsets")
    diff = i0 - i2
    out = []
    for partition in rt.interval_partitions(diff):
        fams = [generators_xbar(engine, rt.interval_root(part)) for part in partition]
        for choice in itertools.product(*(sorted(f, key=str) for f in fams)):
            acc = unit_vec(engine)
            cur: set[int] = set()
            for part, fam, key in zip(reversed(partition),
                                      reversed(fams), reversed(choice)):
                vec = fam[key]
                acc = cup_e(engine, cur | set(part), cur, (), vec, acc)
                cur |= set(part)
            out.append((partition, choice, acc))
    return out


def basis_x_rank(engine: Engine, i0, i2) -> tuple[int, int, list[tuple]]:
    vectors = basis_x(engine, i0, i2)
    diff = frozenset(i0) - frozenset(i2)
    space = e_space(engine, diff)
    span = VectorSpan()
    for _, _, vec in vectors:
        span.add(space.coords(vec))
    return span.rank, space.dim, vectors


def iota_embed(engine: Engine, i0, i2, u: EVec) -> EVec:
    """The fixed section into the top space: smooth on both sides."""
    i0 = frozenset(i0) if i0 else frozenset()
    i2 = frozenset(i2) if i2 else frozenset()
    delta = rt.delta(engine.n)
    left = smooth_vec(engine, delta - i0)
    right = smooth_vec(engine, i2)
    mid = cup_e(engine, delta, i0, i2, left, u)
    return cup_e(engine, delta, i2, (), mid, right)


def ehat_space(engine: Engine) -> ESpace:
    return e_space(engine, rt.delta(engine.n))


def ehat_subspace(engine: Engine, i0, i2) -> list[Vec]:
    """Coordinates (in the top atom basis) of the embedded bottom Ext space."""
    space = e_space(engine, frozenset(i0) - frozenset(i2))
    top = ehat_space(engine)
    out = []
    for cls in space.basis:
        out.append(top.coords(iota_embed(engine, i0, i2, {cls: Fraction(1)})))
    return out
