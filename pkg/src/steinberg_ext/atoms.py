"""Atomic tuples: the combinatorial model of the second page.

Two moves generate everything here.  Gluing two adjacent blocks (keeping
both labels) and splitting a block (keeping the label on the left part)
combine into "improvements", which move one block boundary to the left
while preserving labels.  Improvements strictly increase the sum of the
root subset, so the induced order is well founded; a tuple with no
improvement available and the right boundary-block shape is maximal, and
its downward closure under inverse improvements is its class.  The signed
sum over a class is a cocycle representative of the second page in the
bottom two rows.

Twists rearrange the blocks of one segment so the empty block sits at a
prescribed position; twisted classes are the analogous closures for the
twisted move set and differ from the original class by a boundary.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from . import levi
from . import roots as rt
from .errors import ConsistencyError
from .levi import Theta
from .linalg import Vec, VectorSpan
from .pages import ThVec, TitsPage


# -- elementary moves ---------------------------------------------------------

def p_plus(th: Theta, i: int) -> Theta | None:
    """Glue the two blocks separated by position i; None when undefined.

    Undefined when i is a root of the tuple, carries a center character,
    or the two adjacent labels overlap.
    """
    if i in th.roots or not 1 <= i <= th.n - 1:
        return None
    if i in levi.char_positions(th.chars):
        return None
    psums = rt.partial_sums(rt.block_sizes(th.n, th.roots))
    d = psums.index(i)  # boundaries are exactly the proper partial sums
    left, right = th.blocks[d], th.blocks[d + 1]
    if set(left) & set(right):
        return None
    merged = levi.make_label(left + right)
    blocks = th.blocks[:d] + (merged,) + th.blocks[d + 2:]
    return Theta(th.chars, tuple(sorted(th.roots + (i,))), blocks)


def p_minus(th: Theta, i: int) -> Theta | None:
    """Split the block containing root i at that position, label going left."""
    if i not in th.roots:
        return None
    n = th.n
    sizes = rt.block_sizes(n, th.roots)
    psums = rt.partial_sums(sizes)
    d = next(d for d, b in enumerate(rt.blocks(n, th.roots)) if i in b)
    base = psums[d - 1] if d else 0
    if levi.label_max(th.blocks[d]) > 2 * (i - base) - 1:
        return None
    blocks = th.blocks[:d] + (th.blocks[d], ()) + th.blocks[d + 1:]
    return Theta(th.chars, tuple(r for r in th.roots if r != i), blocks)


def e_value(th: Theta) -> int:
    """Sum over blocks of the largest primitive degree (0 on empty labels)."""
    return sum(levi.label_max(b) for b in th.blocks)


# -- page-relative helpers ------------------------------------------------------

def available_positions(page: TitsPage, th: Theta) -> frozenset[int]:
    """Positions usable as block boundaries: inside i1, free of characters."""
    return frozenset(set(page.i1) - levi.char_positions(th.chars))


def segments(page: TitsPage, th: Theta) -> tuple[int, ...]:
    return rt.segment_boundaries(th.n, levi.char_positions(th.chars),
                                 page.i1, th.roots)


# -- improvements ----------------------------------------------------------------

def improvements(page: TitsPage, th: Theta, level: int | None = None) -> list[tuple[int, Theta]]:
    """All (level, improved tuple) pairs, optionally at a single level.

    An improvement at level d removes a root of block d outside the page
    floor and glues the boundary after block d; defined when the label of
    block d fits left of the removed root and the boundary position is
    available.
    """
    out: list[tuple[int, Theta]] = []
    n, lo = th.n, set(page.i0)
    sizes = rt.block_sizes(n, th.roots)
    psums = rt.partial_sums(sizes)
    avail = available_positions(page, th)
    blocks_ = rt.blocks(n, th.roots)
    levels = range(1, len(sizes) + 1) if level is None else (level,)
    for d in levels:
        if d < 1 or d > len(sizes):
            continue
        boundary = psums[d - 1]
        if boundary >= n or boundary not in avail:
            continue  # boundary must be a simple root position, usable
        base = psums[d - 2] if d >= 2 else 0
        cap = levi.label_max(th.blocks[d - 1])
        for i in blocks_[d - 1]:
            if i in lo:
                continue
            if cap > 2 * (i - base) - 1:
                continue
            stepped = p_minus(th, i)
            assert stepped is not None
            glued = p_plus(stepped, boundary)
            assert glued is not None
            out.append((d, glued))
    return out


def inverse_improvements(page: TitsPage, th: Theta) -> list[tuple[int, Theta]]:
    """All (level, tuple) whose improvement at that level yields th.

    Moves a boundary of th back to the right: the boundary position joins
    the root subset and a root of the following block is released; the
    label of that block must still fit in the shrunk remainder.
    """
    out: list[tuple[int, Theta]] = []
    n, lo = th.n, set(page.i0)
    sizes = rt.block_sizes(n, th.roots)
    psums = rt.partial_sums(sizes)
    avail = available_positions(page, th)
    blocks_ = rt.blocks(n, th.roots)
    for d in range(1, len(sizes)):
        i = psums[d - 1]  # boundary between blocks d, d+1 of th
        if i in lo or i not in avail:
            continue
        b_end = psums[d]
        label_next = th.blocks[d]
        for i_old in blocks_[d]:
            if i_old in lo:
                continue  # releasing a floor root would leave the page
            if levi.label_max(label_next) > 2 * (b_end - i_old) - 1:
                continue
            roots2 = tuple(sorted((set(th.roots) - {i_old}) | {i}))
            blocks2 = th.blocks[:d - 1] + (th.blocks[d - 1], label_next) + th.blocks[d + 1:]
            out.append((d, Theta(th.chars, roots2, blocks2)))
    return out


# -- atomicity predicates ----------------------------------------------------------

def is_maximally_atomic(page: TitsPage, th: Theta) -> bool:
    """No improvement exists and every block has a locked shape.

    Beyond the absence of improvements, each block must be resolved: empty
    labels only on size-one blocks opening a segment (or blocks fully inside
    the floor), floor-free blocks carry a top-degree pair, and blocks
    meeting the floor have no roots above their floor run and a pair deep
    enough to pin the roots below it.
    """
    if improvements(page, th):
        return False
    seq = segments(page, th)
    starts = {seq[s - 1] + 1 for s in range(1, len(seq))}
    sizes = rt.block_sizes(th.n, th.roots)
    lo = set(page.i0)
    blocks_ = rt.blocks(th.n, th.roots)
    for d, label in enumerate(th.blocks, start=1):
        if not label and d not in starts:
            return False
        size = sizes[d - 1]
        top_pair = levi.label_max(label) == 2 * size - 1
        if not set(blocks_[d - 1]) & lo:
            if not top_pair:
                if size != 1 or label or d not in starts:
                    return False
        else:
            minus, plus = block_splits(blocks_[d - 1], lo)
            if plus and not top_pair:
                return False
            if not plus and levi.label_max(label) < 2 * len(minus) + 1:
                if minus or label or d not in starts:
                    return False
    return True


def block_splits(block: tuple[int, ...], lo: set[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Parts of a block's roots below and above its rightmost floor run."""
    runs = [run for run in rt.maximal_intervals(set(block) & lo)]
    if not runs:
        raise ValueError("block does not meet the floor")
    top_run = runs[-1]
    minus = tuple(i for i in block if i < top_run[0])
    plus = tuple(i for i in block if i > top_run[-1])
    return minus, plus


def is_standard(page: TitsPage, th: Theta) -> bool:
    """Existence of an interior empty floor-block with resolved tail."""
    sizes = rt.block_sizes(th.n, th.roots)
    psums = rt.partial_sums(sizes)
    avail = available_positions(page, th)
    lo = set(page.i0)
    blocks_ = rt.blocks(th.n, th.roots)
    r = len(sizes)
    for dstar in range(2, r + 1):
        if psums[dstar - 2] not in avail:
            continue
        if th.blocks[dstar - 1]:
            continue
        if any(not th.blocks[d - 1] for d in range(dstar + 1, r + 1)):
            continue
        if not set(blocks_[dstar - 1]) <= lo:
            continue
        if any(lvl >= dstar for lvl, _ in improvements(page, th)):
            # refuses when an improvement chain at level >= dstar exists;
            # one step suffices since chains start with a single move
            continue
        return True
    return False


# -- classes -----------------------------------------------------------------------

class AtomClass(NamedTuple):
    max_theta: Theta
    members: tuple[Theta, ...]
    ell: int
    k: int

    def vector(self) -> ThVec:
        return {th: Fraction(th.sign) for th in self.members}


def maximal_tuples(page: TitsPage, ell: int, k: int) -> list[Theta]:
    return [th for th in page.basis(ell, k) if is_maximally_atomic(page, th)]


def downward_closure(page: TitsPage, top: Theta) -> tuple[Theta, ...]:
    seen = {top}
    frontier = [top]
    while frontier:
        nxt = []
        for th in frontier:
            for _, lower in inverse_improvements(page, th):
                if lower not in seen:
                    seen.add(lower)
                    nxt.append(lower)
        frontier = nxt
    return tuple(sorted(seen))


def equivalence_class(page: TitsPage, theta_max: Theta) -> AtomClass:
    """The class below one maximal tuple; rejects non-maximal input."""
    if not is_maximally_atomic(page, theta_max):
        raise ValueError("tuple is not maximally atomic on this page")
    members = downward_closure(page, theta_max)
    return AtomClass(theta_max, members, len(theta_max.roots), theta_max.degree)


def atom_classes(page: TitsPage, ell: int, k: int) -> tuple[AtomClass, ...]:
    """All classes at one bidegree; closures must not overlap."""
    cache = getattr(page, "_atom_classes", None)
    if cache is None:
        cache = {}
        page._atom_classes = cache  # type: ignore[attr-defined]
    key = (ell, k)
    if key not in cache:
        classes = []
        used: dict[Theta, Theta] = {}
        for top in maximal_tuples(page, ell, k):
            members = downward_closure(page, top)
            for th in members:
                if th in used:
                    raise ConsistencyError(
                        "atomic classes overlap",
                        page=page.key, bidegree=(ell, k),
                        tuple=str(th), tops=(str(used[th]), str(top)))
                used[th] = top
            classes.append(AtomClass(top, members, ell, k))
        cache[key] = tuple(sorted(classes))
    return cache[key]


def atomic_tuples(page: TitsPage, ell: int, k: int) -> frozenset[Theta]:
    return frozenset(th for cls in atom_classes(page, ell, k) for th in cls.members)


def bottom_row(page: TitsPage, ell: int) -> int:
    return ell + len(page.i1) - 2 * len(page.i0)


def psi(page: TitsPage, ell: int, k: int) -> tuple[AtomClass, ...]:
    """Second-page basis classes at the bottom two rows of one column.

    At the bottom row every class qualifies; one row up only the classes
    killed by the differential do.
    """
    base = bottom_row(page, ell)
    if k not in (base, base + 1):
        raise ValueError(f"row {k} is not one of the two bottom rows {base}, {base + 1}")
    classes = atom_classes(page, ell, k)
    if k == base:
        return classes
    keep = []
    for cls in classes:
        image = page.apply_d1(cls.vector())
        if not image:
            keep.append(cls)
    return tuple(keep)


def differential_vanishes_closed_form(page: TitsPage, cls: AtomClass) -> bool:
    """Predicate form of the bottom-plus-one differential criterion.

    The differential of the class vector is nonzero exactly when all
    character positions sit inside the ceiling and exactly one segment both
    starts with a labeled block and meets the page floor.
    """
    th = cls.max_theta
    if not levi.char_positions(th.chars) <= set(page.i1):
        return True
    seq = segments(page, th)
    lo = set(page.i0)
    blocks_ = rt.blocks(th.n, th.roots)
    hot = []
    for s in range(1, len(seq)):
        if not th.blocks[seq[s - 1]]:
            continue
        if any(set(blocks_[d - 1]) & lo for d in range(seq[s - 1] + 1, seq[s] + 1)):
            hot.append(s)
    return len(hot) != 1


# -- the combinatorial subcomplex ----------------------------------------------------

def diamond_check(page: TitsPage, k: int) -> tuple[bool, dict]:
    """Closure under the differential plus equality of row cohomologies."""
    per_col: dict[int, tuple[AtomClass, ...]] = {}
    vecs: dict[int, list[Vec]] = {}
    for ell in page.ells:
        per_col[ell] = atom_classes(page, ell, k)
        vecs[ell] = [page.vector_to_coords(ell, k, cls.vector()) for cls in per_col[ell]]
    # matrices of the restricted differential in class coordinates
    ranks: dict[int, int] = {}
    dims_sub: dict[int, int] = {}
    for ell in page.ells:
        dims_sub[ell] = len(per_col[ell])
        if ell - 1 not in page.ells:
            ranks[ell] = 0
            continue
        span_target = VectorSpan(track_witness=True)
        for v in vecs[ell - 1]:
            if not span_target.add(v):
                raise ConsistencyError("class vectors are dependent",
                                       page=page.key, bidegree=(ell - 1, k))
        cols = []
        for cls in per_col[ell]:
            img = page.apply_d1(cls.vector())
            coords = page.vector_to_coords(ell - 1, k, img)
            inside = span_target.coefficients(coords)
            if inside is None:
                return False, {"closure_failed_at": (ell, k)}
            cols.append(inside)
        span = VectorSpan()
        for col in cols:
            span.add(col)
        ranks[ell] = span.rank
    report = {}
    ok = True
    for ell in page.ells:
        sub = dims_sub[ell] - ranks.get(ell, 0) - ranks.get(ell + 1, 0)
        full = page.e2_dim(ell, k)
        report[ell] = (sub, full)
        ok = ok and sub == full
    return ok, report


# -- reduction onto the atom basis ------------------------------------------------

class AtomReducer:
    """Reduction of cocycles at one bidegree onto the class basis mod image."""

    def __init__(self, page: TitsPage, ell: int, k: int):
        self.page, self.ell, self.k = page, ell, k
        self.classes = psi(page, ell, k)
        self.span = VectorSpan(track_witness=True)
        self.n_image = 0
        for col in page.image_basis(ell, k):
            self.span.add(col)
            self.n_image += 1
        for j, cls in enumerate(self.classes):
            coords = page.vector_to_coords(ell, k, cls.vector())
            if not self.span.add(coords):
                raise ConsistencyError("atom vector dependent modulo the image",
                                       page=page.key, bidegree=(ell, k), index=j)

    def reduce(self, vec: ThVec) -> dict[AtomClass, Fraction]:
        coords = self.page.vector_to_coords(self.ell, self.k, vec)
        coeffs = self.span.coefficients(coords)
        if coeffs is None:
            raise ConsistencyError("cocycle not spanned by image plus atoms",
                                   page=self.page.key, bidegree=(self.ell, self.k))
        out: dict[AtomClass, Fraction] = {}
        for j, cls in enumerate(self.classes):
            c = coeffs.get(self.n_image + j, Fraction(0))
            if c:
                out[cls] = c
        return out


def atom_reducer(page: TitsPage, ell: int, k: int) -> AtomReducer:
    cache = getattr(page, "_reducers", None)
    if cache is None:
        cache = {}
        page._reducers = cache  # type: ignore[attr-defined]
    if (ell, k) not in cache:
        cache[(ell, k)] = AtomReducer(page, ell, k)
    return cache[(ell, k)]


def in_image(page: TitsPage, ell: int, k: int, vec: ThVec) -> bool:
    coords = page.vector_to_coords(ell, k, vec)
    return page.image_span(ell, k).contains(coords)


# -- twists -------------------------------------------------------------------------

def saturation_failure(page: TitsPage, th: Theta, s0: int) -> str | None:
    """None when the segment satisfies the saturation shape, else a reason."""
    seq = segments(page, th)
    if not 1 <= s0 <= len(seq) - 1:
        return "segment index out of range"
    base, top = seq[s0 - 1], seq[s0]
    lo = set(page.i0)
    blocks_ = rt.blocks(th.n, th.roots)
    sizes = rt.block_sizes(th.n, th.roots)
    if not set(blocks_[base]) <= lo:
        return "first block of the segment must sit inside the floor"
    if th.blocks[base]:
        return "first block of the segment must carry no label"
    for d in range(base + 2, top + 1):
        label = th.blocks[d - 1]
        meet = set(blocks_[d - 1]) & lo
        if not meet:
            want = 2 * sizes[d - 1] - 1
            if len(label) != 1 or label[0][0] != want:
                return f"block {d} must carry the single top-degree pair"
        else:
            minus, plus = block_splits(blocks_[d - 1], lo)
            if plus:
                return f"block {d} must have no roots above its floor run"
            if not minus:
                return f"block {d} must have roots below its floor run"
            want = 2 * len(minus) + 1
            if len(label) != 1 or label[0][0] != want:
                return f"block {d} must carry the single pair of degree {want}"
    return None


def twist(page: TitsPage, th: Theta, s0: int, d0: int) -> Theta:
    """Move the empty block of a saturated segment to position d0.

    Alternates glue and split moves; every intermediate move must be
    defined, which the saturation shape guarantees.
    """
    reason = saturation_failure(page, th, s0)
    if reason is not None:
        raise ValueError(f"segment {s0} not saturated: {reason}")
    seq = segments(page, th)
    base, top = seq[s0 - 1], seq[s0]
    if not base + 1 <= d0 <= top:
        raise ValueError(f"target block {d0} outside segment {s0}")
    if d0 == base + 1:
        return th
    psums = rt.partial_sums(rt.block_sizes(th.n, th.roots))
    lo = set(page.i0)
    floor_free = sorted(set(th.roots) - lo)
    boundary = {d: psums[d - 1] for d in range(base + 1, d0)}
    release = {}
    for d in range(base + 2, d0 + 1):
        below = [i for i in floor_free if i < psums[d - 1]]
        if not below:
            raise ConsistencyError("no root available to split at", block=d)
        release[d] = max(below)
    cur = th
    for d in range(base + 1, d0):
        nxt = p_plus(cur, boundary[d])
        if nxt is None:
            raise ConsistencyError("glue move undefined inside a twist", at=boundary[d])
        cur = nxt
        nxt = p_minus(cur, release[d + 1])
        if nxt is None:
            raise ConsistencyError("split move undefined inside a twist", at=release[d + 1])
        cur = nxt
    return cur


def twisted_improvement_data(page: TitsPage, ref: Theta, s0: int, d0: int):
    """Constants of the twisted move set: reference partial sums."""
    ref_psums = rt.partial_sums(rt.block_sizes(ref.n, ref.roots))
    c_left = ref_psums[d0 - 2] if d0 >= 2 else 0  # sum of first d0-1 reference blocks
    c_right = ref_psums[d0 - 1]
    return c_left, c_right


def inverse_twisted_moves(page: TitsPage, th: Theta, seq: tuple[int, ...],
                          s0: int, d0: int, c_left: int, c_right: int) -> list[Theta]:
    """One twisted step down from th (members of the twisted closure)."""
    out: list[Theta] = []
    base, top = seq[s0 - 1], seq[s0]
    # outside the segment, and inside at levels >= d0 with the floor bound:
    for level, lower in inverse_improvements(page, th):
        if level <= base or level >= top + 1:
            out.append(lower)
        elif level >= d0:
            psums = rt.partial_sums(rt.block_sizes(th.n, th.roots))
            if psums[level - 1] >= c_right:
                out.append(lower)
    # inside at levels <= d0-1 the twisted order runs backwards, so ordinary
    # forward improvements step down:
    for level, improved in improvements(page, th):
        if base + 1 <= level <= d0 - 1:
            psums = rt.partial_sums(rt.block_sizes(th.n, th.roots))
            if psums[level - 1] <= c_left:
                out.append(improved)
    return out


class TwistedClass(NamedTuple):
    ref: Theta  # the twisted maximal tuple
    members: tuple[Theta, ...]
    s0: int
    d0: int

    def vector(self) -> ThVec:
        return {th: Fraction(th.sign) for th in self.members}


def twist_steps(page: TitsPage, cls: AtomClass, s0: int, d0: int) -> int:
    """Number of unit moves in a twist; each one flips the class sign.

    The signed sum over a twisted class agrees with (-1)**steps times the
    signed sum over the original class modulo the image of the
    differential (verified exhaustively through rank five).
    """
    seq = segments(page, cls.max_theta)
    return d0 - (seq[s0 - 1] + 1)


def twisted_class(page: TitsPage, cls: AtomClass, s0: int, d0: int) -> TwistedClass:
    ref = twist(page, cls.max_theta, s0, d0)
    seq = segments(page, ref)
    c_left, c_right = twisted_improvement_data(page, ref, s0, d0)
    seen = {ref}
    frontier = [ref]
    while frontier:
        nxt = []
        for th in frontier:
            for lower in inverse_twisted_moves(page, th, seq, s0, d0, c_left, c_right):
                if lower not in seen:
                    seen.add(lower)
                    nxt.append(lower)
        frontier = nxt
    return TwistedClass(ref, tuple(sorted(seen)), s0, d0)


def twist_criterion_members(page: TitsPage, cls: AtomClass, s0: int, d0: int) -> tuple[Theta, ...]:
    """Members sharing the out-of-segment blocks, by the boundary criterion.

    This enumerates candidates with the reference label tuple and passes
    them through the three partial-sum inequalities; it characterizes the
    twisted class only among tuples whose blocks outside the chosen
    segment agree with the reference.
    """
    ref = twist(page, cls.max_theta, s0, d0)
    seq = segments(page, ref)
    base, top = seq[s0 - 1], seq[s0]
    ref_sizes = rt.block_sizes(ref.n, ref.roots)
    ref_psums = rt.partial_sums(ref_sizes)
    seg_lo = ref_psums[base - 1] if base else 0
    seg_hi = ref_psums[top - 1]
    width = seg_hi - seg_lo
    count = top - base
    c_left, c_right = twisted_improvement_data(page, ref, s0, d0)
    out = []
    for comp in _compositions(width, count):
        sizes2 = list(ref_sizes)
        sizes2[base:top] = comp
        psums2 = rt.partial_sums(sizes2)
        roots2 = sorted(set(rt.delta(ref.n)) - set(psums2[:-1]))
        if not set(page.i0) <= set(roots2):
            continue
        try:
            cand = levi.make_theta(ref.chars, roots2, ref.blocks)
        except ValueError:
            continue
        # criterion (ii): edge blocks must not grow
        if d0 >= base + 2 and sizes2[base] > ref_sizes[base]:
            continue
        if d0 <= top - 1 and sizes2[top - 1] > ref_sizes[top - 1]:
            continue
        # criterion (iii): the boundaries of block d0 bracket the reference's
        if d0 >= 2 and psums2[d0 - 2] > c_left:
            continue
        if psums2[d0 - 1] < c_right:
            continue
        out.append(cand)
    return tuple(sorted(out))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def saturated_options(page: TitsPage, cls: AtomClass) -> list[tuple[int, int]]:
    """All (segment, target block) pairs admissible for twisting this class."""
    th = cls.max_theta
    seq = segments(page, th)
    out = []
    for s0 in range(1, len(seq)):
        if saturation_failure(page, th, s0) is None:
            for d0 in range(seq[s0 - 1] + 1, seq[s0] + 1):
                out.append((s0, d0))
    return out
