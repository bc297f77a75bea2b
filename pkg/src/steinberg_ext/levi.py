"""Combinatorial model of the cohomology of quotient Levi subgroups.

The cohomology ring of a Levi block quotient is an exterior algebra on two
kinds of odd generators: rank-one center characters (the valuation and one
logarithm per field embedding, at each position outside the root subset)
and primitive classes of odd degree 2m-1 per matrix block and embedding.
A basis element is a tuple Theta = (chars, roots, blocks); since every
generator has odd degree, all reordering signs are plain permutation
parities of generator words.

The fixed orders (characters by position, valuation before logarithms,
logarithms by embedding; block labels by embedding ascending then degree
descending) pin all signs once and for all.  Restriction to a maximal
sub-Levi splits one block label over admissible two-colorings with the
resulting shuffle parity as coefficient.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Iterator, NamedTuple

from fractions import Fraction

from . import roots as rt

# -- center characters -------------------------------------------------------

VAL = 0  # kind tag: valuation; logarithms use kind 1 + iota

CChar = tuple[int, int]  # (position, kind); tuple order is the fixed order


def val(i: int) -> CChar:
    return (i, VAL)


def logc(i: int, iota: int) -> CChar:
    return (i, 1 + iota)


def char_positions(chars: Iterable[CChar]) -> frozenset[int]:
    return frozenset(i for i, _ in chars)


def char_basis(n: int, roots: Iterable[int], d_k: int) -> tuple[CChar, ...]:
    """The character basis at positions outside the root subset, fixed order."""
    free = sorted(rt.delta(n) - frozenset(roots))
    return tuple((i, kind) for i in free for kind in range(d_k + 1))


# -- block labels -------------------------------------------------------------

Pair = tuple[int, int]  # (m, iota), m odd >= 3
Label = tuple[Pair, ...]  # canonically ordered


def label_key(pair: Pair) -> tuple[int, int]:
    m, iota = pair
    return (iota, -m)


def make_label(pairs: Iterable[Pair]) -> Label:
    listed = list(pairs)
    out = tuple(sorted(set(listed), key=label_key))
    if len(out) != len(listed):
        raise ValueError("repeated pair in label")
    return out


def label_weight(label: Label) -> int:
    return sum(m for m, _ in label)


def label_max(label: Label) -> int:
    """Largest primitive degree in the label, 0 when empty."""
    return max((m for m, _ in label), default=0)


@functools.lru_cache(maxsize=None)
def sigma_labels(block_size: int, weight: int, d_k: int) -> tuple[Label, ...]:
    """All labels of a given total weight on a block of the given size.

    Pairs (m, iota) range over odd 3 <= m <= 2*block_size - 1 and the d_k
    embeddings; the empty label is the unique weight-0 label.
    """
    if block_size < 1 or weight < 0:
        return ()
    pairs = [(m, iota) for iota in range(d_k)
             for m in range(2 * block_size - 1, 1, -2)]
    out: list[Label] = []

    def rec(start: int, remaining: int, acc: list[Pair]) -> None:
        if remaining == 0:
            out.append(tuple(sorted(acc, key=label_key)))
            return
        for idx in range(start, len(pairs)):
            m = pairs[idx][0]
            if m <= remaining:
                acc.append(pairs[idx])
                rec(idx + 1, remaining - m, acc)
                acc.pop()

    rec(0, weight, [])
    return tuple(sorted(out))


# -- basis tuples -------------------------------------------------------------

class Theta(NamedTuple):
    """One exterior-algebra basis element of a Levi cohomology."""

    chars: tuple[CChar, ...]
    roots: tuple[int, ...]
    blocks: tuple[Label, ...]

    @property
    def n(self) -> int:
        return len(self.roots) + len(self.blocks)

    @property
    def degree(self) -> int:
        return len(self.chars) + sum(label_weight(b) for b in self.blocks)

    @property
    def k0(self) -> int:
        return len(self.chars)

    def degree_vector(self) -> tuple[int, ...]:
        return (self.k0, *(label_weight(b) for b in self.blocks))

    @property
    def sign(self) -> int:
        """Class-sum sign (-1)^(sum of the root subset)."""
        return -1 if sum(self.roots) % 2 else 1


def make_theta(chars: Iterable[CChar], roots_: Iterable[int],
               blocks_: Iterable[Iterable[Pair]]) -> Theta:
    chars_t = tuple(sorted(set(chars)))
    roots_t = tuple(sorted(set(roots_)))
    blocks_t = tuple(make_label(b) for b in blocks_)
    th = Theta(chars_t, roots_t, blocks_t)
    if char_positions(chars_t) & set(roots_t):
        raise ValueError("character position inside the root subset")
    sizes = rt.block_sizes(th.n, roots_t)
    if len(sizes) != len(blocks_t):
        raise ValueError("block count does not match the root subset")
    for size, label in zip(sizes, blocks_t):
        if label_max(label) > 2 * size - 1:
            raise ValueError("label degree exceeds block capacity")
    return th


def theta_is_valid(th: Theta) -> bool:
    try:
        make_theta(th.chars, th.roots, th.blocks)
        return True
    except ValueError:
        return False


@functools.lru_cache(maxsize=None)
def levi_basis_by_degree(n: int, d_k: int, roots_: tuple[int, ...]) -> dict[int, tuple[Theta, ...]]:
    """Full graded basis of the Levi cohomology for one root subset."""
    roots_ = tuple(sorted(roots_))
    sizes = rt.block_sizes(n, roots_)
    cbasis = char_basis(n, roots_, d_k)
    per_block: list[list[Label]] = []
    for size in sizes:
        labels: list[Label] = []
        for w in range(0, d_k * (size * size - 1) + 1):
            labels.extend(sigma_labels(size, w, d_k))
        per_block.append(labels)
    out: dict[int, list[Theta]] = {}
    for r in range(len(cbasis) + 1):
        for chars in itertools.combinations(cbasis, r):
            for combo in itertools.product(*per_block):
                th = Theta(tuple(chars), roots_, tuple(combo))
                out.setdefault(th.degree, []).append(th)
    return {k: tuple(sorted(v)) for k, v in sorted(out.items())}


def levi_basis(n: int, d_k: int, roots_: Iterable[int], k: int) -> tuple[Theta, ...]:
    """Basis of the degree-k cohomology of the Levi attached to a root subset."""
    table = levi_basis_by_degree(n, d_k, tuple(sorted(rt.check_subset(n, roots_))))
    return table.get(k, ())


def levi_dims(n: int, d_k: int, roots_: Iterable[int]) -> list[int]:
    table = levi_basis_by_degree(n, d_k, tuple(sorted(rt.check_subset(n, roots_))))
    top = max(table) if table else 0
    return [len(table.get(k, ())) for k in range(top + 1)]


# -- generator words and parities ---------------------------------------------

# Generator ids sort exactly in the canonical word order: characters first
# (by the fixed character order), then blocks left to right, labels inside a
# block by (iota asc, m desc).
Gen = tuple  # ("c", pos, kind) | ("p", block_index, iota, -m)


def word(th: Theta) -> tuple[Gen, ...]:
    gens: list[Gen] = [("c", i, kind) for (i, kind) in th.chars]
    for d, label in enumerate(th.blocks):
        gens.extend(("p", d, iota, -m) for (m, iota) in label)
    return tuple(gens)


def sort_parity(seq: Iterable) -> int:
    """Parity (+1/-1) of the permutation sorting a duplicate-free sequence."""
    items = list(seq)
    inv = 0
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[j] < items[i]:
                inv += 1
    return -1 if inv % 2 else 1


def shuffle_sign(label: Label, sub: Iterable[Pair]) -> int:
    """Parity of reordering a label word into (chosen part, complement).

    All primitive generators have odd degree, so the reordering sign is the
    parity of the unshuffle permutation.
    """
    sub_set = frozenset(sub)
    if not sub_set <= set(label):
        raise ValueError("not a subset of the label")
    # positions of sub inside the canonical word, then complement positions
    src = list(range(len(label)))
    picked = [i for i, p in enumerate(label) if p in sub_set]
    rest = [i for i in src if i not in picked]
    return sort_parity([ (picked + rest).index(i) for i in src ])


# -- restriction ---------------------------------------------------------------

def admissible_splits(label: Label, left_size: int, right_size: int) -> Iterator[tuple[frozenset[Pair], int]]:
    """Two-colorings of a label onto adjacent blocks of the given sizes.

    Yields (left part, shuffle parity); a coloring is admissible when each
    side's largest degree fits its block.
    """
    left_cap = 2 * left_size - 1
    right_cap = 2 * right_size - 1
    members = list(label)
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            left = frozenset(combo)
            right = [p for p in members if p not in left]
            if combo and max(m for m, _ in combo) > left_cap:
                continue
            if right and max(m for m, _ in right) > right_cap:
                continue
            yield left, shuffle_sign(label, left)


def restriction_terms(th: Theta, i: int) -> dict[Theta, int]:
    """Restriction of a basis element along the removal of one root.

    Splits the block containing i at that position; characters and all other
    blocks are untouched.  The result can be empty (the map is zero exactly
    when no admissible two-coloring exists).
    """
    if i not in th.roots:
        raise ValueError(f"{i} not in root subset {th.roots}")
    n = th.n
    sizes = rt.block_sizes(n, th.roots)
    psums = rt.partial_sums(sizes)
    d = next(d for d, b in enumerate(rt.blocks(n, th.roots)) if i in b)
    base = psums[d - 1] if d else 0
    ibar = i - base
    label = th.blocks[d]
    new_roots = tuple(sorted(set(th.roots) - {i}))
    out: dict[Theta, int] = {}
    for left, parity in admissible_splits(label, ibar, sizes[d] - ibar):
        right = make_label(p for p in label if p not in left)
        new_blocks = th.blocks[:d] + (make_label(left), right) + th.blocks[d + 1:]
        out[Theta(th.chars, new_roots, new_blocks)] = parity
    return out


def res_vector(x: dict[Theta, Fraction], i: int) -> dict[Theta, Fraction]:
    out: dict[Theta, Fraction] = {}
    for th, coeff in x.items():
        for th2, sign in restriction_terms(th, i).items():
            new = out.get(th2, Fraction(0)) + coeff * sign
            if new:
                out[th2] = new
            else:
                out.pop(th2, None)
    return out


def res_to(x: dict[Theta, Fraction], target: Iterable[int]) -> dict[Theta, Fraction]:
    """Iterated restriction onto a smaller root subset (descending removal order).

    Composites of single-step restrictions are path independent, so the
    fixed order is a convention, not a choice that affects the value.
    """
    tset = frozenset(target)
    cur = dict(x)
    support = {th.roots for th in x}
    if not support:
        return {}
    if len(support) > 1:
        raise ValueError("iterated restriction needs a single root subset")
    src = set(next(iter(support)))
    if not tset <= src:
        raise ValueError("target must be contained in the root subset")
    removals = sorted(src - tset, reverse=True)
    for i in removals:
        cur = res_vector(cur, i)
        if not cur:
            return {}
    return cur


# -- products ------------------------------------------------------------------

def wedge_theta(a: Theta, b: Theta) -> tuple[int, Theta] | None:
    """Product of two basis elements over the same root subset.

    None encodes zero: a repeated character or a repeated pair inside some
    block kills the product.  Otherwise the result is the merged tuple with
    the parity of sorting the concatenated generator word.
    """
    if a.roots != b.roots:
        raise ValueError("wedge requires the same root subset")
    if set(a.chars) & set(b.chars):
        return None
    merged_blocks = []
    for la, lb in zip(a.blocks, b.blocks):
        if set(la) & set(lb):
            return None
        merged_blocks.append(make_label(la + lb))
    merged = Theta(tuple(sorted(a.chars + b.chars)), a.roots, tuple(merged_blocks))
    parity = sort_parity(word(a) + word(b))
    return parity, merged


def wedge(x: dict[Theta, Fraction], y: dict[Theta, Fraction]) -> dict[Theta, Fraction]:
    out: dict[Theta, Fraction] = {}
    for ta, ca in x.items():
        for tb, cb in y.items():
            res = wedge_theta(ta, tb)
            if res is None:
                continue
            parity, tc = res
            new = out.get(tc, Fraction(0)) + ca * cb * parity
            if new:
                out[tc] = new
            else:
                out.pop(tc, None)
    return out


def unit_theta(n: int, roots_: Iterable[int]) -> Theta:
    rset = tuple(sorted(rt.check_subset(n, roots_)))
    return Theta((), rset, tuple(() for _ in range(n - len(rset))))


# -- wire encoding -------------------------------------------------------------

def theta_to_wire(th: Theta) -> dict:
    chars = []
    for (i, kind) in th.chars:
        chars.append([i, "val"] if kind == VAL else [i, "log", kind - 1])
    return {
        "v": chars,
        "I": list(th.roots),
        "blocks": [[[m, iota] for (m, iota) in label] for label in th.blocks],
    }


def theta_from_wire(data: dict) -> Theta:
    chars = []
    for entry in data["v"]:
        if entry[1] == "val":
            chars.append(val(entry[0]))
        else:
            chars.append(logc(entry[0], entry[2]))
    blocks_ = [[(m, iota) for (m, iota) in label] for label in data["blocks"]]
    return make_theta(chars, data["I"], blocks_)
