"""Subsets of the simple roots of GL_n and their interval combinatorics.

A subset of ``{1, ..., n-1}`` indexes a standard parabolic of GL_n.  Its
unique splitting into maximal intervals determines the Levi block sizes,
and almost every other module keys its bookkeeping off that splitting.
Subsets are plain frozensets; ordered data comes back as sorted tuples.
"""

from __future__ import annotations

import itertools
from typing import Iterable

Root = tuple[int, int]  # positive root (i, j) with 1 <= i < j <= n


def delta(n: int) -> frozenset[int]:
    """The full set of simple roots {1, ..., n-1}."""
    return frozenset(range(1, n))


def check_subset(n: int, roots: Iterable[int]) -> frozenset[int]:
    rset = frozenset(roots)
    if not all(isinstance(i, int) and 1 <= i <= n - 1 for i in rset):
        raise ValueError(f"not a subset of {{1,...,{n-1}}}: {sorted(rset)}")
    return rset


def blocks(n: int, roots: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """Per-Levi-block root tuples, empty blocks included.

    Block d spans the rows between two consecutive gaps; its entry here is
    the (possibly empty) run of roots it contains.  ``len(blocks()) ==
    n - len(roots)``.
    """
    rset = check_subset(n, roots)
    out = []
    current: list[int] = []
    for i in range(1, n):
        if i in rset:
            current.append(i)
        else:
            out.append(tuple(current))
            current = []
    out.append(tuple(current))
    return tuple(out)


def block_sizes(n: int, roots: Iterable[int]) -> tuple[int, ...]:
    return tuple(len(b) + 1 for b in blocks(n, roots))


def partial_sums(sizes: Iterable[int]) -> tuple[int, ...]:
    out, acc = [], 0
    for s in sizes:
        acc += s
        out.append(acc)
    return tuple(out)


def maximal_intervals(roots: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """The nonempty maximal runs of consecutive elements, left to right."""
    rset = sorted(set(roots))
    runs: list[list[int]] = []
    for i in rset:
        if runs and runs[-1][-1] == i - 1:
            runs[-1].append(i)
        else:
            runs.append([i])
    return tuple(tuple(r) for r in runs)


def interval_partitions(roots: Iterable[int]) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All partitions of a root subset into intervals.

    Parts may not merge across gaps, so the partitions are products of
    independent cut choices inside each maximal run (2^(len-1) per run).
    Parts come back sorted by left endpoint.
    """
    per_run = []
    for run in maximal_intervals(roots):
        choices = []
        inner = len(run) - 1
        for cuts in itertools.product((False, True), repeat=inner):
            parts, start = [], 0
            for pos, cut in enumerate(cuts, start=1):
                if cut:
                    parts.append(run[start:pos])
                    start = pos
            parts.append(run[start:])
            choices.append(tuple(parts))
        per_run.append(choices)
    out = []
    for combo in itertools.product(*per_run):
        out.append(tuple(part for group in combo for part in group))
    return tuple(out)


def count_below(roots: Iterable[int], i: int) -> int:
    """Number of elements of the subset strictly below i (i must belong)."""
    rset = frozenset(roots)
    if i not in rset:
        raise ValueError(f"{i} not in subset {sorted(rset)}")
    return sum(1 for j in rset if j < i)


def do_not_connect(a: Iterable[int], b: Iterable[int]) -> bool:
    """True iff no element of one set is adjacent or equal to one of the other."""
    aset, bset = frozenset(a), frozenset(b)
    return all(abs(i - j) >= 2 for i in aset for j in bset)


def sym_diff_size(a: Iterable[int], b: Iterable[int]) -> int:
    """Size of the symmetric difference; the bottom nonzero Ext degree."""
    return len(frozenset(a) ^ frozenset(b))


def segment_boundaries(
    n: int,
    char_positions: Iterable[int],
    i1: Iterable[int],
    roots: Iterable[int],
) -> tuple[int, ...]:
    """Strictly increasing block indices (0 = r^0 < ... = r) marking where the
    blocks of ``roots`` line up with the coarser blocks of ``avail``, where
    ``avail`` is i1 minus the positions carrying a center character.

    Requires ``roots`` to refine ``avail``; the entry r^s is the block index
    whose right edge is the s-th gap of ``avail``.
    """
    rset = check_subset(n, roots)
    avail = (delta(n) - frozenset(char_positions)) & check_subset(n, i1)
    if not rset <= avail:
        raise ValueError("root subset must refine the available positions")
    psums = partial_sums(block_sizes(n, rset))
    index_of = {p: d + 1 for d, p in enumerate(psums)}
    seq = [0]
    for gap in sorted(delta(n) - avail):
        # every gap of avail is a gap of roots, hence a partial sum
        seq.append(index_of[gap])
    seq.append(len(psums))
    return tuple(seq)


def root_interval(alpha: Root) -> tuple[int, ...]:
    """The run of simple roots attached to a positive root (i, j)."""
    i, j = alpha
    if not i < j:
        raise ValueError(f"not a positive root: {alpha}")
    return tuple(range(i, j))


def interval_root(part: Iterable[int]) -> Root:
    """The positive root attached to a nonempty interval of simple roots."""
    run = sorted(part)
    if not run or run != list(range(run[0], run[-1] + 1)):
        raise ValueError(f"not a nonempty interval: {part}")
    return (run[0], run[-1] + 1)


def positive_roots(n: int) -> tuple[Root, ...]:
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
