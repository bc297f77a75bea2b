import pytest
from hypothesis import given, strategies as st

from steinberg_ext import roots as rt


def test_block_decomposition_examples():
    assert rt.blocks(6, {1, 2, 4}) == ((1, 2), (4,), ())
    assert rt.block_sizes(6, {1, 2, 4}) == (3, 2, 1)
    assert rt.blocks(4, set()) == ((), (), (), ())
    assert rt.block_sizes(4, set()) == (1, 1, 1, 1)
    assert rt.blocks(4, {1, 2, 3}) == ((1, 2, 3),)
    assert rt.block_sizes(4, {1, 2, 3}) == (4,)


@given(n=st.integers(2, 8), bits=st.integers(0, 2 ** 7 - 1))
def test_block_sizes_sum(n, bits):
    subset = {i for i in range(1, n) if bits >> (i - 1) & 1}
    sizes = rt.block_sizes(n, subset)
    assert sum(sizes) == n
    assert len(sizes) == n - len(subset)
    assert all(len(b) + 1 == s for b, s in zip(rt.blocks(n, subset), sizes))


def test_interval_partitions_examples():
    assert set(rt.interval_partitions({1, 2})) == {((1, 2),), ((1,), (2,))}
    assert len(rt.interval_partitions({1, 2, 3})) == 4
    assert rt.interval_partitions({1, 3}) == (((1,), (3,)),)


def brute_interval_partitions(subset):
    """Independent oracle: filter all set partitions down to interval parts."""
    items = sorted(subset)
    if not items:
        return {()}

    def parts_of(seq):
        if not seq:
            yield []
            return
        first, rest = seq[0], seq[1:]
        for sub in parts_of(rest):
            yield [[first]] + sub
            for i in range(len(sub)):
                yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]

    out = set()
    for candidate in parts_of(items):
        good = all(sorted(p) == list(range(min(p), max(p) + 1)) for p in candidate)
        if good:
            out.add(tuple(sorted(tuple(sorted(p)) for p in candidate)))
    return out


@given(n=st.integers(1, 8), bits=st.integers(0, 2 ** 7 - 1))
def test_interval_partitions_against_bruteforce(n, bits):
    subset = {i for i in range(1, n) if bits >> (i - 1) & 1}
    got = {tuple(sorted(p)) for p in rt.interval_partitions(subset)}
    assert got == brute_interval_partitions(subset)
    expected = 1
    for run in rt.maximal_intervals(subset):
        expected *= 2 ** (len(run) - 1)
    assert len(got) == expected


def test_count_below():
    assert rt.count_below({1, 3, 4}, 4) == 2
    assert rt.count_below({2}, 2) == 0
    assert rt.count_below({1, 2, 3}, 2) == 1
    with pytest.raises(ValueError):
        rt.count_below({1, 3}, 2)


def test_do_not_connect():
    assert rt.do_not_connect({1}, {3})
    assert not rt.do_not_connect({1}, {2})
    assert rt.do_not_connect(set(), {1, 2, 5})


def test_sym_diff_size():
    assert rt.sym_diff_size({1, 2}, set()) == 2
    assert rt.sym_diff_size({1, 3}, {1, 3}) == 0
    assert rt.sym_diff_size({1, 2}, {2, 3}) == 2


@given(n=st.integers(2, 7), a=st.integers(0, 63), b=st.integers(0, 63), c=st.integers(0, 63))
def test_sym_diff_triangle(n, a, b, c):
    s = [{i for i in range(1, n) if bits >> (i - 1) & 1} for bits in (a, b, c)]
    assert rt.sym_diff_size(s[0], s[2]) <= \
        rt.sym_diff_size(s[0], s[1]) + rt.sym_diff_size(s[1], s[2])


def test_segment_boundaries():
    assert rt.segment_boundaries(3, {2}, {1, 2}, set()) == (0, 2, 3)
    assert rt.segment_boundaries(4, set(), {1, 3}, set()) == (0, 2, 4)
    # single segment when everything is available
    assert rt.segment_boundaries(4, set(), {1, 2, 3}, {1, 3}) == (0, 2)
    with pytest.raises(ValueError):
        rt.segment_boundaries(3, {1}, {1, 2}, {1})


def test_roots_and_intervals():
    assert rt.root_interval((1, 3)) == (1, 2)
    assert rt.interval_root((2, 3, 4)) == (2, 5)
    assert len(rt.positive_roots(4)) == 6
    with pytest.raises(ValueError):
        rt.interval_root((1, 3))
