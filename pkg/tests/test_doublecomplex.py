import itertools

import pytest

from steinberg_ext import doublecomplex as dcx
from steinberg_ext import roots as rt
from steinberg_ext.pages import TitsPage


def subsets(n):
    base = list(range(1, n))
    for r in range(len(base) + 1):
        yield from (tuple(c) for c in itertools.combinations(base, r))


def test_column_differential_squares_to_zero():
    page = TitsPage(2, 1, (), (1,))
    dc = dcx.DoubleComplex(page, ())
    for roots in dc.columns:
        for k in range(len(dc.gens[roots]) + 1):
            for mono in dc.monomials(roots, k):
                image = dc.ce_differential(roots, mono)
                acc = {}
                for pos, c in image.items():
                    target = dc.monomials(roots, k + 1)[pos]
                    for pos2, c2 in dc.ce_differential(roots, target).items():
                        acc[pos2] = acc.get(pos2, 0) + c * c2
                assert not any(acc.values())


def test_rank_two_collapse_report():
    page = TitsPage(2, 1, (), (1,))
    ok, report = dcx.degeneration_check(page)
    assert ok
    assert report[()]["total"] == {1: 1, 2: 1}
    assert report[(1,)]["total"] == {0: 1, 1: 1}


def test_single_column_is_trivially_collapsed():
    page = TitsPage(3, 1, (1,), (1,))
    ok, _ = dcx.degeneration_check(page)
    assert ok


@pytest.mark.parametrize("d_k", [1, 2])
def test_rank_three_collapse(d_k):
    for i1 in subsets(3):
        for i0 in subsets(3):
            if not set(i0) <= set(i1):
                continue
            page = TitsPage(3, d_k, i0, i1)
            ok, _ = dcx.degeneration_check(page)
            assert ok, (d_k, i0, i1)


def test_size_cap_refusal():
    page = TitsPage(4, 2, (), (1, 2, 3))
    with pytest.raises(ValueError):
        dcx.degeneration_check(page)
    page41 = TitsPage(4, 1, (), (1, 2, 3))
    with pytest.raises(ValueError):
        dcx.degeneration_check(page41, extended=False)


def test_extended_rank_four_small_blocks():
    page = TitsPage(4, 1, (1,), (1, 3))
    ok, _ = dcx.degeneration_check(page, extended=True)
    assert ok
