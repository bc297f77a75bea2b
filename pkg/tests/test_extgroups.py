import itertools
import random

import pytest

from steinberg_ext import extgroups as xg
from steinberg_ext import levi
from steinberg_ext import roots as rt
from steinberg_ext.engine import Engine


def subsets(n):
    base = list(range(1, n))
    for r in range(len(base) + 1):
        yield from (frozenset(c) for c in itertools.combinations(base, r))


@pytest.fixture(scope="module")
def eng3():
    return Engine(3, 1)


def test_ps_ext_dim():
    assert xg.ps_ext_dim(3, 1,(1,), (2,), 2) == 0
    assert xg.ps_ext_dim(2, 1, (1,), (1,), 3) == 1
    assert xg.ps_ext_dim(3, 1, (1,), (1,), 0) == 1


def test_steinberg_profiles(eng3):
    p = xg.steinberg_profile(eng3, (1, 2), ())
    assert p.h_min == 2 and p.dim(2) == 5
    assert p.graded[2] == [4, 1, 0]
    eng2 = Engine(2, 1)
    p2 = xg.steinberg_profile(eng2, (1,), ())
    assert p2.h_min == 1 and p2.dim(1) == 2
    p3 = xg.steinberg_profile(eng3, (1,), (1,))
    assert p3.h_min == 0 and p3.dim(0) == 1


def test_vanishing_below_h_min(eng3):
    for i0 in subsets(3):
        for i2 in subsets(3):
            p = xg.steinberg_profile(eng3, i0, i2)
            assert p.h_min == rt.sym_diff_size(i0, i2)
            assert all(h >= p.h_min for h in p.dims)


def test_special_cases(eng3):
    # nested all the way: every degree is a Levi cohomology
    prof = xg.ext_profile(eng3, (1,), (1, 2), (1,), (1, 2))
    want = levi.levi_dims(3, 1, (1, 2))
    assert [prof.dim(k) for k in range(len(want))] == want
    # incompatible pair is identically zero
    assert xg.ext_profile(eng3, (1,), (1,), (2,), (2,)).dims == {}


def test_graded_sums_match_totals(eng3):
    for i0 in subsets(3):
        for i2 in subsets(3):
            prof = xg.steinberg_profile(eng3, i0, i2)
            for h in (prof.h_min, prof.h_min + 1):
                if h in prof.graded:
                    assert sum(prof.graded[h]) == prof.dim(h)


def test_reindexing_identity():
    for n in (2, 3, 4):
        for i1 in subsets(n):
            for i0 in subsets(n):
                if not i0 <= i1:
                    continue
                for i3 in subsets(n):
                    for i2 in subsets(n):
                        if not i2 <= i3:
                            continue
                        assert xg.reindex_sets_match(n, i0, i1, i2, i3)


def test_dim_multiplicativity_and_excision(eng3):
    eng4 = Engine(4, 1)
    for eng in (eng3, eng4):
        n = eng.n
        for i0 in subsets(n):
            for i2 in subsets(n):
                if not i2 <= i0:
                    continue
                p = xg.steinberg_profile(eng, i0, i2)
                total = 1
                from steinberg_ext import linv
                for run in rt.maximal_intervals(i0 - i2):
                    d, _ = linv.universal_dim(len(run) + 1, eng.d_k)
                    total *= d
                assert p.dim(p.h_min) == total
                # dimension depends only on the difference set
                q = xg.steinberg_profile(eng, i0 - i2, ())
                assert p.dim(p.h_min) == q.dim(q.h_min)


def shape_cases(n, rng, trials):
    for _ in range(trials):
        delta = sorted(rt.delta(n))
        rng.shuffle(delta)
        cuts = sorted(rng.sample(range(len(delta) + 1), rng.randint(0, len(delta))))
        parts, prev = [], 0
        for c in cuts + [len(delta)]:
            parts.append(tuple(sorted(delta[prev:c])))
            prev = c
        lo, hi = [], []
        for part in parts:
            a = rng.randint(0, len(part))
            lo.append(a)
            hi.append(rng.randint(a, len(part)))
        yield xg.ComplexShape(tuple(parts), tuple(lo), tuple(hi))


def test_shape_closed_form_matches_assembly():
    rng = random.Random(21)
    for n in (2, 3, 4):
        eng = Engine(n, 1)
        for shape in shape_cases(n, rng, 25):
            for i in subsets(n):
                assert xg.shape_e2_dims(eng, shape, i) == \
                    xg.shape_direct_dims(eng, shape, i)


def test_shape_recovers_staircase_vanishing():
    for n in (2, 3):
        eng = Engine(n, 1)
        for i1 in subsets(n):
            for i0 in subsets(n):
                if not i0 <= i1:
                    continue
                shape = xg.shape_for_pair(n, i0, i1)
                for i in subsets(n):
                    nonzero = bool(xg.shape_e2_dims(eng, shape, i))
                    assert nonzero == (i0 | i == i1)


def test_degenerate_window_single_column():
    eng = Engine(3, 1)
    shape = xg.ComplexShape(((1, 2),), (1,), (1,))
    dims = xg.shape_e2_dims(eng, shape, frozenset({1}))
    assert set(ell for ell, _ in dims) == {1}
