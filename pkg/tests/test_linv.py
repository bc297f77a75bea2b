import random
from fractions import Fraction

import pytest

from steinberg_ext import cup, linv
from steinberg_ext import roots as rt
from steinberg_ext.engine import Engine
from steinberg_ext.linalg import vec_dot


@pytest.fixture(scope="module")
def eng2():
    return Engine(2, 1)


@pytest.fixture(scope="module")
def eng3():
    return Engine(3, 1)


def test_galois_ext_dims():
    assert linv.galois_ext_dim(5, 5, 0, 1) == 1
    assert linv.galois_ext_dim(4, 5, 0, 1) == 0
    assert linv.galois_ext_dim(0, 1, 2, 1) == 1
    assert linv.galois_ext_dim(0, 2, 2, 1) == 0
    assert linv.galois_ext_dim(0, 5, 1, 2) == 2
    assert linv.galois_ext_dim(1, 1, 1, 2) == 3
    with pytest.raises(ValueError):
        linv.galois_ext_dim(0, 0, 3, 1)


def test_universal_dim_small():
    assert linv.universal_dim(2, 1)[0] == 2
    assert linv.universal_dim(3, 1)[0] == 5
    assert linv.universal_dim(4, 1)[0] == 13
    _, trace = linv.universal_dim(4, 1)
    assert trace == [(1, 1), (2, 2), (3, 5), (4, 13)]


def test_universal_dim_matches_partition_count():
    for n in range(1, 9):
        for d_k in (1, 2, 3):
            assert linv.universal_dim(n, d_k)[0] == \
                linv.interval_partition_count(n, d_k)


def test_rank_two_explicit(eng2):
    # the hyperplane of one parameter is the line through log - c val
    params = {((1, 2), 0): Fraction(3, 2)}
    phi = linv.params_to_hyperplane(eng2, params)
    top = cup.ehat_space(eng2)
    run = frozenset({1})
    val = top.coords(linv.aligned_embed(eng2, run,
                                        {cup.char_atom(eng2, 1, 0): Fraction(1)}))
    logv = top.coords(linv.aligned_embed(eng2, run,
                                         {cup.char_atom(eng2, 1, 1): Fraction(1)}))
    member = {i: logv.get(i, Fraction(0)) - Fraction(3, 2) * val.get(i, Fraction(0))
              for i in range(top.dim)}
    member = {i: c for i, c in member.items() if c}
    assert vec_dot(phi, member) == 0
    assert vec_dot(phi, val) != 0
    assert linv.hyperplane_to_params(eng2, phi) == params


def test_zero_parameters_select_the_log_span(eng3):
    # with every parameter zero the hyperplane is spanned by exactly the
    # cup basis vectors carrying at least one logarithmic factor
    from steinberg_ext.linalg import VectorSpan
    params0 = {k: Fraction(0) for k in linv.param_keys(3, 1)}
    phi0 = linv.params_to_hyperplane(eng3, params0)
    top = cup.ehat_space(eng3)
    span = VectorSpan()
    for _, choice, vec in cup.basis_x(eng3, (1, 2), ()):
        value = vec_dot(phi0, top.coords(vec))
        if all(c == "inf" for c in choice):
            assert value != 0
        else:
            assert value == 0
            span.add(top.coords(vec))
    assert span.rank == top.dim - 1
    assert linv.hyperplane_to_params(eng3, phi0) == params0


def test_roundtrip_seeded(eng3):
    rng = random.Random(5)
    for _ in range(10):
        params = linv.random_params(3, 1, rng)
        phi = linv.params_to_hyperplane(eng3, params)
        assert linv.hyperplane_to_params(eng3, phi) == params
        assert linv.is_bs_invariant(eng3, phi).ok


def test_sum_formula(eng3):
    rng = random.Random(6)
    params = linv.random_params(3, 1, rng)
    phi = linv.params_to_hyperplane(eng3, params)
    assert linv.sum_formula_check(eng3, phi, (1, 3))
    with pytest.raises(ValueError):
        linv.sum_formula_check(eng3, phi, (1, 2))


def test_smooth_containing_hyperplane_rejected(eng3):
    top = cup.ehat_space(eng3)
    smooth = top.coords(cup.smooth_vec(eng3, (1, 2)))
    phi = {i: Fraction(1) for i in range(top.dim)}
    pairing = vec_dot(phi, smooth)
    if pairing:
        idx = next(iter(smooth))
        phi[idx] -= pairing / smooth[idx]
    diag = linv.is_bs_invariant(eng3, phi)
    assert not diag.ok and diag.failures[0]["condition"] == "i"


def test_perturbation_rejected_with_named_condition(eng3):
    rng = random.Random(7)
    params = linv.random_params(3, 1, rng)
    phi = dict(linv.params_to_hyperplane(eng3, params))
    phi[1] = phi.get(1, Fraction(0)) + Fraction(1, 3)
    diag = linv.is_bs_invariant(eng3, phi)
    assert not diag.ok
    assert diag.failures[0]["condition"] in ("i", "ii")


def test_simple_condition_shortcut(eng3):
    # hyperplanes built from parameters satisfy the interval conditions,
    # and those suffice for the full predicate
    rng = random.Random(8)
    for _ in range(5):
        params = linv.random_params(3, 1, rng)
        phi = linv.params_to_hyperplane(eng3, params)
        lat = linv.lattice(eng3)
        for i0 in (frozenset({1}), frozenset({2}), frozenset({1, 2})):
            values = lat.functional(phi, i0, frozenset())
            assert any(v for _, v in values)
        assert linv.is_bs_invariant(eng3, phi).ok


def test_quotient_line_composition(eng3):
    # for a verified hyperplane the quotient pairing is a nonzero multiple
    # of the product of the two functionals on every triple
    rng = random.Random(9)
    params = linv.random_params(3, 1, rng)
    phi = linv.params_to_hyperplane(eng3, params)
    lat = linv.lattice(eng3)
    for i0, i2, i4 in lat.triples():
        table = lat.cup_table(i0, i2, i4)
        vals_a = dict(lat.functional(phi, i0, i2))
        vals_b = dict(lat.functional(phi, i2, i4))
        vals_c = dict(lat.functional(phi, i0, i4))
        a0 = next(cls for cls, v in vals_a.items() if v)
        b0 = next(cls for cls, v in vals_b.items() if v)
        base = sum((c * vals_c[cls] for cls, c in table[(a0, b0)].items()),
                   Fraction(0))
        assert base != 0
