import itertools
import json

import pytest

from steinberg_ext.pages import PageStore, TitsPage, bidegree_document


def subsets(n):
    base = list(range(1, n))
    for r in range(len(base) + 1):
        yield from (tuple(c) for c in itertools.combinations(base, r))


def test_rank_two_first_page():
    p = TitsPage(2, 1, (), (1,))
    assert [p.dim(1, k) for k in range(4)] == [1, 0, 0, 1]
    assert [p.dim(0, k) for k in range(4)] == [1, 2, 1, 0]
    assert p.d1_rank(1, 0) == 1


def test_rank_two_second_page():
    p = TitsPage(2, 1, (), (1,))
    assert p.e2_dim(0, 1) == 2
    assert p.e2_dim(0, 0) == 0
    assert p.e2_dim(1, 3) == 1
    assert p.e2_dim(0, 2) == 1


def test_single_column_page():
    p = TitsPage(3, 1, (1,), (1,))
    assert all(p.e2_dim(1, k) == p.dim(1, k) for k in range(p.kmax + 1))


def test_empty_page_when_not_nested():
    p = TitsPage(3, 1, (1,), (2,))
    assert p.empty and list(p.ells) == []
    assert p.basis(1, 0) == ()


def test_rank_three_second_page():
    p = TitsPage(3, 1, (), (1, 2))
    assert p.e2_dim(0, 2) == 4
    assert p.e2_dim(1, 3) == 1
    assert p.e2_dim(2, 4) == 0


def test_constants_row_exact():
    for n in (2, 3, 4):
        p = TitsPage(n, 1, (), tuple(range(1, n)))
        assert all(p.e2_dim(ell, 0) == 0 for ell in p.ells)


@pytest.mark.parametrize("n,d_k", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_d1_squared_and_euler(n, d_k):
    for i1 in subsets(n):
        for i0 in subsets(n):
            if not set(i0) <= set(i1):
                continue
            p = TitsPage(n, d_k, i0, i1)
            assert p.d1_squared_is_zero()
            assert all(p.euler_check(k) for k in range(p.kmax + 1))


def test_char_component_split_covers_page():
    p = TitsPage(3, 1, (), (1, 2))
    for ell in p.ells:
        for k in range(p.kmax + 1):
            groups = p.char_components(ell, k)
            assert sum(len(v) for v in groups.values()) == p.dim(ell, k)
            total = sum(p.component_e2_dim(ell, k, lambda c, g=g: c == g)
                        for g in groups)
            assert total == p.e2_dim(ell, k)


def test_e2_representatives_are_cocycles_mod_image():
    p = TitsPage(3, 1, (), (1, 2))
    for ell in p.ells:
        for k in range(p.kmax + 1):
            reps = p.e2_reps(ell, k)
            assert len(reps) == p.e2_dim(ell, k)
            for rep in reps:
                vec = p.coords_to_vector(ell, k, rep)
                assert p.is_cocycle(vec)


def test_disk_cache_roundtrip(tmp_path):
    store = PageStore(str(tmp_path))
    cold = TitsPage(2, 1, (), (1,), store=store)
    cold.d1_matrix(1, 3)
    doc_cold = bidegree_document(cold, 1, 3)
    warm = TitsPage(2, 1, (), (1,), store=store)
    warm.d1_matrix(1, 3)
    doc_warm = bidegree_document(warm, 1, 3)
    blob_cold = json.dumps(doc_cold, sort_keys=True, separators=(",", ":"))
    blob_warm = json.dumps(doc_warm, sort_keys=True, separators=(",", ":"))
    assert blob_cold == blob_warm
    files = list(tmp_path.glob("pages/*.json"))
    assert files
    on_disk = json.loads(files[0].read_text())
    assert set(on_disk) == {"params", "basis", "matrix"}
