"""The acceptance suite: each criterion is a callable returning a report.

These are the exit criteria of the build.  Every function runs its full
stated scope with exact arithmetic and returns (ok, details); the CLI
`verify` subcommand and the pytest acceptance module both drive this.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import atoms, ce, cup, doublecomplex, extgroups, levi, linv
from . import roots as rt
from .engine import Engine
from .linalg import VectorSpan, vec_dot
from .pages import TitsPage


@dataclass
class CriterionReport:
    name: str
    ok: bool
    details: str
    seconds: float


_ENGINES: dict[tuple[int, int], Engine] = {}


def shared_engine(n: int, d_k: int) -> Engine:
    if (n, d_k) not in _ENGINES:
        _ENGINES[(n, d_k)] = Engine(n, d_k)
    return _ENGINES[(n, d_k)]


def _subsets(s: Iterable[int]):
    s = sorted(s)
    for r in range(len(s) + 1):
        yield from (frozenset(c) for c in itertools.combinations(s, r))


def _pages(n: int, d_k: int):
    eng = shared_engine(n, d_k)
    for i1 in _subsets(rt.delta(n)):
        for i0 in _subsets(i1):
            yield eng.page(i0, i1)


def run(fn: Callable[[], tuple[bool, str]], name: str) -> CriterionReport:
    t0 = time.time()
    ok, details = fn()
    return CriterionReport(name, ok, details, time.time() - t0)


# -- 1: oracle equivalence ---------------------------------------------------------

def criterion_ce_oracle() -> tuple[bool, str]:
    """Combinatorial Levi dimensions match brute-force exterior cohomology."""
    checked = 0
    cases = [(n, d_k, i) for n in (1, 2, 3) for d_k in (1, 2)
             for i in _subsets(rt.delta(n))]
    cases += [(4, 1, i) for i in _subsets(rt.delta(4))
              if all(len(b) + 1 <= 3 for b in rt.blocks(4, i))]
    for n, d_k, i in cases:
        combo = levi.levi_dims(n, d_k, i)
        alg = ce.levi_group_algebra(n, i, d_k)
        oracle = ce.ce_cohomology_dims(alg)
        top = max(len(combo), len(oracle))
        combo += [0] * (top - len(combo))
        oracle += [0] * (top - len(oracle))
        if combo != oracle:
            return False, f"mismatch at n={n} d_K={d_k} I={sorted(i)}: {combo} vs {oracle}"
        checked += 1
    return True, f"{checked} Levi subgroups agree with the exterior-complex oracle"


# -- 2: differential soundness ------------------------------------------------------

def criterion_differential() -> tuple[bool, str]:
    npages = 0
    for d_k in (1, 2):
        for n in (1, 2, 3, 4):
            for page in _pages(n, d_k):
                if not page.d1_squared_is_zero():
                    return False, f"d1^2 != 0 on page {page.key}"
                for k in range(page.kmax + 1):
                    if not page.euler_check(k):
                        return False, f"euler fails on {page.key} row {k}"
                npages += 1
    return True, f"d1^2 = 0 and euler characteristic stable on {npages} pages"


# -- 3: atom basis of the second page ------------------------------------------------

def _atom_basis_scope(ns_dks) -> tuple[bool, str]:
    checked = 0
    for n, d_k in ns_dks:
        for page in _pages(n, d_k):
            for ell in page.ells:
                base = atoms.bottom_row(page, ell)
                for k in (base, base + 1):
                    if not 0 <= k <= page.kmax:
                        continue
                    classes = atoms.psi(page, ell, k)
                    if len(classes) != page.e2_dim(ell, k):
                        return False, (f"count mismatch {page.key} ({ell},{k}): "
                                       f"{len(classes)} vs {page.e2_dim(ell, k)}")
                    atoms.atom_reducer(page, ell, k)  # raises on dependence
                    checked += 1
    return True, f"{checked} bidegrees: class count equals second-page dimension, independent mod image"


def criterion_atom_basis() -> tuple[bool, str]:
    return _atom_basis_scope([(n, d_k) for n in (2, 3, 4) for d_k in (1, 2)])


def criterion_atom_basis_extended() -> tuple[bool, str]:
    return _atom_basis_scope([(5, 1)])


# -- 4: quasi-isomorphism of the combinatorial subcomplex ------------------------------

def criterion_quasi_iso() -> tuple[bool, str]:
    checked = 0
    for d_k in (1, 2):
        for n in (2, 3, 4):
            for page in _pages(n, d_k):
                for k in range(page.kmax + 1):
                    ok, report = atoms.diamond_check(page, k)
                    if not ok:
                        return False, f"quasi-isomorphism fails {page.key} row {k}: {report}"
                    checked += 1
    return True, f"{checked} rows: subcomplex cohomology equals full row cohomology"


# -- 5: degeneration ------------------------------------------------------------------

def criterion_degeneration(extended: bool = False) -> tuple[bool, str]:
    checked = 0
    for d_k in (1, 2):
        for n in (2, 3):
            for page in _pages(n, d_k):
                ok, report = doublecomplex.degeneration_check(page)
                if not ok:
                    return False, f"collapse fails on {page.key}: {report}"
                checked += 1
    if extended:
        for page in _pages(4, 1):
            if any(len(b) + 1 > 3 for b in rt.blocks(4, page.i1)):
                continue
            ok, report = doublecomplex.degeneration_check(page, extended=True)
            if not ok:
                return False, f"collapse fails on {page.key}: {report}"
            checked += 1
    return True, f"{checked} pages: total cohomology equals antidiagonal sums"


# -- 6: golden dimensions --------------------------------------------------------------

def criterion_golden_dims() -> tuple[bool, str]:
    for n, want in ((2, 2), (3, 5), (4, 13)):
        eng = shared_engine(n, 1)
        profile = extgroups.steinberg_profile(eng, rt.delta(n), ())
        if profile.dim(profile.h_min) != want:
            return False, f"dim of the top bottom-Ext at n={n}: {profile.dim(profile.h_min)} != {want}"
    eng3 = shared_engine(3, 1)
    graded = extgroups.steinberg_profile(eng3, rt.delta(3), ()).graded[2]
    if graded != [4, 1, 0]:
        return False, f"graded dims at n=3: {graded} != [4, 1, 0]"
    eng2 = shared_engine(2, 1)
    triv_st = extgroups.steinberg_profile(eng2, rt.delta(2), ())
    if triv_st.dim(1) != 2:
        return False, f"first Ext of the trivial against the Steinberg: {triv_st.dim(1)} != 2"
    for n in range(1, 9):
        for d_k in (1, 2, 3):
            u, _ = linv.universal_dim(n, d_k)
            c = linv.interval_partition_count(n, d_k)
            if u != c:
                return False, f"recursion vs partition count at n={n} d_K={d_k}: {u} != {c}"
    for n in (2, 3, 4):
        eng = shared_engine(n, 1)
        u, _ = linv.universal_dim(n, 1)
        if u != cup.ehat_space(eng).dim:
            return False, f"recursion vs page dimension at n={n}"
    return True, "2, 5, 13 with graded (4,1,0); recursion matches counts to n=8, d_K=3"


# -- 7: cup structure -------------------------------------------------------------------

def _doubled(cls) -> bool:
    pos = [p for p, _ in cls.max_theta.chars]
    return len(pos) != len(set(pos))


def _psi_list(page: TitsPage, prime: bool):
    out = []
    for ell in page.ells:
        k = atoms.bottom_row(page, ell) + (1 if prime else 0)
        if 0 <= k <= page.kmax:
            out.extend(atoms.psi(page, ell, k))
    return out


def criterion_cup_structure() -> tuple[bool, str]:
    ncup = nsep = 0
    for n, d_k in [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2)]:
        eng = shared_engine(n, d_k)
        for i1 in _subsets(rt.delta(n)):
            for i0 in _subsets(i1):
                for i2 in _subsets(i0):
                    for i4 in _subsets(i2):
                        for p0, p1 in ((False, False), (True, False), (False, True)):
                            dl, dr = i0 - i2, i2 - i4
                            if (p0 and not dl) or (p1 and not dr):
                                continue
                            ctx = cup.make_context(n, d_k, i1, i0, i2, i4, p0, p1)
                            page0, page1, page2 = cup.context_pages(eng, ctx)
                            cls0s, cls1s = _psi_list(page0, p0), _psi_list(page1, p1)
                            images, signs = {}, {}
                            for c0 in cls0s:
                                for c1 in cls1s:
                                    sgn, c2 = cup.cup_atoms(eng, ctx, c0, c1)
                                    ncup += 1
                                    images[(c0, c1)] = (sgn, c2)
                                    if not (_doubled(c0) or _doubled(c1)):
                                        key = (c0.ell, c1.ell)
                                        if signs.setdefault(key, sgn) != sgn:
                                            return False, f"sign varies at fixed columns: {ctx} {key}"
                                    if not dl or not dr or max(dl) < min(dr):
                                        nsep += 1
                                        if cup.cup_atoms_separated(eng, ctx, c0, c1) != (sgn, c2):
                                            return False, f"route disagreement at {ctx}"
                            if len({v[1] for v in images.values()}) != len(images):
                                return False, f"injectivity fails at {ctx}"
                            ctxs = cup.make_context(n, d_k, i1, i0,
                                                    frozenset(i4) | dl, i4, p1, p0)
                            for (c0, c1), (sgn, c2) in images.items():
                                flip = -1 if (c0.k * c1.k) % 2 else 1
                                sgn2, c22 = cup.cup_atoms(eng, ctxs, c1, c0)
                                if (c22, sgn2) != (c2, flip * sgn):
                                    return False, f"swap law fails at {ctx}"
                            if not p0 and not p1 and cls0s and cls1s:
                                tot2 = len(_psi_list(page2, False))
                                prod = len(cls0s) * len(cls1s)
                                if rt.do_not_connect(dl, dr):
                                    if prod != tot2:
                                        return False, f"expected bijectivity at {ctx}"
                                elif dl and dr and prod >= tot2:
                                    return False, f"expected strict growth at {ctx}"
    return True, f"{ncup} products, all single signed atoms; {nsep} separated agreements; swap, injectivity, bijectivity laws hold"


# -- 8: generators and codimension law ----------------------------------------------------

def criterion_generators(max_n: int = 5) -> tuple[bool, str]:
    checked = 0
    for d_k in (1, 2):
        for n in range(2, max_n + 1):
            eng = shared_engine(n, d_k)
            for i in _subsets(rt.delta(n)):
                if len(i) < 2:
                    continue
                space = cup.e_space(eng, i)
                span = VectorSpan()
                for ip in _subsets(i):
                    if not ip or ip == i:
                        continue
                    a, b = cup.e_space(eng, i - ip), cup.e_space(eng, ip)
                    for ca in a.basis:
                        for cb in b.basis:
                            prod = cup.cup_e(eng, i, ip, (), {ca: Fraction(1)}, {cb: Fraction(1)})
                            span.add(space.coords(prod))
                codim = space.dim - span.rank
                want = d_k if len(rt.maximal_intervals(i)) == 1 else 0
                if codim != want:
                    return False, f"codimension {codim} != {want} at n={n} d_K={d_k} I={sorted(i)}"
                checked += 1
    rank_checked = 0
    for d_k in (1, 2):
        for n in (2, 3, 4):
            eng = shared_engine(n, d_k)
            for i0 in _subsets(rt.delta(n)):
                for i2 in _subsets(i0):
                    rank, dim, _ = cup.basis_x_rank(eng, i0, i2)
                    if rank != dim:
                        return False, f"cup basis rank deficient at n={n} d_K={d_k} ({sorted(i0)},{sorted(i2)})"
                    rank_checked += 1
    return True, f"codimension law on {checked} subsets; cup basis full rank on {rank_checked} pairs"


# -- 9: moduli of invariants ----------------------------------------------------------------

def criterion_moduli(samples: int = 100) -> tuple[bool, str]:
    for n in (2, 3, 4):
        for d_k in (1, 2):
            eng = shared_engine(n, d_k)
            rng = random.Random(10_000 * n + d_k)
            for t in range(samples):
                params = linv.random_params(n, d_k, rng)
                phi = linv.params_to_hyperplane(eng, params)
                if not linv.is_bs_invariant(eng, phi).ok:
                    return False, f"constructed hyperplane rejected (n={n}, d_K={d_k}, sample {t})"
                if linv.hyperplane_to_params(eng, phi) != params:
                    return False, f"round trip differs (n={n}, d_K={d_k}, sample {t})"
                for alpha in rt.positive_roots(n):
                    if len(rt.root_interval(alpha)) >= 2:
                        if not linv.sum_formula_check(eng, phi, alpha):
                            return False, f"sum formula fails (n={n}, d_K={d_k}, {alpha})"
            rejected = 0
            attempts = 0
            top = cup.ehat_space(eng)
            smooth = top.coords(cup.smooth_vec(eng, rt.delta(n)))
            while rejected < samples:
                attempts += 1
                if attempts > 50 * samples:
                    return False, f"rejection sampling stalled (n={n}, d_K={d_k})"
                params = linv.random_params(n, d_k, rng)
                phi = dict(linv.params_to_hyperplane(eng, params))
                if n == 2:
                    # every hyperplane proper on pairs qualifies at rank two,
                    # so negatives must hit the smooth line instead
                    other = {i: Fraction(rng.randint(-9, 9)) for i in range(top.dim)}
                    scale_o = vec_dot(other, smooth)
                    scale_p = vec_dot(phi, smooth)
                    phi = {i: scale_o * phi.get(i, Fraction(0)) - scale_p * other.get(i, Fraction(0))
                           for i in range(top.dim)}
                    phi = {i: c for i, c in phi.items() if c}
                else:
                    coord = rng.randrange(top.dim)
                    phi[coord] = phi.get(coord, Fraction(0)) + \
                        Fraction(rng.randint(1, 9), rng.randint(1, 9))
                if not any(phi.values()):
                    continue
                diag = linv.is_bs_invariant(eng, phi)
                if not diag.ok:
                    if not diag.failures or "condition" not in diag.failures[0]:
                        return False, "rejection lacks a named condition"
                    rejected += 1
    return True, f"{samples} constructions pass and round trip per size; {samples} perturbations rejected with named conditions per size"


# -- 10: twist membership ----------------------------------------------------------------------

def criterion_twists() -> tuple[bool, str]:
    """Twisted class sums are cohomologous to the originals up to the
    verified per-step sign."""
    checked = 0
    for d_k in (1, 2):
        for n in (2, 3, 4):
            for page in _pages(n, d_k):
                for ell in page.ells:
                    for k in range(page.kmax + 1):
                        for cls in atoms.atom_classes(page, ell, k):
                            for s0, d0 in atoms.saturated_options(page, cls):
                                tw = atoms.twisted_class(page, cls, s0, d0)
                                sgn = -1 if atoms.twist_steps(page, cls, s0, d0) % 2 else 1
                                diff = dict(tw.vector())
                                for th, c in cls.vector().items():
                                    new = diff.get(th, Fraction(0)) - sgn * c
                                    if new:
                                        diff[th] = new
                                    else:
                                        diff.pop(th, None)
                                if diff and not atoms.in_image(page, ell, k, diff):
                                    return False, (f"twist difference not a boundary: "
                                                   f"{page.key} ({ell},{k}) s0={s0} d0={d0}")
                                checked += 1
    return True, f"{checked} twisted classes cohomologous to their originals (sign per twist step)"


ALL_CRITERIA: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("1 oracle equivalence", criterion_ce_oracle),
    ("2 differential soundness", criterion_differential),
    ("3 atom basis of the second page", criterion_atom_basis),
    ("4 subcomplex quasi-isomorphism", criterion_quasi_iso),
    ("5 collapse at the second page", criterion_degeneration),
    ("6 golden dimensions", criterion_golden_dims),
    ("7 cup structure", criterion_cup_structure),
    ("8 generators and codimension", criterion_generators),
    ("9 moduli of invariants", criterion_moduli),
    ("10 twist membership", criterion_twists),
]

EXTENDED_CRITERIA: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("3x atom basis, rank five", criterion_atom_basis_extended),
    ("5x collapse, rank four", lambda: criterion_degeneration(extended=True)),
]


def run_all(extended: bool = False, only: Iterable[int] | None = None) -> list[CriterionReport]:
    reports = []
    selected = set(only) if only is not None else None
    for idx, (name, fn) in enumerate(ALL_CRITERIA, start=1):
        if selected is not None and idx not in selected:
            continue
        reports.append(run(fn, name))
    if extended and selected is None:
        for name, fn in EXTENDED_CRITERIA:
            reports.append(run(fn, name))
    return reports
