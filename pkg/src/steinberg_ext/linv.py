"""Hyperplane invariants of the top Ext space and their parameter moduli.

A qualifying hyperplane meets every embedded sub-Ext-space properly and
turns the cup product into a product of quotient lines.  Such hyperplanes
correspond bijectively to one rational parameter per positive root and
embedding: the parameter of a root measures the hyperplane against the
one-dimensional gap between its generator family and the smooth line.

Everything is exact rational linear algebra over the fixed atom basis of
the top space.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import cup
from . import roots as rt
from .cup import EVec
from .engine import Engine
from .errors import ConsistencyError
from .linalg import Vec, VectorSpan, vec_dot

Params = dict[tuple[rt.Root, int], Fraction]


def param_keys(n: int, d_k: int) -> list[tuple[rt.Root, int]]:
    return [(alpha, iota) for alpha in rt.positive_roots(n) for iota in range(d_k)]


def random_params(n: int, d_k: int, rng: random.Random,
                  span: int = 9) -> Params:
    return {key: Fraction(rng.randint(-span, span), rng.randint(1, span))
            for key in param_keys(n, d_k)}


class HyperplaneLattice:
    """Sample-independent data shared by all hyperplane computations.

    Holds, per difference set, the generator families, the smooth vector,
    the cup basis, and the embedding matrices into the top space.
    """

    def __init__(self, engine: Engine):
        self.engine = engine
        self.n, self.d_k = engine.n, engine.d_k
        self.top = cup.ehat_space(engine)
        self.delta = frozenset(rt.delta(self.n))

    def pairs(self):
        for i0 in _subsets(self.delta):
            for i2 in _subsets(i0):
                yield i0, i2

    def triples(self):
        for i0 in _subsets(self.delta):
            for i2 in _subsets(i0):
                for i4 in _subsets(i2):
                    yield i0, i2, i4

    def embed_matrix(self, i0, i2) -> list[tuple[object, Vec]]:
        """Pairs (basis class, top coordinates of its embedded image)."""
        cache = getattr(self, "_embed", None)
        if cache is None:
            cache = {}
            self._embed = cache
        key = (frozenset(i0), frozenset(i2))
        if key not in cache:
            space = cup.e_space(self.engine, key[0] - key[1])
            out = []
            for cls in space.basis:
                img = cup.iota_embed(self.engine, key[0], key[1], {cls: Fraction(1)})
                out.append((cls, self.top.coords(img)))
            cache[key] = out
        return cache[key]

    def functional(self, phi: Vec, i0, i2) -> list[tuple[object, Fraction]]:
        """phi composed with the embedding, per basis class of the pair."""
        return [(cls, vec_dot(phi, col)) for cls, col in self.embed_matrix(i0, i2)]

    def cup_table(self, i0, i2, i4) -> dict[tuple[object, object], EVec]:
        cache = getattr(self, "_cups", None)
        if cache is None:
            cache = {}
            self._cups = cache
        key = (frozenset(i0), frozenset(i2), frozenset(i4))
        if key not in cache:
            a = cup.e_space(self.engine, key[0] - key[1])
            b = cup.e_space(self.engine, key[1] - key[2])
            table = {}
            for ca in a.basis:
                for cb in b.basis:
                    table[(ca, cb)] = cup.cup_e(self.engine, key[0], key[1], key[2],
                                                {ca: Fraction(1)}, {cb: Fraction(1)})
            cache[key] = table
        return cache[key]


def _subsets(s: Iterable[int]):
    s = sorted(s)
    for r in range(len(s) + 1):
        yield from (frozenset(c) for c in itertools.combinations(s, r))


def lattice(engine: Engine) -> HyperplaneLattice:
    lat = getattr(engine, "_hyperplane_lattice", None)
    if lat is None:
        lat = HyperplaneLattice(engine)
        engine._hyperplane_lattice = lat  # type: ignore[attr-defined]
    return lat


# -- parameters -> hyperplane ------------------------------------------------------

def _shifted_family(lat: HyperplaneLattice, params: Params, alpha: rt.Root) -> list[EVec]:
    """The family of one root with logarithmic members shifted by the
    parameter multiple of the valuation member."""
    fam = cup.generators_xbar(lat.engine, alpha)
    if len(rt.root_interval(alpha)) == 1:
        base = fam["inf"]
    else:
        base = smooth_on_interval(lat, alpha)
    out = []
    for iota in range(lat.d_k):
        vec = dict(fam[iota])
        coeff = params[(alpha, iota)]
        for cls, c in base.items():
            new = vec.get(cls, Fraction(0)) - coeff * c
            if new:
                vec[cls] = new
            else:
                vec.pop(cls, None)
        out.append(vec)
    return out


def smooth_on_interval(lat: HyperplaneLattice, alpha: rt.Root) -> EVec:
    return cup.smooth_vec(lat.engine, rt.root_interval(alpha))


def hyperplane_members(lat: HyperplaneLattice, params: Params,
                       diff: frozenset[int]) -> list[EVec]:
    """Spanning set of the parameter hyperplane inside one bottom Ext space.

    All iterated products of per-part choices from {smooth} union {shifted
    logarithms}, over interval partitions of the difference set, except the
    everywhere-smooth product.
    """
    out = []
    for partition in rt.interval_partitions(diff):
        choices_per_part = []
        for part in partition:
            alpha = rt.interval_root(part)
            shifted = _shifted_family(lat, params, alpha)
            base = smooth_on_interval(lat, alpha) if len(part) > 1 else \
                cup.generators_xbar(lat.engine, alpha)["inf"]
            choices_per_part.append([("inf", base)] + [(i, v) for i, v in enumerate(shifted)])
        for combo in itertools.product(*choices_per_part):
            if all(tag == "inf" for tag, _ in combo):
                continue
            acc = cup.unit_vec(lat.engine)
            cur: set[int] = set()
            for part, (_, vecp) in zip(reversed(partition), reversed(combo)):
                acc = cup.cup_e(lat.engine, cur | set(part), cur, (), vecp, acc)
                cur |= set(part)
            out.append(acc)
    return out


def params_to_hyperplane(engine: Engine, params: Params) -> Vec:
    """Covector on the top space whose kernel is the parameter hyperplane."""
    lat = lattice(engine)
    members = hyperplane_members(lat, params, lat.delta)
    span = VectorSpan()
    for m in members:
        span.add(lat.top.coords(m))
    if span.rank != lat.top.dim - 1:
        raise ConsistencyError("parameter span is not a hyperplane",
                               rank=span.rank, dim=lat.top.dim)
    # solve for the one-dimensional left kernel of the member matrix
    columns = [lat.top.coords(m) for m in members]
    kernel = _left_kernel(columns, lat.top.dim)
    if len(kernel) != 1:
        raise ConsistencyError("hyperplane covector is not unique",
                               found=len(kernel))
    return kernel[0]


def _left_kernel(columns: list[Vec], dim: int) -> list[Vec]:
    """Covectors annihilating every column (row-space kernel)."""
    out = []
    span = VectorSpan(track_witness=True)
    # witness tags coincide with row indices: one add call per row
    for row in range(dim):
        rowvec = {j: col[row] for j, col in enumerate(columns) if row in col}
        if not span.add(rowvec):
            coeffs = span.coefficients(rowvec)
            assert coeffs is not None
            ker = dict(coeffs)
            ker[row] = Fraction(-1)
            out.append(ker)
    return out


# -- hyperplane -> parameters / validation ------------------------------------------

@dataclass
class Diagnostics:
    ok: bool
    failures: list[dict] = field(default_factory=list)


def proper_on_pairs(engine: Engine, phi: Vec) -> Diagnostics:
    """The hyperplane must not contain any embedded sub-Ext-space."""
    lat = lattice(engine)
    diag = Diagnostics(True)
    for i0, i2 in lat.pairs():
        values = lat.functional(phi, i0, i2)
        if all(v == 0 for _, v in values):
            diag.ok = False
            diag.failures.append({"condition": "i",
                                  "pair": (tuple(sorted(i0)), tuple(sorted(i2)))})
    return diag


def kernel_basis(engine: Engine, phi: Vec, i0, i2) -> list[Vec]:
    """Coordinates (in the pair space) of the induced hyperplane there."""
    lat = lattice(engine)
    space = cup.e_space(engine, frozenset(i0) - frozenset(i2))
    values = dict(lat.functional(phi, i0, i2))
    pivot = next((cls for cls in space.basis if values[cls]), None)
    if pivot is None:
        raise ValueError("hyperplane contains the whole pair space")
    out = []
    pidx = space.index[pivot]
    for cls in space.basis:
        if cls is pivot:
            continue
        vec = {space.index[cls]: values[pivot], pidx: -values[cls]}
        out.append({k: v for k, v in vec.items() if v})
    return out


def is_bs_invariant(engine: Engine, phi: Vec) -> Diagnostics:
    """Full test: proper on every pair, multiplicative on every triple.

    On a triple the composed pairing B(a, b) = phi(embedded a cup b) must be
    a nonzero multiple of the outer product of the two pair functionals;
    that is exactly the statement that the product descends to an
    isomorphism of quotient lines.
    """
    lat = lattice(engine)
    diag = proper_on_pairs(engine, phi)
    if not diag.ok:
        return diag
    for i0, i2, i4 in lat.triples():
        table = lat.cup_table(i0, i2, i4)
        vals_a = dict(lat.functional(phi, i0, i2))
        vals_b = dict(lat.functional(phi, i2, i4))
        vals_c = dict(lat.functional(phi, i0, i4))

        def pairing(ca, cb):
            return sum((c * vals_c[cls] for cls, c in table[(ca, cb)].items()),
                       Fraction(0))

        a0 = next(cls for cls, v in vals_a.items() if v)
        b0 = next(cls for cls, v in vals_b.items() if v)
        base = pairing(a0, b0)
        bad = base == 0
        if not bad:
            for (ca, cb) in table:
                lhs = pairing(ca, cb) * vals_a[a0] * vals_b[b0]
                rhs = base * vals_a[ca] * vals_b[cb]
                if lhs != rhs:
                    bad = True
                    break
        if bad:
            diag.ok = False
            diag.failures.append({
                "condition": "ii",
                "triple": tuple(tuple(sorted(s)) for s in (i0, i2, i4))})
            return diag
    return diag


def aligned_embed(engine: Engine, run: frozenset[int], u: EVec) -> EVec:
    """Section of the top space aligned with the member construction.

    The vector is slotted into the interval partition made of its own run
    plus singletons, folded in ascending part order with valuation factors
    elsewhere; reading parameters through this section inverts the member
    construction on the nose (the two-sided smooth section would twist
    components sitting in different columns by different signs).
    """
    delta = rt.delta(engine.n)
    parts = sorted([tuple(sorted(run))] + [(p,) for p in sorted(delta - run)])
    acc = cup.unit_vec(engine)
    cur: set[int] = set()
    for part in reversed(parts):
        if frozenset(part) == run:
            vec = u
        else:
            vec = {cup.char_atom(engine, part[0], 0): Fraction(1)}
        acc = cup.cup_e(engine, cur | set(part), cur, (), vec, acc)
        cur |= set(part)
    return acc


def hyperplane_to_params(engine: Engine, phi: Vec) -> Params:
    """Read the parameters off a qualifying hyperplane by evaluation ratios."""
    lat = lattice(engine)
    diag = proper_on_pairs(engine, phi)
    if not diag.ok:
        raise ValueError(f"not an invariant: fails condition (i) at "
                         f"{diag.failures[0]['pair']}")
    out: Params = {}
    for alpha in rt.positive_roots(lat.n):
        run = frozenset(rt.root_interval(alpha))
        fam = cup.generators_xbar(engine, alpha)
        base = fam["inf"] if len(run) == 1 else cup.smooth_vec(engine, run)
        denom = _eval(engine, phi, run, base)
        if denom == 0:
            raise ValueError(f"not an invariant: smooth member of {alpha} "
                             f"lands inside the hyperplane")
        for iota in range(lat.d_k):
            num = _eval(engine, phi, run, fam[iota])
            out[(alpha, iota)] = num / denom
    return out


def _eval(engine: Engine, phi: Vec, run: frozenset[int], vec: EVec) -> Fraction:
    lat = lattice(engine)
    img = aligned_embed(engine, run, vec)
    return vec_dot(phi, lat.top.coords(img))


def sum_formula_check(engine: Engine, phi: Vec, alpha: rt.Root) -> bool:
    """Two descriptions of the sub-top slice of one root's hyperplane agree.

    Left side: the intersection of the proper-product span with the
    hyperplane slice of the root's space; right side: the span of full
    left factors cupped against smaller hyperplane slices.  Compared by
    double containment of exact spans.
    """
    lat = lattice(engine)
    run = frozenset(rt.root_interval(alpha))
    if len(run) < 2:
        raise ValueError("needs a non-simple positive root")
    space = cup.e_space(engine, run)
    values = dict(lat.functional(phi, run, frozenset()))

    # proper-product span with the functional values carried along
    proper: list[Vec] = []
    for ip in _subsets(run):
        if not ip or ip == run:
            continue
        for (ca, cb), prod in lat.cup_table(run, ip, frozenset()).items():
            proper.append(space.coords(prod))
    basis_span = VectorSpan()
    proper = [v for v in proper if basis_span.add(v)]
    # slice the span by the functional: combinations with zero evaluation
    evals = [sum((c * values[space.basis[i]] for i, c in v.items()), Fraction(0))
             for v in proper]
    lhs = VectorSpan()
    pivot = next((j for j, e in enumerate(evals) if e), None)
    for j, v in enumerate(proper):
        if j == pivot:
            continue
        if pivot is None or evals[j] == 0:
            lhs.add(v)
        else:
            scaled = {i: c * evals[pivot] for i, c in v.items()}
            for i, c in proper[pivot].items():
                new = scaled.get(i, Fraction(0)) - evals[j] * c
                if new:
                    scaled[i] = new
                else:
                    scaled.pop(i, None)
            lhs.add(scaled)

    # right side: E(run minus subroot) cup W(subroot) over proper subroots
    rhs = VectorSpan()
    rhs_vectors: list[Vec] = []
    for alpha2 in rt.positive_roots(lat.n):
        run2 = frozenset(rt.root_interval(alpha2))
        if not run2 < run:
            continue
        sub_kernel = kernel_basis(engine, phi, run2, frozenset())
        sub_space = cup.e_space(engine, run2)
        table = lat.cup_table(run, run2, frozenset())
        a = cup.e_space(engine, run - run2)
        for ca in a.basis:
            for kvec in sub_kernel:
                acc: Vec = {}
                for idx, coeff in kvec.items():
                    cb = sub_space.basis[idx]
                    for cls, c in table[(ca, cb)].items():
                        pos = space.index[cls]
                        new = acc.get(pos, Fraction(0)) + coeff * c
                        if new:
                            acc[pos] = new
                        else:
                            acc.pop(pos, None)
                rhs_vectors.append(acc)
                rhs.add(acc)
    if lhs.rank != rhs.rank:
        return False
    return all(lhs.contains(v) for v in rhs_vectors)


# -- dimension layer of the Galois side -----------------------------------------------

def galois_ext_dim(l1: int, l2: int, i: int, d_k: int) -> int:
    """Extension dimensions between powers of the cyclotomic character."""
    if i == 0:
        return 1 if l1 == l2 else 0
    if i == 1:
        return d_k + 1 if l1 in (l2, l2 - 1) else d_k
    if i == 2:
        return 1 if l1 == l2 - 1 else 0
    raise ValueError("cohomological degree must be 0, 1 or 2")


def universal_dim(n: int, d_k: int) -> tuple[int, list[tuple[int, int]]]:
    """Dimension of the universal extension space, with its recursion trace.

    dim(1) = 1 and dim(m) = (d_K+1) dim(m-1) + d_K sum of the earlier
    dims; the same numbers count interval partitions weighted by family
    sizes.
    """
    dims = [0, 1]
    for m in range(2, n + 1):
        total = (d_k + 1) * dims[m - 1] + d_k * sum(dims[1:m - 1])
        dims.append(total)
    trace = [(m, dims[m]) for m in range(1, n + 1)]
    return dims[n], trace


def interval_partition_count(n: int, d_k: int) -> int:
    """Sum over interval partitions of the full root set of the product of
    family sizes (d_K + 1 on simple parts, d_K otherwise)."""
    total = 0
    for partition in rt.interval_partitions(rt.delta(n)):
        prod = 1
        for part in partition:
            prod *= (d_k + 1) if len(part) == 1 else d_k
        total += prod
    return total
