"""Brute-force Lie algebra cohomology via the exterior-algebra boundary.

This is the independent oracle for the combinatorial Levi bases: a Lie
algebra is handed over as structure constants, the full exterior complex
is materialized, and cohomology dimensions drop out of exact rank
computations.  Nothing here knows about primitive classes or Kuenneth
factorizations.

For reductive algebras given with an ad-diagonal weight basis the complex
splits by weight and all cohomology sits in weight zero, so large
instances only materialize the weight-zero subcomplex.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import Vec, VectorSpan
from . import roots as rt

Weight = tuple[int, ...]


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q given by structure constants.

    brackets[(i, j)] for i < j maps basis index k to the coefficient of
    e_k in [e_i, e_j]; missing keys mean zero.  An optional weight per
    basis vector declares an ad-diagonal grading, which is validated.
    """

    def __init__(self, dim: int,
                 brackets: Mapping[tuple[int, int], Mapping[int, object]],
                 weights: Sequence[Weight] | None = None,
                 check: bool = True):
        self.dim = dim
        self.brackets: dict[tuple[int, int], Vec] = {}
        for (i, j), terms in brackets.items():
            if not 0 <= i < j < dim:
                raise ValueError("bracket indices must satisfy 0 <= i < j < dim")
            v = {k: Fraction(c) for k, c in terms.items() if c}
            if v:
                self.brackets[(i, j)] = v
        self.weights = tuple(weights) if weights is not None else None
        if check:
            self._check_jacobi()
            if self.weights is not None:
                self._check_weights()

    def bracket(self, i: int, j: int) -> Vec:
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket_vec(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, c in self.bracket(i, j).items():
                    new = out.get(k, Fraction(0)) + ci * cj * c
                    if new:
                        out[k] = new
                    else:
                        out.pop(k, None)
        return out

    def _check_jacobi(self) -> None:
        for i, j, k in itertools.combinations(range(self.dim), 3):
            acc: Vec = {}
            for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self.bracket(b, c)
                term = self.bracket_vec({a: Fraction(1)}, inner)
                for idx, coeff in term.items():
                    new = acc.get(idx, Fraction(0)) + coeff
                    if new:
                        acc[idx] = new
                    else:
                        acc.pop(idx, None)
            if acc:
                raise ValueError(f"Jacobi identity fails on basis triple {(i, j, k)}")

    def _check_weights(self) -> None:
        assert self.weights is not None
        if len(self.weights) != self.dim:
            raise ValueError("need one weight per basis vector")
        for (i, j), terms in self.brackets.items():
            target = tuple(a + b for a, b in zip(self.weights[i], self.weights[j]))
            for k in terms:
                if self.weights[k] != target:
                    raise ValueError("structure constants are not weight-graded")


def abelian(rank: int) -> LieAlgebra:
    return LieAlgebra(rank, {}, weights=tuple((0,) for _ in range(rank)))


Matrix = dict[tuple[int, int], Fraction]


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    out: Matrix = {}
    for (i, j), x in a.items():
        for (j2, k), y in b.items():
            if j == j2:
                new = out.get((i, k), Fraction(0)) + x * y
                if new:
                    out[(i, k)] = new
                else:
                    out.pop((i, k), None)
    return out


def from_matrices(mats: Sequence[Matrix], weights: Sequence[Weight] | None = None) -> LieAlgebra:
    """Lie algebra spanned by concrete matrices; brackets expanded in the basis.

    The matrix basis must be closed under commutators and consist of
    independent matrices.
    """
    span = VectorSpan(track_witness=True)
    flat: list[Vec] = []
    keys: dict[tuple[int, int], int] = {}

    def flatten(m: Matrix) -> Vec:
        out: Vec = {}
        for key, c in m.items():
            if key not in keys:
                keys[key] = len(keys)
            out[keys[key]] = c
        return out

    for m in mats:
        fv = flatten(m)
        flat.append(fv)
        if not span.add(fv):
            raise ValueError("matrix basis is dependent")
    brackets: dict[tuple[int, int], Vec] = {}
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm: Matrix = _mat_mul(mats[i], mats[j])
            for key, c in _mat_mul(mats[j], mats[i]).items():
                new = comm.get(key, Fraction(0)) - c
                if new:
                    comm[key] = new
                else:
                    comm.pop(key, None)
            coeffs = span.coefficients(flatten(comm))
            if coeffs is None:
                raise ValueError("matrix basis is not closed under commutators")
            brackets[(i, j)] = coeffs
    return LieAlgebra(len(mats), brackets, weights=weights)


@functools.lru_cache(maxsize=None)
def special_linear(m: int) -> LieAlgebra:
    """Traceless  m x m  matrices with the standard weight basis."""
    mats: list[Matrix] = []
    weights: list[Weight] = []

    def wt(a: int, b: int) -> Weight:
        w = [0] * m
        w[a] += 1
        w[b] -= 1
        return tuple(w)

    for a in range(m):
        for b in range(m):
            if a != b:
                mats.append({(a, b): Fraction(1)})
                weights.append(wt(a, b))
    for c in range(m - 1):
        mats.append({(c, c): Fraction(1), (c + 1, c + 1): Fraction(-1)})
        weights.append(tuple([0] * m))
    return from_matrices(mats, weights=weights)


def direct_sum(*algebras: LieAlgebra) -> LieAlgebra:
    dim = sum(a.dim for a in algebras)
    brackets: dict[tuple[int, int], Vec] = {}
    have_weights = all(a.weights is not None for a in algebras)
    widths = [len(a.weights[0]) if (a.weights and a.dim) else 0 for a in algebras]
    weights: list[Weight] = []
    offset = 0
    for idx, alg in enumerate(algebras):
        for (i, j), terms in alg.brackets.items():
            brackets[(i + offset, j + offset)] = {k + offset: c for k, c in terms.items()}
        if have_weights and alg.weights is not None:
            pre = sum(widths[:idx])
            post = sum(widths[idx + 1:])
            for w in alg.weights:
                weights.append((0,) * pre + tuple(w) + (0,) * post)
        offset += alg.dim
    return LieAlgebra(dim, brackets,
                      weights=tuple(weights) if have_weights else None, check=False)


def levi_group_algebra(n: int, roots: Iterable[int], d_k: int) -> LieAlgebra:
    """Model algebra whose cohomology matches a quotient Levi subgroup.

    One traceless-matrix copy per block and embedding, plus an abelian
    summand of rank (#blocks - 1) * (d_k + 1) standing in for the
    continuous characters of the central torus.
    """
    sizes = rt.block_sizes(n, roots)
    parts = [special_linear(s) for s in sizes for _ in range(d_k) if s >= 2]
    parts.append(abelian((len(sizes) - 1) * (d_k + 1)))
    return direct_sum(*parts)


def ce_cohomology_dims(alg: LieAlgebra, max_degree: int | None = None,
                       weight_zero_only: bool | None = None) -> list[int]:
    """Cohomology dimensions of the trivial module, degrees 0..max_degree.

    weight_zero_only restricts the exterior complex to total weight zero;
    legitimate whenever the weights come from an inner torus action (all
    cohomology then lives in weight zero).  Defaults to on for algebras too
    large to materialize fully.
    """
    top = alg.dim if max_degree is None else min(max_degree, alg.dim)
    if weight_zero_only is None:
        weight_zero_only = alg.dim > 14 and alg.weights is not None
    if weight_zero_only and alg.weights is None:
        raise ValueError("weight-zero reduction needs a weight basis")

    def keep(mono: tuple[int, ...]) -> bool:
        if not weight_zero_only:
            return True
        assert alg.weights is not None
        width = len(alg.weights[0]) if alg.weights else 0
        tot = [0] * width
        for i in mono:
            for a, x in enumerate(alg.weights[i]):
                tot[a] += x
        return not any(tot)

    bases: list[dict[tuple[int, ...], int]] = []
    for k in range(alg.dim + 1):
        table = {m: p for p, m in enumerate(
            m for m in itertools.combinations(range(alg.dim), k) if keep(m))}
        bases.append(table)

    def boundary(mono: tuple[int, ...]) -> Vec:
        # chain boundary: sum over index pairs, bracket wedged into the rest
        out: Vec = {}
        target = bases[len(mono) - 1] if len(mono) >= 1 else {}
        for a in range(len(mono)):
            for b in range(a + 1, len(mono)):
                rest = mono[:a] + mono[a + 1:b] + mono[b + 1:]
                sign = -1 if (a + b) % 2 else 1
                for idx, c in alg.bracket(mono[a], mono[b]).items():
                    if idx in rest:
                        continue
                    merged = tuple(sorted(rest + (idx,)))
                    par = sort_parity_insert(rest, idx)
                    pos = target.get(merged)
                    if pos is None:
                        continue  # outside the weight-zero slice: coefficient must vanish
                    new = out.get(pos, Fraction(0)) + c * sign * par
                    if new:
                        out[pos] = new
                    else:
                        out.pop(pos, None)
        return out

    ranks = [0] * (alg.dim + 2)
    for k in range(1, alg.dim + 1):
        span = VectorSpan()
        for mono in bases[k]:
            span.add(boundary(mono))
        ranks[k] = span.rank
    dims = []
    for k in range(top + 1):
        dims.append(len(bases[k]) - ranks[k] - ranks[k + 1])
    return dims


def sort_parity_insert(sorted_rest: tuple[int, ...], idx: int) -> int:
    """Parity of inserting idx into an ascending tuple at its sorted position."""
    below = sum(1 for r in sorted_rest if r < idx)
    return -1 if below % 2 else 1
