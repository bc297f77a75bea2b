"""Exact sparse linear algebra over the rationals.

Everything downstream is sign-sensitive, so no floating point appears
anywhere: vectors are dicts index -> Fraction with no stored zeros, and
elimination uses exact pivoting with a deterministic rule (smallest
leading index first, ties broken by insertion order).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NotInSpanError

Vec = dict[int, Fraction]


def vec(entries: Mapping[int, object]) -> Vec:
    return {i: Fraction(c) for i, c in entries.items() if c}


def vec_add(a: Vec, b: Vec, scale: Fraction = Fraction(1)) -> Vec:
    out = dict(a)
    for i, c in b.items():
        new = out.get(i, Fraction(0)) + scale * c
        if new:
            out[i] = new
        else:
            out.pop(i, None)
    return out


def vec_scale(a: Vec, scale: Fraction) -> Vec:
    if not scale:
        return {}
    return {i: scale * c for i, c in a.items()}


def vec_dot(a: Vec, b: Vec) -> Fraction:
    if len(b) < len(a):
        a, b = b, a
    return sum((c * b[i] for i, c in a.items() if i in b), Fraction(0))


class SparseRationalMatrix:
    """Immutable sparse matrix with exact rational entries."""

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object]):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        for (r, c), x in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
            fx = Fraction(x)
            if fx:
                self.entries[(r, c)] = fx

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Vec]) -> "SparseRationalMatrix":
        entries = {}
        ncols = 0
        for c, col in enumerate(columns):
            ncols = c + 1
            for r, x in col.items():
                entries[(r, c)] = x
        return cls(rows, ncols, entries)

    def columns(self) -> list[Vec]:
        cols: list[Vec] = [dict() for _ in range(self.cols)]
        for (r, c), x in self.entries.items():
            cols[c][r] = x
        return cols

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for (r, c), x in self.entries.items():
            if c in v:
                new = out.get(r, Fraction(0)) + x * v[c]
                if new:
                    out[r] = new
                else:
                    out.pop(r, None)
        return out


class VectorSpan:
    """Incremental echelon basis of a span, with optional witness tracking.

    Each stored pivot vector is normalized to have leading (smallest-index)
    coefficient 1, and every later insertion is reduced against all stored
    pivots before being accepted.  Witnesses express stored pivots as
    combinations of the vectors originally passed to :meth:`add`.
    """

    def __init__(self, track_witness: bool = False):
        self.pivots: dict[int, tuple[Vec, Vec]] = {}
        self.track = track_witness
        self.count = 0  # number of add() calls, used to tag witnesses

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, v: Vec, w: Vec) -> tuple[Vec, Vec]:
        v = dict(v)
        while v:
            lead = min(v)
            hit = self.pivots.get(lead)
            if hit is None:
                break
            pvec, pwit = hit
            coeff = v[lead]
            v = vec_add(v, pvec, -coeff)
            if self.track:
                w = vec_add(w, pwit, -coeff)
        return v, w

    def reduce(self, v: Vec) -> tuple[Vec, Vec]:
        """Residual of v modulo the span, plus the witness of the reduced part.

        If the residual is empty, ``-witness`` gives coefficients expressing v
        in terms of the original generators (when witness tracking is on).
        """
        return self._reduce(v, {})

    def add(self, v: Vec) -> bool:
        """Insert a generator; returns True if it enlarged the span."""
        tag = self.count
        self.count += 1
        wit: Vec = {tag: Fraction(1)} if self.track else {}
        res, rwit = self._reduce(v, wit)
        if not res:
            return False
        lead = min(res)
        inv = 1 / res[lead]
        self.pivots[lead] = (vec_scale(res, inv), vec_scale(rwit, inv))
        return True

    def contains(self, v: Vec) -> bool:
        res, _ = self.reduce(v)
        return not res

    def coefficients(self, v: Vec) -> Vec | None:
        """Coefficients over the original generators, or None if v is outside."""
        if not self.track:
            raise ValueError("span was built without witness tracking")
        res, wit = self.reduce(v)
        if res:
            return None
        return vec_scale(wit, Fraction(-1))


def rank_kernel_image(m: SparseRationalMatrix) -> tuple[int, list[Vec], list[Vec]]:
    """Rank, a kernel basis, and an image basis (pivot columns of the input)."""
    span = VectorSpan(track_witness=True)
    kernel: list[Vec] = []
    image: list[Vec] = []
    for j, col in enumerate(m.columns()):
        if span.add(col):
            image.append(col)
        else:
            coeffs = span.coefficients(col)
            assert coeffs is not None
            ker = dict(coeffs)
            ker[j] = Fraction(-1)
            # normalize so the highest-index entry is 1
            ker = vec_scale(ker, Fraction(-1))
            kernel.append(ker)
    return span.rank, kernel, image


def rank_of(columns: Iterable[Vec]) -> int:
    span = VectorSpan()
    for col in columns:
        span.add(col)
    return span.rank


def membership(v: Vec, basis: Iterable[Vec]) -> tuple[bool, Vec | None]:
    """Is v in the span of basis?  On success also return witness coefficients."""
    span = VectorSpan(track_witness=True)
    for b in basis:
        span.add(b)
    coeffs = span.coefficients(v)
    return (coeffs is not None), coeffs


def quotient_coordinates(v: Vec, w_basis: list[Vec], b_basis: list[Vec]) -> list[Fraction]:
    """Coefficients of v modulo span(w_basis) in the complement basis b_basis.

    Requires b_basis independent modulo the span; raises NotInSpanError when
    v is not in span(w_basis + b_basis), which downstream signals a broken
    structural expectation rather than a recoverable condition.
    """
    span = VectorSpan(track_witness=True)
    for w in w_basis:
        span.add(w)
    nw = span.count
    for i, b in enumerate(b_basis):
        if not span.add(b):
            raise ValueError(f"complement vector {i} is dependent modulo the span")
    coeffs = span.coefficients(v)
    if coeffs is None:
        raise NotInSpanError("vector not in span of subspace plus complement",
                             ambient=len(w_basis) + len(b_basis))
    return [coeffs.get(nw + i, Fraction(0)) for i in range(len(b_basis))]
