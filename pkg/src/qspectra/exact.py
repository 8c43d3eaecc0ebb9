"""Exact linear algebra over the Gaussian rationals.

Ranks and determinants use fraction-free (Bareiss) elimination: each row is
first scaled to Gaussian-integer entries, after which every intermediate
entry is a minor of the scaled matrix and every division is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import CapExceeded, DimensionMismatch
from .koszul import CharacterPoint, KoszulComplex, build_K
from .operators import Identity, Truncation, compress
from .pair import QPair
from .scalars import GaussRat, as_exact

__all__ = ["ExactMatrix", "exact_rank", "exact_determinant", "exact_complex_ranks",
           "exact_cohomology", "ResolutionComplex", "tor_consistency", "DEFAULT_CAP"]

DEFAULT_CAP = 64


@dataclass(frozen=True)
class ExactMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=object)
        if a.ndim != 2:
            raise DimensionMismatch("ExactMatrix needs a 2-d array")
        out = np.empty(a.shape, dtype=object)
        for idx, v in np.ndenumerate(a):
            out[idx] = as_exact(v)
        object.__setattr__(self, "entries", out)

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        a = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                a[i, j] = v
        return cls(a)

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def __matmul__(self, other):
        return ExactMatrix(self.entries @ other.entries)

    def is_zero(self):
        return all(v == 0 for v in self.entries.flat)


def _integer_rows(m: ExactMatrix):
    """Scale each row to Gaussian integers; returns rows and the scale factors."""
    rows, scales = [], []
    for r in m.entries:
        den = 1
        for v in r:
            den = lcm(den, v.re.denominator, v.im.denominator)
        rows.append([v * den for v in r])
        scales.append(den)
    return rows, scales


def _bareiss(rows, ncols):
    """In-place fraction-free row echelon; returns (rank, pivot entries, swaps)."""
    nrows = len(rows)
    r, prev, swaps = 0, GaussRat(1), 0
    pivots = []
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            swaps += 1
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            lead = rows[i][c]
            row_i, row_r = rows[i], rows[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - lead * row_r[j]) / prev
            row_i[c] = GaussRat(0)
        pivots.append(piv)
        prev = piv
        r += 1
        if r == nrows:
            break
    return r, pivots, swaps


def exact_rank(m: ExactMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    rows, _ = _integer_rows(m)
    rank, _, _ = _bareiss(rows, m.cols)
    return rank


def exact_determinant(m: ExactMatrix) -> GaussRat:
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return GaussRat(1)
    rows, scales = _integer_rows(m)
    rank, pivots, swaps = _bareiss(rows, n)
    if rank < n:
        return GaussRat(0)
    det = pivots[-1]
    for s in scales:
        det = det / s
    return -det if swaps % 2 else det


def exact_complex_ranks(cx: KoszulComplex):
    """``(h0, h1, h2, rank0, rank1)`` of an exact complex."""
    if not cx.exact:
        raise TypeError("exact ranks need an exact complex")
    r0 = exact_rank(ExactMatrix(cx.d0))
    r1 = exact_rank(ExactMatrix(cx.d1))
    n0, n1, n2 = cx.dims
    return n0 - r0, n1 - r0 - r1, n2 - r1, r0, r1


def _check_cap(pair, cap):
    if pair.dim is None:
        raise CapExceeded("exact cohomology needs a finite pair")
    if pair.dim > cap:
        raise CapExceeded(f"dimension {pair.dim} exceeds exact cap {cap}")


def exact_cohomology(pair: QPair, gamma: CharacterPoint, cap: int = DEFAULT_CAP):
    """Exact ``(h0, h1, h2)`` of the Koszul complex at ``gamma``."""
    _check_cap(pair, cap)
    cx = build_K(pair, gamma, Truncation.square(pair.dim), exact=True)
    return exact_complex_ranks(cx)[:3]


# Term: (coefficient, left factor, module operator).  Left factors are the
# right multiplications R_x, R_y of the free module (or 1); module operators
# are T, S (or 1).  Multiplication by q is written as a coefficient.
_RESOLUTION_D0 = (
    (("1", "Ry", "1"), ("-q", "1", "S")),
    (("1", "1", "T"), ("-q", "Rx", "1")),
)
_RESOLUTION_D1 = (
    (("1", "1", "T"), ("-1", "Rx", "1")),
    (("1", "1", "S"), ("-1", "Ry", "1")),
)


@dataclass(frozen=True)
class ResolutionComplex:
    """Free-module resolution ``O ⊗ X -> (O ⊗ X)^2 -> O ⊗ X`` specialized at a character.

    Applying ``C(gamma) ⊗ -`` replaces ``R_x``, ``R_y`` by ``gamma(x)``,
    ``gamma(y)`` and leaves the module action on ``X``.
    """

    d0: ExactMatrix
    d1: ExactMatrix

    @classmethod
    def specialize(cls, pair: QPair, gamma: CharacterPoint, trunc: Truncation):
        q = as_exact(pair.q)
        character = {"1": GaussRat(1), "Rx": as_exact(gamma.gx), "Ry": as_exact(gamma.gy)}
        coeffs = {"1": GaussRat(1), "-1": GaussRat(-1), "-q": -q}

        def module(name, shape):
            op = {"T": pair.T, "S": pair.S, "1": Identity(pair.dim)}[name]
            return compress(op, shape, exact=True)

        def entry(terms, shape):
            total = None
            for coef, left, right in terms:
                term = (coeffs[coef] * character[left]) * module(right, shape)
                total = term if total is None else total + term
            return total

        lo, sq = trunc, Truncation.square(trunc.rows)
        d0 = np.vstack([entry(_RESOLUTION_D0[0], lo), entry(_RESOLUTION_D0[1], lo)])
        d1 = np.hstack([entry(_RESOLUTION_D1[0], sq), entry(_RESOLUTION_D1[1], sq)])
        return cls(ExactMatrix(d0), ExactMatrix(d1))

    def is_complex(self) -> bool:
        return (self.d1 @ self.d0).is_zero()


def tor_consistency(pair: QPair, gamma: CharacterPoint, trunc: Truncation = None,
                    cap: int = DEFAULT_CAP) -> bool:
    """True when the specialized resolution equals ``build_K`` entrywise and is a complex."""
    if trunc is None:
        _check_cap(pair, cap)
        trunc = Truncation.square(pair.dim)
    elif max(trunc.rows, trunc.cols) > cap:
        raise CapExceeded(f"truncation {trunc.rows}x{trunc.cols} exceeds exact cap {cap}")
    res = ResolutionComplex.specialize(pair, gamma, trunc)
    cx = build_K(pair, gamma, trunc, exact=True)
    same = (res.d0.entries.shape == cx.d0.shape and res.d1.entries.shape == cx.d1.shape
            and all(a == b for a, b in zip(res.d0.entries.flat, cx.d0.flat))
            and all(a == b for a, b in zip(res.d1.entries.flat, cx.d1.flat)))
    return bool(same and res.is_complex())
