"""Operator specifications and their finite compressions.

A spec describes a bounded operator on ``C^n`` or on the semi-infinite space
with basis ``e_0, e_1, ...``.  Semi-infinite specs are rule based: any
``rows x cols`` corner ``P_rows A P_cols`` is generated on demand by
:func:`compress`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BadParameter, DimensionMismatch
from .regions import Circle, Disk, Empty, GeometricHull, PlaneSet, Points, Union, eigenvalue_set
from .scalars import GaussRat, as_exact, is_exact, parse_scalar, scalar_to_json, to_complex_array

__all__ = [
    "Truncation", "OperatorSpec", "DenseMatrix", "UnilateralShift", "DiagonalPowers",
    "WeightedShift", "Zero", "Identity", "Scaled", "Combination", "compress",
    "spec_from_json", "spec_to_json",
]


@dataclass(frozen=True)
class Truncation:
    rows: int
    cols: int

    def __post_init__(self):
        if not (isinstance(self.rows, int) and isinstance(self.cols, int)):
            raise TypeError("truncation sizes must be ints")
        if not self.rows >= self.cols >= 1:
            raise BadParameter(f"truncation needs rows >= cols >= 1, got {self.rows}x{self.cols}")

    @classmethod
    def square(cls, n):
        return cls(n, n)

    @classmethod
    def tall(cls, n):
        """The ``(n+1) x n`` corner used for semi-infinite pairs."""
        return cls(n + 1, n)


def _zeros(rows, cols, exact):
    if exact:
        out = np.empty((rows, cols), dtype=object)
        out.fill(GaussRat(0))
        return out
    return np.zeros((rows, cols), dtype=complex)


def _conv(x, exact):
    return as_exact(x) if exact else complex(x)


class OperatorSpec:
    """Base class.  ``dim`` is ``None`` for semi-infinite operators."""

    dim: Optional[int] = None

    @property
    def semi_infinite(self) -> bool:
        return self.dim is None

    @property
    def exact(self) -> bool:
        """True when every entry is a Gaussian rational."""
        return True

    # banded structure: entry (i, j) vanishes unless j - upper <= i <= j + lower
    lower_bandwidth: Optional[int] = 0

    def block(self, rows: int, cols: int, exact: bool) -> np.ndarray:
        raise NotImplementedError

    def entry(self, i: int, j: int, exact: bool = False):
        return self.block(i + 1, j + 1, exact)[i, j]

    def compact(self) -> Optional[bool]:
        return True if self.dim is not None else None

    def invertible(self) -> Optional[bool]:
        return None

    def spectrum(self) -> Optional[PlaneSet]:
        return None

    def essential_spectrum(self) -> Optional[PlaneSet]:
        if self.dim is not None:
            return Empty()
        return None

    def norm_bound(self) -> float:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # arithmetic sugar; keeps rule-based specs rule based
    def __mul__(self, factor):
        return Scaled(self, factor)

    __rmul__ = __mul__

    def __neg__(self):
        return Scaled(self, -1)

    def __add__(self, other):
        return Combination(((1, self), (1, other)))

    def __sub__(self, other):
        return Combination(((1, self), (-1, other)))


def _dense_spectrum(op, exact_ok=True):
    return eigenvalue_set(to_complex_array(op.block(op.dim, op.dim, False)))


@dataclass(frozen=True)
class DenseMatrix(OperatorSpec):
    entries: tuple = field(repr=False)

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("dense matrix rows must be non-empty and equal length")
        if len(rows) != len(rows[0]):
            raise DimensionMismatch("operators act on one space; dense matrix must be square")
        for r in rows:
            for v in r:
                if not is_exact(v):
                    z = complex(v)
                    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
                        raise BadParameter("dense matrix entries must be finite")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a)
        return cls(tuple(tuple(row) for row in a.tolist()))

    @property
    def dim(self):
        return len(self.entries)

    @property
    def exact(self):
        return all(is_exact(v) for r in self.entries for v in r)

    @property
    def lower_bandwidth(self):
        return self.dim

    def block(self, rows, cols, exact):
        if exact and not self.exact:
            raise TypeError("dense matrix has floating entries; exact block unavailable")
        out = _zeros(rows, cols, exact)
        for i in range(min(rows, self.dim)):
            for j in range(min(cols, self.dim)):
                out[i, j] = _conv(self.entries[i][j], exact)
        return out

    def invertible(self):
        if self.exact:
            from .exact import ExactMatrix, exact_rank
            return exact_rank(ExactMatrix.from_rows(self.entries)) == self.dim
        a = to_complex_array(self.block(self.dim, self.dim, False))
        s = np.linalg.svd(a, compute_uv=False)
        return bool(s[-1] > 1e-12 * max(s[0], 1.0))

    def spectrum(self):
        return _dense_spectrum(self)

    def norm_bound(self):
        a = to_complex_array(self.block(self.dim, self.dim, False))
        return float(np.linalg.norm(a, 2))

    def to_json(self):
        return {"kind": "dense",
                "params": {"entries": [[scalar_to_json(v) for v in r] for r in self.entries]}}


@dataclass(frozen=True)
class UnilateralShift(OperatorSpec):
    """``T e_n = e_{n+1}``; with finite ``dim`` the last basis vector maps to 0."""

    dim: Optional[int] = None
    lower_bandwidth = 1

    def block(self, rows, cols, exact):
        out = _zeros(rows, cols, exact)
        one = GaussRat(1) if exact else 1.0
        limit = cols if self.dim is None else min(cols, self.dim - 1)
        for j in range(limit):
            if j + 1 < rows:
                out[j + 1, j] = one
        return out

    def compact(self):
        return self.dim is not None

    def invertible(self):
        return False

    def spectrum(self):
        return Disk(0j, 1.0) if self.dim is None else Points((0j,))

    def essential_spectrum(self):
        return Circle(0j, 1.0) if self.dim is None else Empty()

    def norm_bound(self):
        return 1.0

    def to_json(self):
        return {"kind": "shift", "params": {"dim": self.dim}}


@dataclass(frozen=True)
class DiagonalPowers(OperatorSpec):
    """``S e_n = base**n e_n``."""

    base: object = 0.5
    dim: Optional[int] = None

    def __post_init__(self):
        if self.base == 0:
            raise BadParameter("DiagonalPowers base must be nonzero")
        if self.dim is None and abs(complex(self.base)) > 1:
            raise BadParameter("semi-infinite DiagonalPowers with |base| > 1 is unbounded")

    @property
    def exact(self):
        return is_exact(self.base)

    def block(self, rows, cols, exact):
        out = _zeros(rows, cols, exact)
        b = _conv(self.base, exact)
        n = min(rows, cols) if self.dim is None else min(rows, cols, self.dim)
        if exact:
            v = GaussRat(1)
            for k in range(n):
                out[k, k] = v
                v = v * b
        else:
            idx = np.arange(n)
            out[idx, idx] = b ** idx
        return out

    def compact(self):
        if self.dim is not None:
            return True
        return abs(complex(self.base)) < 1

    def invertible(self):
        if self.dim is not None:
            return True
        return abs(complex(self.base)) >= 1

    def spectrum(self):
        b = complex(self.base)
        if self.dim is not None:
            return Points(tuple(b ** k for k in range(self.dim)))
        if abs(b) < 1:
            return GeometricHull(b)
        return None

    def essential_spectrum(self):
        if self.dim is not None:
            return Empty()
        if abs(complex(self.base)) < 1:
            return Points((0j,))
        return None

    def norm_bound(self):
        if self.dim is None:
            return 1.0
        return max(abs(complex(self.base)) ** k for k in range(self.dim))

    def to_json(self):
        return {"kind": "diagonal_powers",
                "params": {"base": scalar_to_json(self.base), "dim": self.dim}}


@dataclass(frozen=True)
class WeightedShift(OperatorSpec):
    """``T e_n = w_n e_{n+1}`` with ``w_n = weights[n]`` and ``w_n = tail`` afterwards."""

    weights: tuple = ()
    tail: object = 1
    dim: Optional[int] = None
    lower_bandwidth = 1

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))

    @property
    def exact(self):
        return all(is_exact(w) for w in self.weights) and is_exact(self.tail)

    def weight(self, n):
        return self.weights[n] if n < len(self.weights) else self.tail

    def block(self, rows, cols, exact):
        out = _zeros(rows, cols, exact)
        limit = cols if self.dim is None else min(cols, self.dim - 1)
        for j in range(limit):
            if j + 1 < rows:
                out[j + 1, j] = _conv(self.weight(j), exact)
        return out

    def compact(self):
        return self.dim is not None or self.tail == 0

    def invertible(self):
        return False

    def spectrum(self):
        if self.dim is not None:
            return Points((0j,))
        return Disk(0j, abs(complex(self.tail)))

    def essential_spectrum(self):
        if self.dim is not None:
            return Empty()
        r = abs(complex(self.tail))
        return Points((0j,)) if r == 0 else Circle(0j, r)

    def norm_bound(self):
        return max([abs(complex(w)) for w in self.weights] + [abs(complex(self.tail))])

    def to_json(self):
        return {"kind": "weighted_shift",
                "params": {"weights": [scalar_to_json(w) for w in self.weights],
                           "tail": scalar_to_json(self.tail), "dim": self.dim}}


@dataclass(frozen=True)
class Zero(OperatorSpec):
    dim: Optional[int] = None

    def block(self, rows, cols, exact):
        return _zeros(rows, cols, exact)

    def compact(self):
        return True

    def invertible(self):
        return False

    def spectrum(self):
        return Points((0j,))

    def essential_spectrum(self):
        return Empty() if self.dim is not None else Points((0j,))

    def norm_bound(self):
        return 0.0

    def to_json(self):
        return {"kind": "zero", "params": {"dim": self.dim}}


@dataclass(frozen=True)
class Identity(OperatorSpec):
    dim: Optional[int] = None

    def block(self, rows, cols, exact):
        out = _zeros(rows, cols, exact)
        one = GaussRat(1) if exact else 1.0
        n = min(rows, cols) if self.dim is None else min(rows, cols, self.dim)
        for k in range(n):
            out[k, k] = one
        return out

    def compact(self):
        return self.dim is not None

    def invertible(self):
        return True

    def spectrum(self):
        return Points((1 + 0j,))

    def essential_spectrum(self):
        return Empty() if self.dim is not None else Points((1 + 0j,))

    def norm_bound(self):
        return 1.0

    def to_json(self):
        return {"kind": "identity", "params": {"dim": self.dim}}


@dataclass(frozen=True)
class Scaled(OperatorSpec):
    inner: OperatorSpec = None
    factor: object = 1

    @property
    def dim(self):
        return self.inner.dim

    @property
    def exact(self):
        return self.inner.exact and is_exact(self.factor)

    @property
    def lower_bandwidth(self):
        return self.inner.lower_bandwidth

    def block(self, rows, cols, exact):
        return _conv(self.factor, exact) * self.inner.block(rows, cols, exact)

    def compact(self):
        return True if self.factor == 0 else self.inner.compact()

    def invertible(self):
        return False if self.factor == 0 else self.inner.invertible()

    def spectrum(self):
        s = self.inner.spectrum()
        return None if s is None else s.scaled(complex(self.factor))

    def essential_spectrum(self):
        s = self.inner.essential_spectrum()
        return None if s is None else s.scaled(complex(self.factor))

    def norm_bound(self):
        return abs(complex(self.factor)) * self.inner.norm_bound()

    def to_json(self):
        return {"kind": "scaled",
                "params": {"inner": self.inner.to_json(), "factor": scalar_to_json(self.factor)}}


@dataclass(frozen=True)
class Combination(OperatorSpec):
    """Finite linear combination ``sum c_k A_k``."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple((c, op) for c, op in self.terms)
        if not terms:
            raise BadParameter("empty combination")
        dims = {op.dim for _, op in terms if op.dim is not None}
        if len(dims) > 1:
            raise DimensionMismatch(f"combined operators have different dimensions {sorted(dims)}")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self):
        dims = [op.dim for _, op in self.terms if op.dim is not None]
        return dims[0] if dims else None

    @property
    def exact(self):
        return all(is_exact(c) and op.exact for c, op in self.terms)

    @property
    def lower_bandwidth(self):
        bws = [op.lower_bandwidth for _, op in self.terms]
        return None if None in bws else max(bws)

    def block(self, rows, cols, exact):
        out = _zeros(rows, cols, exact)
        for c, op in self.terms:
            out = out + _conv(c, exact) * op.block(rows, cols, exact)
        return out

    def compact(self):
        flags = [op.compact() for c, op in self.terms if c != 0]
        if all(f is True for f in flags):
            return True
        return None

    def norm_bound(self):
        return sum(abs(complex(c)) * op.norm_bound() for c, op in self.terms)

    def to_json(self):
        return {"kind": "combination",
                "params": {"terms": [[scalar_to_json(c), op.to_json()] for c, op in self.terms]}}


def compress(op: OperatorSpec, trunc: Truncation, exact: bool = False) -> np.ndarray:
    """Return the ``rows x cols`` corner ``P_rows op P_cols``.

    A complex ndarray, or an object ndarray of :class:`GaussRat` when
    ``exact`` is set.

    Raises
    ------
    DimensionMismatch
        If ``op`` is finite and smaller than the requested corner.
    """
    if op.dim is not None and (trunc.rows > op.dim or trunc.cols > op.dim):
        raise DimensionMismatch(
            f"{trunc.rows}x{trunc.cols} corner requested from a {op.dim}-dimensional operator")
    if exact and not op.exact:
        raise TypeError(f"{type(op).__name__} has floating data; exact compression unavailable")
    return op.block(trunc.rows, trunc.cols, exact)


def _dim(params):
    d = params.get("dim")
    return None if d is None else int(d)


def spec_from_json(doc: dict) -> OperatorSpec:
    kind, params = doc["kind"], doc.get("params", {})
    if kind == "dense":
        return DenseMatrix(tuple(tuple(parse_scalar(v) for v in row) for row in params["entries"]))
    if kind == "shift":
        return UnilateralShift(_dim(params))
    if kind == "diagonal_powers":
        return DiagonalPowers(parse_scalar(params["base"]), _dim(params))
    if kind == "weighted_shift":
        return WeightedShift(tuple(parse_scalar(w) for w in params.get("weights", [])),
                             parse_scalar(params.get("tail", 1)), _dim(params))
    if kind == "zero":
        return Zero(_dim(params))
    if kind == "identity":
        return Identity(_dim(params))
    if kind == "scaled":
        return Scaled(spec_from_json(params["inner"]), parse_scalar(params["factor"]))
    if kind == "combination":
        return Combination(tuple((parse_scalar(c), spec_from_json(s)) for c, s in params["terms"]))
    raise ValueError(f"unknown operator kind {kind!r}")


def spec_to_json(op: OperatorSpec) -> dict:
    return op.to_json()
