"""Scalars: complex floats and exact Gaussian rationals.

Floating scalars are plain Python ``complex``.  Exact scalars are
:class:`GaussRat`, a Gaussian rational ``re + i*im`` with ``Fraction`` parts.
Both support ``+ - * /`` with each other and with ints, so numpy object arrays
of :class:`GaussRat` can be multiplied with ``@``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number

import numpy as np

__all__ = ["GaussRat", "as_exact", "as_complex", "is_exact", "parse_scalar", "scalar_to_json"]


class GaussRat:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRat):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRat(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussRat(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussRat(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussRat(1) / (self ** (-n))
        result, base = GaussRat(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(self.abs2())

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussRat({self.re})"
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


def is_exact(x) -> bool:
    return isinstance(x, (GaussRat, int, Fraction)) and not isinstance(x, bool)


def as_exact(x) -> GaussRat:
    """Convert ints, Fractions, strings ``"p/q"`` or GaussRat to GaussRat."""
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return GaussRat(x)
    if isinstance(x, str):
        return GaussRat(Fraction(x))
    raise TypeError(f"cannot represent {x!r} exactly")


def as_complex(x) -> complex:
    return complex(x)


def to_complex_array(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        out = np.empty(a.shape, dtype=complex)
        for idx, v in np.ndenumerate(a):
            out[idx] = complex(v)
        return out
    return a.astype(complex)


def _parse_part(v):
    if isinstance(v, str):
        return Fraction(v), True
    if isinstance(v, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(v, int):
        return v, False
    return float(v), False


def parse_scalar(obj, exact=None):
    """Decode a JSON scalar.

    Accepts a number or a ``[re, im]`` pair.  Strings such as ``"1/2"`` mark
    the value as exact.  ``exact=True`` forces an exact result (floats are
    rejected), ``exact=False`` forces ``complex``.
    """
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError(f"scalar pair must have length 2, got {obj!r}")
        (re, re_exact), (im, im_exact) = _parse_part(obj[0]), _parse_part(obj[1])
        marked = re_exact or im_exact
    else:
        (re, marked), im = _parse_part(obj), 0
    want_exact = marked if exact is None else exact
    if want_exact:
        if isinstance(re, float) or isinstance(im, float):
            raise ValueError(f"floating value {obj!r} cannot be read exactly")
        return GaussRat(re, im)
    z = complex(float(re), float(im))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite scalar {obj!r}")
    return z


def scalar_to_json(x):
    if isinstance(x, GaussRat):
        return [str(x.re), str(x.im)]
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return [str(Fraction(x)), "0"]
    z = complex(x)
    return [z.real, z.imag]


def is_number(x) -> bool:
    return isinstance(x, (Number, GaussRat)) and not isinstance(x, bool)
