"""Planar point sets used as spectrum approximations.

Every set answers ``distance(z)``; membership up to a dilation ``delta`` is
``distance(z) <= delta``.  Discrete sets also expose ``points()`` so that
inclusion checks can enumerate them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


class PlaneSet:
    def distance(self, z: complex) -> float:
        raise NotImplementedError

    def contains(self, z: complex, delta: float = 0.0) -> bool:
        return self.distance(z) <= delta

    def scaled(self, c: complex) -> "PlaneSet":
        raise NotImplementedError

    def points(self) -> Optional[list]:
        """Finite sample of the set, or None for continua."""
        return None

    def __or__(self, other):
        return Union((self, other))


@dataclass(frozen=True)
class Empty(PlaneSet):
    def distance(self, z):
        return float("inf")

    def scaled(self, c):
        return self

    def points(self):
        return []


@dataclass(frozen=True)
class Disk(PlaneSet):
    center: complex
    radius: float

    def distance(self, z):
        return max(0.0, abs(complex(z) - self.center) - self.radius)

    def scaled(self, c):
        return Disk(complex(c) * self.center, abs(c) * self.radius)


@dataclass(frozen=True)
class Circle(PlaneSet):
    center: complex
    radius: float

    def distance(self, z):
        return abs(abs(complex(z) - self.center) - self.radius)

    def scaled(self, c):
        return Circle(complex(c) * self.center, abs(c) * self.radius)


@dataclass(frozen=True)
class Points(PlaneSet):
    values: tuple

    def distance(self, z):
        if not self.values:
            return float("inf")
        z = complex(z)
        return min(abs(z - complex(v)) for v in self.values)

    def scaled(self, c):
        return Points(tuple(complex(c) * complex(v) for v in self.values))

    def points(self):
        return [complex(v) for v in self.values]


@dataclass(frozen=True)
class GeometricHull(PlaneSet):
    """``{scale * base**n : n >= 0} ∪ {0}`` for ``|base| < 1``."""

    base: complex
    scale: complex = 1.0
    sample_size: int = 13

    def _terms(self, limit):
        b, s = complex(self.base), complex(self.scale)
        out, v = [0j], s
        for _ in range(limit):
            out.append(v)
            v *= b
            if abs(v) < 1e-300:
                break
        return out

    def distance(self, z):
        z = complex(z)
        # Terms below |z|/2 are farther than the origin is.
        best = abs(z)
        b, v = complex(self.base), complex(self.scale)
        while abs(v) > 0.25 * abs(z) and abs(v) > 1e-300:
            best = min(best, abs(z - v))
            v *= b
        return best

    def scaled(self, c):
        return GeometricHull(self.base, complex(c) * complex(self.scale), self.sample_size)

    def points(self):
        return self._terms(self.sample_size)


@dataclass(frozen=True)
class Union(PlaneSet):
    parts: tuple

    def distance(self, z):
        return min((p.distance(z) for p in self.parts), default=float("inf"))

    def scaled(self, c):
        return Union(tuple(p.scaled(c) for p in self.parts))

    def points(self):
        out = []
        for p in self.parts:
            pts = p.points()
            if pts is None:
                return None
            out.extend(pts)
        return out


def eigenvalue_set(matrix) -> Points:
    return Points(tuple(complex(v) for v in np.linalg.eigvals(np.asarray(matrix, dtype=complex))))
