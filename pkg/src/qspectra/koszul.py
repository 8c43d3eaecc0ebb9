"""Parametrized Koszul complexes of a q-commuting pair.

For a point ``gamma`` of the character cross (``gamma(x) gamma(y) = 0``) the
complex ``X -> X ⊕ X -> X`` has differentials

    d0 = [gamma(y) - qS ; T - q gamma(x)],    d1 = [T - gamma(x), S - gamma(y)].

``L_lambda`` and ``R_mu`` are the left and right complexes
``l0 = [S ; lambda - T/q]``, ``l1 = [lambda - T, -S]`` and
``r0 = [T ; mu - qS]``, ``r1 = [mu - S, -T]``.

Truncation policy: for ``Truncation(rows, cols)`` the graded spaces are
``C^cols -> C^rows ⊕ C^rows -> C^rows``.  Blocks of ``d0`` are ``rows x cols``
corners, blocks of ``d1`` are ``rows x rows`` corners.  When ``rows`` exceeds
``cols`` by at least the lower bandwidth of the blocks (1 for shifts) the
finite complex satisfies ``d1 d0 = 0`` exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadParameter, DimensionMismatch
from .operators import Identity, OperatorSpec, Truncation, compress
from .pair import QPair
from .scalars import GaussRat, as_exact, is_exact, parse_scalar, scalar_to_json, to_complex_array

__all__ = ["CharacterPoint", "KoszulComplex", "ChainMap", "build_K", "build_L", "build_R",
           "chain_maps", "chain_isomorphism_residual", "complex_to_json", "complex_from_json"]


@dataclass(frozen=True)
class CharacterPoint:
    """A point of the cross ``C_x ∪ C_y``: ``(value, 0)`` on X, ``(0, value)`` on Y."""

    axis: str
    value: object

    def __post_init__(self):
        if self.axis not in ("X", "Y"):
            raise BadParameter(f"axis must be 'X' or 'Y', got {self.axis!r}")

    @property
    def gx(self):
        return self.value if self.axis == "X" else 0

    @property
    def gy(self):
        return self.value if self.axis == "Y" else 0

    @property
    def exact(self) -> bool:
        return is_exact(self.value)

    def __str__(self):
        z = complex(self.value)
        return f"{self.axis}:{z.real:+.6g}{z.imag:+.6g}i"

    def to_json(self):
        return {"axis": self.axis, "value": scalar_to_json(self.value)}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["axis"], parse_scalar(doc["value"]))


@dataclass(frozen=True)
class KoszulComplex:
    d0: np.ndarray
    d1: np.ndarray
    variant: str
    point: object
    trunc: Truncation
    exact: bool = False
    rule_based: bool = False

    @property
    def dims(self):
        return self.d0.shape[1], self.d0.shape[0], self.d1.shape[0]

    def composition(self) -> np.ndarray:
        return self.d1 @ self.d0

    def composition_residual(self) -> float:
        c = self.composition()
        if self.exact:
            return float(sum((v.abs2() for v in c.flat), GaussRat(0).re)) ** 0.5
        return float(np.linalg.norm(c))

    def numeric(self) -> "KoszulComplex":
        if not self.exact:
            return self
        return KoszulComplex(to_complex_array(self.d0), to_complex_array(self.d1), self.variant,
                             self.point, self.trunc, False, self.rule_based)


def _resolve_exact(pair, scalar, exact):
    can = pair.exact and is_exact(scalar)
    if exact is None:
        return can
    if exact and not can:
        raise TypeError("exact complex requested for floating data")
    return exact


def _scal(x, exact):
    return as_exact(x) if exact else complex(x)


def _blocks(pair, trunc, exact):
    if pair.dim is not None and (trunc.rows > pair.dim or trunc.cols > pair.dim):
        raise DimensionMismatch(f"truncation {trunc.rows}x{trunc.cols} exceeds dimension {pair.dim}")
    lo, sq = trunc, Truncation.square(trunc.rows)
    eye = Identity(pair.dim)
    return {
        "T0": compress(pair.T, lo, exact), "S0": compress(pair.S, lo, exact),
        "I0": compress(eye, lo, exact),
        "T1": compress(pair.T, sq, exact), "S1": compress(pair.S, sq, exact),
        "I1": compress(eye, sq, exact),
    }


def _trunc(pair, trunc):
    return pair.default_truncation() if trunc is None else trunc


def build_K(pair: QPair, gamma: CharacterPoint, trunc: Optional[Truncation] = None,
            exact: Optional[bool] = None) -> KoszulComplex:
    trunc = _trunc(pair, trunc)
    exact = _resolve_exact(pair, gamma.value, exact)
    b = _blocks(pair, trunc, exact)
    q, gx, gy = _scal(pair.q, exact), _scal(gamma.gx, exact), _scal(gamma.gy, exact)
    d0 = np.vstack([gy * b["I0"] - q * b["S0"], b["T0"] - (q * gx) * b["I0"]])
    d1 = np.hstack([b["T1"] - gx * b["I1"], b["S1"] - gy * b["I1"]])
    return KoszulComplex(d0, d1, "K", gamma, trunc, exact, pair.semi_infinite)


def build_L(pair: QPair, lam, trunc: Optional[Truncation] = None,
            exact: Optional[bool] = None) -> KoszulComplex:
    trunc = _trunc(pair, trunc)
    exact = _resolve_exact(pair, lam, exact)
    b = _blocks(pair, trunc, exact)
    q, lam_ = _scal(pair.q, exact), _scal(lam, exact)
    qinv = (GaussRat(1) / q) if exact else 1 / q
    d0 = np.vstack([b["S0"], lam_ * b["I0"] - qinv * b["T0"]])
    d1 = np.hstack([lam_ * b["I1"] - b["T1"], -b["S1"]])
    return KoszulComplex(d0, d1, "L", lam, trunc, exact, pair.semi_infinite)


def build_R(pair: QPair, mu, trunc: Optional[Truncation] = None,
            exact: Optional[bool] = None) -> KoszulComplex:
    trunc = _trunc(pair, trunc)
    exact = _resolve_exact(pair, mu, exact)
    b = _blocks(pair, trunc, exact)
    q, mu_ = _scal(pair.q, exact), _scal(mu, exact)
    d0 = np.vstack([b["T0"], mu_ * b["I0"] - q * b["S0"]])
    d1 = np.hstack([mu_ * b["I1"] - b["S1"], -b["T1"]])
    return KoszulComplex(d0, d1, "R", mu, trunc, exact, pair.semi_infinite)


@dataclass(frozen=True)
class ChainMap:
    """Vertical maps ``V0, V1, V2`` from ``K`` to ``L`` (axis X) or ``R`` (axis Y).

    Axis X uses ``(q, -(1 ⊕ 1), 1)``; axis Y uses ``(1, swap, -1)``.  These
    satisfy ``V1 d0_K = d0' V0`` and ``V2 d1_K = d1' V1``; on axis X this is the
    entrywise identity ``d0_K = -q l0``, ``d1_K = -l1``.
    """

    axis: str
    v0: object
    v1: str
    v2: object


def chain_maps(pair: QPair, axis: str, exact: bool = False) -> ChainMap:
    one = GaussRat(1) if exact else 1.0
    if axis == "X":
        return ChainMap("X", _scal(pair.q, exact), "negate", one)
    return ChainMap("Y", one, "swap", -one)


def _apply_v1(kind, m, n):
    top, bottom = m[:n], m[n:]
    if kind == "negate":
        return -m
    return np.vstack([bottom, top])


def _apply_v1_right(kind, m, n):
    # m @ V1 for a row block matrix [A, B]
    left, right = m[:, :n], m[:, n:]
    if kind == "negate":
        return -m
    return np.hstack([right, left])


def _norm(a, exact):
    if exact:
        return float(sum((v.abs2() for v in a.flat), GaussRat(0).re)) ** 0.5
    return float(np.linalg.norm(a))


def chain_isomorphism_residual(pair: QPair, gamma: CharacterPoint,
                               trunc: Optional[Truncation] = None,
                               exact: Optional[bool] = None) -> float:
    """Largest commuting-square defect between ``K`` and ``L``/``R`` at ``gamma``."""
    K = build_K(pair, gamma, trunc, exact)
    other = (build_L if gamma.axis == "X" else build_R)(pair, gamma.value, trunc, K.exact)
    maps = chain_maps(pair, gamma.axis, K.exact)
    n1 = K.trunc.rows
    sq0 = _apply_v1(maps.v1, K.d0, n1) - other.d0 * maps.v0
    sq1 = maps.v2 * K.d1 - _apply_v1_right(maps.v1, other.d1, n1)
    return max(_norm(sq0, K.exact), _norm(sq1, K.exact))


def _matrix_to_json(a):
    return [[scalar_to_json(v) for v in row] for row in a.tolist()]


def _matrix_from_json(rows, exact):
    vals = [[parse_scalar(v, exact=exact) for v in row] for row in rows]
    return np.array(vals, dtype=object if exact else complex)


def complex_to_json(cx: KoszulComplex) -> dict:
    point = cx.point.to_json() if isinstance(cx.point, CharacterPoint) else scalar_to_json(cx.point)
    return {"schema": 1, "variant": cx.variant, "point": point, "exact": cx.exact,
            "trunc": [cx.trunc.rows, cx.trunc.cols], "rule_based": cx.rule_based,
            "d0": _matrix_to_json(cx.d0), "d1": _matrix_to_json(cx.d1)}


def complex_from_json(doc: dict) -> KoszulComplex:
    exact = bool(doc.get("exact", False))
    point = doc["point"]
    point = CharacterPoint.from_json(point) if isinstance(point, dict) else parse_scalar(point)
    d0 = _matrix_from_json(doc["d0"], exact)
    d1 = _matrix_from_json(doc["d1"], exact)
    rows, cols = doc.get("trunc", [d0.shape[0] // 2, d0.shape[1]])
    return KoszulComplex(d0, d1, doc["variant"], point, Truncation(rows, cols), exact,
                         bool(doc.get("rule_based", False)))
