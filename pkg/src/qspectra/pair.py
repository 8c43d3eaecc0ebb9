"""Validated q-commuting pairs ``TS = q^-1 ST``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadParameter, DimensionMismatch, QRelationViolated
from .operators import OperatorSpec, Truncation, compress, spec_from_json, spec_to_json
from .scalars import GaussRat, as_exact, is_exact, parse_scalar, scalar_to_json, to_complex_array

__all__ = ["PairFlags", "QPair", "make_q_pair", "commutation_residual",
           "DeterminantVerdict", "finite_dim_invertibility_consequence",
           "pair_from_json", "pair_to_json"]

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class PairFlags:
    S_compact: Optional[bool]
    T_compact: Optional[bool]
    T_invertible: Optional[bool]
    S_invertible: Optional[bool]


@dataclass(frozen=True)
class QPair:
    T: OperatorSpec
    S: OperatorSpec
    q: object
    commutation_residual: float
    flags: PairFlags
    validation_dim: int = 2
    tol: float = DEFAULT_TOL

    @property
    def dim(self) -> Optional[int]:
        """Common finite dimension, or None for a semi-infinite pair."""
        return self.T.dim if self.T.dim is not None else self.S.dim

    @property
    def semi_infinite(self) -> bool:
        return self.dim is None

    @property
    def exact(self) -> bool:
        return self.T.exact and self.S.exact and is_exact(self.q)

    def default_truncation(self, n: Optional[int] = None) -> Truncation:
        if self.dim is not None:
            return Truncation.square(self.dim if n is None else n)
        return Truncation.tall(self.validation_dim if n is None else n)


def _check_q(q):
    if q == 0 or q == 1:
        raise BadParameter(f"q must differ from 0 and 1, got {q}")


def _common_dim(T, S):
    if T.dim is not None and S.dim is not None and T.dim != S.dim:
        raise DimensionMismatch(f"T acts on C^{T.dim} but S acts on C^{S.dim}")
    return T.dim if T.dim is not None else S.dim


def commutation_residual(T, S, q, m, exact=False):
    """Frobenius norm of ``TS - q^-1 ST`` on an ``m``-column window.

    Finite pairs use the full matrices.  For semi-infinite (lower banded)
    specs the rows are extended by the bandwidths so the window is the exact
    corner of the product.
    """
    n = _common_dim(T, S)
    if n is not None:
        rows, mid, cols = n, n, n
    else:
        bt, bs = T.lower_bandwidth, S.lower_bandwidth
        if bt is None or bs is None:
            raise DimensionMismatch("semi-infinite validation needs banded specs")
        cols, mid = m, m + max(bt, bs)
        rows = mid + max(bt, bs)
    if exact:
        qinv = GaussRat(1) / as_exact(q)
    else:
        qinv = 1 / complex(q)
    T2 = compress(T, Truncation(rows, mid), exact)
    S2 = compress(S, Truncation(rows, mid), exact)
    T1 = compress(T, Truncation(mid, cols), exact)
    S1 = compress(S, Truncation(mid, cols), exact)
    diff = T2 @ S1 - qinv * (S2 @ T1)
    if exact:
        total = sum((v.abs2() for v in diff.flat), GaussRat(0).re)
        return float(total) ** 0.5
    return float(np.linalg.norm(diff))


def make_q_pair(T: OperatorSpec, S: OperatorSpec, q, validation_dim: int = 8,
                tol: float = DEFAULT_TOL) -> QPair:
    """Validate ``TS = q^-1 ST`` and record structural flags.

    The residual is the Frobenius norm on the validation window; it must not
    exceed ``tol * max(1, |T| |S|)``.

    Raises
    ------
    BadParameter
        ``q`` is 0 or 1, or ``validation_dim < 2``.
    QRelationViolated
        The residual exceeds the tolerance.
    """
    _check_q(q)
    if validation_dim < 2:
        raise BadParameter("validation_dim must be at least 2")
    _common_dim(T, S)
    exact = T.exact and S.exact and is_exact(q)
    residual = commutation_residual(T, S, q, validation_dim, exact=exact)
    scale = max(1.0, T.norm_bound() * S.norm_bound())
    if residual > tol * scale:
        raise QRelationViolated(residual, tol * scale)
    flags = PairFlags(S_compact=S.compact(), T_compact=T.compact(),
                      T_invertible=T.invertible(), S_invertible=S.invertible())
    return QPair(T, S, q, residual, flags, validation_dim, tol)


@dataclass(frozen=True)
class DeterminantVerdict:
    det_T: object
    det_S: object
    q_power: object
    identity_residual: float
    disjunct: str
    holds: bool


def _det(a, exact):
    if exact:
        from .exact import ExactMatrix, exact_determinant
        return exact_determinant(ExactMatrix(a))
    return complex(np.linalg.det(to_complex_array(a)))


def finite_dim_invertibility_consequence(pair: QPair, n: Optional[int] = None,
                                         tol: float = 1e-9) -> DeterminantVerdict:
    """Check ``det T det S (1 - q^-n) = 0`` for an ``n x n`` pair.

    Taking determinants of ``TS = q^-1 ST`` forces one of ``det T = 0``,
    ``det S = 0`` or ``q^n = 1``.  The verdict names the first disjunct that
    holds; exact pairs are decided exactly.
    """
    n = pair.dim if n is None else n
    if pair.dim is None or n != pair.dim:
        raise DimensionMismatch("determinant check needs a finite pair of the stated size")
    exact = pair.exact
    trunc = Truncation.square(n)
    dT = _det(compress(pair.T, trunc, exact), exact)
    dS = _det(compress(pair.S, trunc, exact), exact)
    if exact:
        qn = as_exact(pair.q) ** n
        ident = dT * dS * (GaussRat(1) - GaussRat(1) / qn)
        residual = abs(ident)
        zero = lambda v: v == 0  # noqa: E731
        unit = qn == 1
    else:
        qn = complex(pair.q) ** n
        residual = abs(dT * dS * (1 - 1 / qn))
        scale = max(1.0, pair.T.norm_bound() ** n * pair.S.norm_bound() ** n)
        zero = lambda v: abs(v) <= tol * scale  # noqa: E731
        unit = abs(qn - 1) <= tol
    if zero(dT):
        disjunct = "det T = 0"
    elif zero(dS):
        disjunct = "det S = 0"
    elif unit:
        disjunct = "q^n = 1"
    else:
        disjunct = "violated"
    return DeterminantVerdict(dT, dS, qn, float(residual), disjunct, disjunct != "violated")


def pair_to_json(pair: QPair) -> dict:
    return {"schema": 1, "T": spec_to_json(pair.T), "S": spec_to_json(pair.S),
            "q": scalar_to_json(pair.q), "validation_dim": pair.validation_dim, "tol": pair.tol}


def pair_from_json(doc: dict) -> QPair:
    if doc.get("schema", 1) != 1:
        raise ValueError(f"unsupported pair schema {doc.get('schema')!r}")
    T, S = spec_from_json(doc["T"]), spec_from_json(doc["S"])
    q = parse_scalar(doc["q"])
    return make_q_pair(T, S, q, int(doc.get("validation_dim", 8)), float(doc.get("tol", DEFAULT_TOL)))
