"""Numerical cohomology of Koszul complexes and spectral classification.

Ranks come from singular values with a relative threshold.  For rule-based
(semi-infinite) pairs a finite section can carry cohomology that lives at the
truncation boundary and vanishes in the limit.  Each cohomology group is
therefore represented by harmonic vectors, and classes whose mass sits in the
trailing ``edge_fraction`` of the coordinates are counted as truncation
artifacts, not as spectral evidence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BadParameter, Inconclusive, NumericalBreakdown
from .koszul import CharacterPoint, KoszulComplex, build_K, build_L, build_R
from .operators import Truncation
from .pair import QPair

__all__ = ["ToleranceConfig", "CohomologyReport", "PointClassification", "cohomology_dims",
           "classify_point", "classify_complex_family", "left_spectrum_bound_check",
           "LeftBoundReport", "CSV_COLUMNS", "classification_row"]

CSV_COLUMNS = ("axis", "re", "im", "h0", "h1", "h2", "smin0", "smin1", "in_sigma", "in_sigma_e",
               "pi0", "pi1", "pi2", "delta0", "delta1", "delta2", "flags")


@dataclass(frozen=True)
class ToleranceConfig:
    rank_rel_tol: float = 1e-9
    closed_range_floor: float = 1e-6
    fredholm_dim_cap: int = 3
    truncation_schedule: tuple = (Truncation.tall(100), Truncation.tall(200), Truncation.tall(400))
    edge_fraction: float = 0.25
    edge_mass: float = 0.5
    boundary_factor: float = 10.0
    # half-width of the band around a known essential set that counts as essential
    essential_band: float = 1e-9
    check_lr: bool = True

    def __post_init__(self):
        sched = tuple(self.truncation_schedule)
        object.__setattr__(self, "truncation_schedule", sched)
        if not (self.rank_rel_tol > 0 and self.closed_range_floor > 0 and self.fredholm_dim_cap > 0):
            raise BadParameter("tolerances must be positive")
        if not 0 < self.edge_fraction < 1 or not 0 < self.edge_mass < 1:
            raise BadParameter("edge_fraction and edge_mass must lie in (0, 1)")
        if self.essential_band < 0:
            raise BadParameter("essential_band must be non-negative")
        if not sched:
            raise BadParameter("truncation schedule is empty")
        for a, b in zip(sched, sched[1:]):
            if not (b.rows > a.rows and b.cols > a.cols):
                raise BadParameter("truncation schedule must be strictly increasing")

    @classmethod
    def with_sizes(cls, sizes: Sequence[int], **kw):
        return cls(truncation_schedule=tuple(Truncation.tall(n) for n in sizes), **kw)

    def to_json(self):
        return {"schema": 1, "rank_rel_tol": self.rank_rel_tol,
                "closed_range_floor": self.closed_range_floor,
                "fredholm_dim_cap": self.fredholm_dim_cap,
                "truncation_schedule": [[t.rows, t.cols] for t in self.truncation_schedule],
                "edge_fraction": self.edge_fraction, "edge_mass": self.edge_mass,
                "boundary_factor": self.boundary_factor, "essential_band": self.essential_band,
                "check_lr": self.check_lr}

    @classmethod
    def from_json(cls, doc):
        if doc.get("schema", 1) != 1:
            raise ValueError(f"unsupported config schema {doc.get('schema')!r}")
        kw = {k: v for k, v in doc.items() if k not in ("schema", "truncation_schedule")}
        if "truncation_schedule" in doc:
            kw["truncation_schedule"] = tuple(
                Truncation.tall(t) if isinstance(t, int) else Truncation(*t)
                for t in doc["truncation_schedule"])
        return cls(**kw)


@dataclass(frozen=True)
class CohomologyReport:
    h0: int
    h1: int
    h2: int
    rank_d0: int
    rank_d1: int
    sigma_min_d0: float
    sigma_min_d1_adjoint: float
    closed_range_d0: bool
    closed_range_d1: bool
    edge: tuple = (0, 0, 0)
    boundary: bool = False

    @property
    def dims(self):
        return self.h0, self.h1, self.h2

    @property
    def interior(self):
        return tuple(h - e for h, e in zip(self.dims, self.edge))

    @property
    def euler(self):
        return self.h0 - self.h1 + self.h2


def _svd(a):
    try:
        return np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdown(str(exc)) from exc


def _rank(s, shape, cfg):
    """Rank with conservative tie-breaking; returns (rank, boundary flag)."""
    if s.size == 0 or s[0] == 0:
        return 0, False
    thr = cfg.rank_rel_tol * s[0] * max(shape)
    strict = int(np.count_nonzero(s > thr))
    loose = int(np.count_nonzero(s > cfg.boundary_factor * thr))
    return loose, loose != strict


def _edge_count(basis, mask, cfg):
    if basis.shape[1] == 0:
        return 0
    m = basis.conj().T @ (mask[:, None] * basis)
    ev = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return int(np.count_nonzero(ev > cfg.edge_mass))


def _tail_mask(n, frac, blocks=1):
    size = n // blocks
    w = max(1, math.ceil(frac * size))
    mask = np.zeros(n)
    for b in range(blocks):
        mask[(b + 1) * size - w:(b + 1) * size] = 1.0
    return mask


def cohomology_dims(cx: KoszulComplex, cfg: ToleranceConfig = ToleranceConfig()) -> CohomologyReport:
    """Cohomology dimensions of a finite complex from singular values.

    Ranks use the threshold ``rank_rel_tol * sigma_max * max(shape)``;
    singular values within ``boundary_factor`` of it are counted as zero and
    the report is flagged ``boundary``.  Dimensions follow by rank-nullity.
    For rule-based complexes the ``edge`` field counts classes localized at
    the truncation boundary.

    Raises
    ------
    NumericalBreakdown
        If an SVD fails to converge.
    """
    cx = cx.numeric()
    d0, d1 = cx.d0, cx.d1
    n0, n1, n2 = cx.dims
    U0, s0, V0h = _svd(d0)
    U1, s1, V1h = _svd(d1)
    r0, b0 = _rank(s0, d0.shape, cfg)
    r1, b1 = _rank(s1, d1.shape, cfg)
    h0, h2 = n0 - r0, n2 - r1
    h1 = n1 - r0 - r1
    boundary = b0 or b1
    if h1 < 0:
        # not a complex to working precision
        boundary, h1 = True, 0
    smin0 = float(s0[r0 - 1]) if r0 else 0.0
    smin1 = float(s1[r1 - 1]) if r1 else 0.0
    closed0 = r0 == 0 or smin0 >= cfg.closed_range_floor
    closed1 = r1 == 0 or smin1 >= cfg.closed_range_floor
    edge = (0, 0, 0)
    if cx.rule_based:
        H0 = V0h.conj().T[:, r0:]
        Z = V1h.conj().T[:, r1:]
        B = U0[:, :r0]
        W = Z - B @ (B.conj().T @ Z)
        if h1:
            Uw, _, _ = np.linalg.svd(W, full_matrices=False)
            H1 = Uw[:, :h1]
        else:
            H1 = np.zeros((n1, 0), dtype=complex)
        H2 = U1[:, r1:]
        f = cfg.edge_fraction
        edge = (_edge_count(H0, _tail_mask(n0, f), cfg),
                _edge_count(H1, _tail_mask(n1, f, blocks=2), cfg),
                _edge_count(H2, _tail_mask(n2, f), cfg))
    return CohomologyReport(h0, h1, h2, r0, r1, smin0, smin1, closed0, closed1, edge, boundary)


@dataclass(frozen=True)
class PointClassification:
    point: CharacterPoint
    report: CohomologyReport
    dims: tuple
    in_sigma: bool
    in_sigma_e: bool
    in_sigma_pi: tuple
    in_sigma_delta: tuple
    in_sigma_l_or_r: bool
    fredholm: bool
    history: tuple = ()
    flags: tuple = ()

    @property
    def sigma_sets(self):
        """Membership in Sigma^0, Sigma^1, Sigma^2."""
        h0, h1, h2 = self.dims
        return (h0 > 0,
                h1 > 0 or not self.report.closed_range_d0,
                h2 > 0 or not self.report.closed_range_d1)


def _sets(dims, closed0, closed1):
    h0, h1, h2 = dims
    sig = (h0 > 0, h1 > 0 or not closed0, h2 > 0 or not closed1)
    closed = (closed0, closed1, True)
    pi = tuple(any(sig[: n + 1]) or not closed[n] for n in range(3))
    delta = tuple(any(sig[n:]) for n in range(3))
    return sig, pi, delta


def _essential_rule(pair: QPair, point: CharacterPoint, cfg):
    """Essential-spectrum rule for pairs with a compact factor.

    A functor killing compact operators turns the complex into one with the
    compact factor replaced by 0, which fails to be exact exactly where the
    remaining scalar blocks fail to be invertible modulo compacts.  Returns
    ``(verdict, fails_d0, fails_d1)`` or ``None`` when no rule applies.
    """
    if pair.dim is not None:
        return False, False, False
    band = cfg.essential_band
    z = complex(point.value)
    q = complex(pair.q)
    if pair.flags.S_compact:
        ess = pair.T.essential_spectrum()
        if ess is None:
            return None
        if point.axis == "X":
            f1 = ess.contains(z, band)
            f0 = ess.scaled(1 / q).contains(z, band)
        else:
            f0 = f1 = abs(z) <= band and ess.contains(0, 0.0)
        return f0 or f1, f0, f1
    if pair.flags.T_compact:
        ess = pair.S.essential_spectrum()
        if ess is None:
            return None
        if point.axis == "Y":
            f1 = ess.contains(z, band)
            f0 = ess.scaled(q).contains(z, band)
        else:
            f0 = f1 = abs(z) <= band and ess.contains(0, 0.0)
        return f0 or f1, f0, f1
    return None


def _schedule(pair: QPair, cfg: ToleranceConfig):
    if pair.dim is not None:
        return (Truncation.square(pair.dim),)
    return cfg.truncation_schedule


def classify_complex_family(pair: QPair, point: CharacterPoint,
                            builder: Callable[[Truncation], KoszulComplex],
                            cfg: ToleranceConfig = ToleranceConfig(),
                            lr_builder: Optional[Callable[[Truncation], KoszulComplex]] = None
                            ) -> PointClassification:
    """Classify ``point`` from the complexes ``builder(trunc)`` over the schedule."""
    schedule = _schedule(pair, cfg)
    reports = [cohomology_dims(builder(t), cfg) for t in schedule]
    history = tuple(r.interior for r in reports)
    flags = []
    if any(r.boundary for r in reports):
        flags.append("boundary")
    finite = pair.dim is not None
    last = reports[-1]
    persistent = all(h == history[0] for h in history)
    growing = not persistent and all(
        all(b >= a for a, b in zip(h, k)) for h, k in zip(history, history[1:]))
    inconclusive = not (persistent or growing)
    if inconclusive:
        flags.append("inconclusive")
        dims = tuple(max(h[i] for h in history) for i in range(3))
    else:
        dims = history[-1]
    if growing:
        flags.append("growing")

    if finite:
        closed0 = closed1 = True
    else:
        closed0 = not all(r.sigma_min_d0 < cfg.closed_range_floor and r.rank_d0 and h[0] == 0
                          for r, h in zip(reports, history))
        closed1 = not all(r.sigma_min_d1_adjoint < cfg.closed_range_floor and r.rank_d1 and h[2] == 0
                          for r, h in zip(reports, history))
        if not (closed0 and closed1):
            flags.append("closed-range-failure")

    rule = None if finite else _essential_rule(pair, point, cfg)
    if finite:
        essential = False
    elif rule is not None:
        essential, f0, f1 = rule
        if essential:
            flags.append("essential-rule")
            closed0 = closed0 and not f0
            closed1 = closed1 and not f1
    else:
        essential = (growing or inconclusive or not (closed0 and closed1)
                     or max(dims) > cfg.fredholm_dim_cap)

    sig, pi, delta = _sets(dims, closed0, closed1)
    in_sigma = any(sig)
    report = replace(last, closed_range_d0=closed0, closed_range_d1=closed1)

    in_lr = in_sigma
    if lr_builder is not None and cfg.check_lr:
        lr = cohomology_dims(lr_builder(schedule[-1]), cfg)
        lr_sig, _, _ = _sets(lr.interior, closed0, closed1)
        in_lr = any(lr_sig)
        if lr.interior != last.interior:
            flags.append("lr-mismatch")

    result = PointClassification(point, report, dims, in_sigma, essential, pi, delta, in_lr,
                                 not essential, history, tuple(flags))
    if inconclusive:
        raise Inconclusive(f"defects {history} oscillate across the schedule at {point}", result)
    return result


def classify_point(pair: QPair, gamma: CharacterPoint,
                   cfg: ToleranceConfig = ToleranceConfig()) -> PointClassification:
    """Classify a point of the character cross.

    Cohomology is computed on every truncation of the schedule (a single
    square section for finite pairs).  Persistent or growing defects are
    spectral; defects that shrink raise :class:`Inconclusive` carrying a
    conservative classification.  Pairs with a compact factor decide the
    essential spectrum by the compact-perturbation rule; otherwise growth,
    closed-range failure or defects above ``fredholm_dim_cap`` mark the
    point as essential.
    """
    lr = build_L if gamma.axis == "X" else build_R
    return classify_complex_family(
        pair, gamma, lambda t: build_K(pair, gamma, t, exact=False), cfg,
        lambda t: lr(pair, gamma.value, t, exact=False))


@dataclass(frozen=True)
class LeftBoundReport:
    checked: tuple
    skipped: tuple
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def left_spectrum_bound_check(pair: QPair, samples, cfg: ToleranceConfig = ToleranceConfig(),
                              margin: float = 1e-6) -> LeftBoundReport:
    """Check that samples off ``σ(T) ∪ σ(T/q)`` are resolvent for ``L_λ``.

    Samples within ``margin`` of the approximated spectra are skipped.  An
    operator without a known spectrum approximation makes every sample a skip.
    """
    spec_T = pair.T.spectrum()
    checked, skipped, violations = [], [], []
    for lam in samples:
        z = complex(lam)
        if spec_T is None or spec_T.contains(z, margin) or spec_T.scaled(1 / complex(pair.q)).contains(z, margin):
            skipped.append(lam)
            continue
        point = CharacterPoint("X", lam)
        try:
            cls = classify_complex_family(pair, point, lambda t: build_L(pair, lam, t, exact=False), cfg)
        except Inconclusive as exc:
            cls = exc.classification
        checked.append(lam)
        if cls.in_sigma:
            violations.append((lam, cls.dims))
    return LeftBoundReport(tuple(checked), tuple(skipped), tuple(violations))


def _fmt(x):
    return format(float(x), ".10g")


def classification_row(c: PointClassification) -> list:
    z = complex(c.point.value)
    b = lambda v: "1" if v else "0"  # noqa: E731
    return [c.point.axis, _fmt(z.real), _fmt(z.imag), str(c.dims[0]), str(c.dims[1]), str(c.dims[2]),
            _fmt(c.report.sigma_min_d0), _fmt(c.report.sigma_min_d1_adjoint), b(c.in_sigma),
            b(c.in_sigma_e), *(b(v) for v in c.in_sigma_pi), *(b(v) for v in c.in_sigma_delta),
            ";".join(c.flags)]
