"""The unilateral shift / diagonal q-operator pair on the sequence space.

``T e_n = e_{n+1}`` and ``S e_n = q^n e_n`` with ``0 < |q| < 1``.  This module
holds closed-form reference spectra, explicit cohomology witnesses and the
tail-sum functional that describes first cohomology inside the unit disk.
Every infinite sum is truncated with an a-priori tail bound returned next to
the value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadParameter, Inconclusive, OutOfAnnulus
from .koszul import CharacterPoint
from .operators import DiagonalPowers, UnilateralShift
from .pair import QPair, make_q_pair
from .regions import Circle, Disk, Empty, GeometricHull, Points

__all__ = ["ModelParams", "TailFunctionalInput", "ReferenceSpectra", "model_pair",
           "reference_membership", "witness_h1_annulus", "epsilon_lambda", "EpsilonValue",
           "geometric_eta", "geometric_epsilon_closed_form", "spike_eta", "m_lambda_membership",
           "h1_reconstruction_check", "right_kernel_element", "right_spectrum_solver",
           "verify_model", "H1Witness", "RightSolution", "MembershipVerdict"]


@dataclass(frozen=True)
class ModelParams:
    q: complex = 0.5
    p: float = 2.0
    N: int = 200

    def __post_init__(self):
        if not 0 < abs(complex(self.q)) < 1:
            raise BadParameter(f"the model needs 0 < |q| < 1, got {self.q}")
        if self.p < 1:
            raise BadParameter("p must be at least 1")
        if self.N < 2:
            raise BadParameter("N must be at least 2")

    @property
    def outer_radius(self) -> float:
        return 1.0 / abs(complex(self.q))


def model_pair(params: ModelParams) -> QPair:
    q = params.q
    return make_q_pair(UnilateralShift(), DiagonalPowers(q), q, validation_dim=50, tol=1e-12)


@dataclass(frozen=True)
class ReferenceSpectra:
    """Known spectra of the model, all as plane sets."""

    params: ModelParams

    @property
    def sigma_T(self):
        return Disk(0, 1.0)

    @property
    def sigma_S(self):
        return GeometricHull(complex(self.params.q))

    @property
    def sigma_l_outer(self):
        return Disk(0, self.params.outer_radius)

    def in_sigma_l_inner(self, lam, tol=0.0) -> bool:
        r = abs(complex(lam))
        return 1 - tol <= r <= self.params.outer_radius + tol

    @property
    def sigma_r(self):
        return Points([1.0])

    @property
    def sigma_e_x(self):
        return Circle(0, 1.0) | Circle(0, self.params.outer_radius)

    @property
    def sigma_e_y(self):
        return Empty()


def reference_membership(params: ModelParams, gamma: CharacterPoint, tol: float = 1e-12) -> str:
    """Closed-form verdict: resolvent, spectral, essential or unknown-band.

    ``tol`` is the radius tolerance for the circle equalities; a scan passes
    half a grid cell.
    """
    z = complex(gamma.value)
    if gamma.axis == "Y":
        return "spectral" if abs(z - 1) <= tol else "resolvent"
    r, R = abs(z), params.outer_radius
    if abs(r - 1) <= tol or abs(r - R) <= tol:
        return "essential"
    if r <= tol or r > R:
        return "resolvent"
    if r >= 1:
        return "spectral"
    return "unknown-band"


@dataclass(frozen=True)
class H1Witness:
    lam: complex
    zeta: np.ndarray
    eta: np.ndarray
    residual: float
    corner: float
    zeta_norm: float
    zeta_norm_closed: float
    zeta_norm_tail: float
    alpha_abs: np.ndarray
    alpha_formula_residual: float
    liminf_lower: float
    diverges: bool


def witness_h1_annulus(params: ModelParams, lam, rtol: float = 1e-12) -> H1Witness:
    """Nontrivial first cohomology class of the left complex at ``lam``.

    ``zeta = sum lam^-(n+1) e_n`` and ``eta = e_0`` satisfy
    ``(lam - T) zeta = S eta`` up to the corner term ``lam^-(N+1)``.  The only
    candidate preimage ``theta`` with ``S theta = zeta`` has
    ``|theta_n| = 1 / (|lam| |q lam|^n)``, bounded below by ``1/|lam|`` when
    ``|q lam| <= 1``; its partial norms grow without bound.
    """
    lam = complex(lam)
    q = complex(params.q)
    R = params.outer_radius
    if not (1 < abs(lam) <= R * (1 + rtol)):
        raise OutOfAnnulus(f"|lambda| = {abs(lam)} is outside (1, {R}]")
    N, p = params.N, params.p
    n = np.arange(N + 1)
    zeta = lam ** (-(n + 1.0))
    eta = np.zeros(N + 1, dtype=complex)
    eta[0] = 1.0
    # (lam - T) zeta - S eta on rows 0..N+1; the last row is the corner term
    img = np.zeros(N + 2, dtype=complex)
    img[: N + 1] += lam * zeta
    img[1:] -= zeta
    img[: N + 1] -= q ** n * eta
    residual = float(np.linalg.norm(img[: N + 1]))
    corner = float(abs(img[N + 1]))
    r = abs(lam)
    closed = (r ** p - 1) ** (-1 / p)
    partial = float(np.sum(np.abs(zeta) ** p) ** (1 / p))
    tail = float((r ** (-p * (N + 2)) / (1 - r ** (-p))) ** (1 / p))
    alpha = zeta / q ** n
    expected = 1.0 / (r * abs(q * lam) ** n)
    formula_residual = float(np.max(np.abs(np.abs(alpha) - expected) / expected))
    liminf = 1.0 / r if abs(q * lam) <= 1 + rtol else 0.0
    return H1Witness(lam, zeta, eta, residual, corner, partial, closed, tail,
                     np.abs(alpha), formula_residual, liminf, liminf > 0)


@dataclass(frozen=True)
class TailFunctionalInput:
    """Finite coefficient vector ``beta`` of ``eta`` with the parameters ``lam, q``."""

    beta: np.ndarray
    lam: complex
    q: complex

    def __post_init__(self):
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=complex))
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "q", complex(self.q))

    @property
    def ratio(self) -> complex:
        return self.q * self.lam

    def orthogonality_residual(self) -> float:
        """``|(eta, zeta_{lam q})| = |sum beta_n (q lam)^n|``."""
        powers = self.ratio ** np.arange(len(self.beta))
        return float(abs(np.sum(self.beta * powers)))

    def tail_coefficients(self) -> np.ndarray:
        """``c_n = sum_{k>n} beta_k (q lam)^(k-n-1)`` by a backward recurrence."""
        b, r = self.beta, self.ratio
        c = np.zeros(len(b), dtype=complex)
        for n in range(len(b) - 2, -1, -1):
            c[n] = b[n + 1] + r * c[n + 1]
        return c


@dataclass(frozen=True)
class EpsilonValue:
    value: float
    tail_bound: float


def epsilon_lambda(inp: TailFunctionalInput, N: int) -> EpsilonValue:
    """Partial sum ``sum_{n<N} |c_n|^2`` of the tail functional.

    For the finite vector the remainder is bounded by Young's inequality,
    ``sum_{n>=N} |c_n|^2 <= sum_{k>N} |beta_k|^2 / (1 - |q lam|)^2``; it is
    exactly 0 once ``N`` covers the support.
    """
    c = inp.tail_coefficients()
    value = float(np.sum(np.abs(c[:N]) ** 2))
    r = abs(inp.ratio)
    rest = float(np.sum(np.abs(inp.beta[N + 1:]) ** 2))
    if rest == 0.0:
        bound = 0.0
    elif r < 1:
        bound = rest / (1 - r) ** 2
    else:
        bound = math.inf
    return EpsilonValue(value, bound)


def geometric_eta(z, lam, q, length: int = 400) -> TailFunctionalInput:
    """``beta_0 = -z q lam / (1 - z q lam)``, ``beta_n = z^n``, cut after ``length`` terms."""
    z, lam, q = complex(z), complex(lam), complex(q)
    beta = z ** np.arange(length, dtype=float)
    beta[0] = -z * q * lam / (1 - z * q * lam)
    return TailFunctionalInput(beta, lam, q)


def geometric_epsilon_closed_form(z, lam, q) -> float:
    z, lam, q = complex(z), complex(lam), complex(q)
    return abs(z / (1 - z * q * lam)) ** 2 / (1 - abs(z) ** 2)


def spike_eta(k: int, lam, q, orthogonal: bool = True) -> TailFunctionalInput:
    """``e_k``, optionally corrected in ``beta_0`` to lie in the orthogonal complement."""
    beta = np.zeros(k + 1, dtype=complex)
    beta[k] = 1.0
    if orthogonal and k > 0:
        beta[0] = -(complex(q) * complex(lam)) ** k
    return TailFunctionalInput(beta, lam, q)


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: str
    orthogonality_residual: float
    epsilon: float
    epsilon_doubled: float
    tail_bound: float


def m_lambda_membership(inp: TailFunctionalInput, N: int, tol: float = 1e-10,
                        divergence_threshold: float = 1e12) -> MembershipVerdict:
    """Decide whether ``eta`` lies in the finiteness subspace of the tail functional.

    Member when the orthogonality residual and the doubling difference of the
    partial sums plus the tail bound are all within ``tol``.
    """
    r = abs(inp.lam)
    if not 0 < r < 1:
        raise BadParameter(f"lambda must satisfy 0 < |lambda| < 1, got {inp.lam}")
    orth = inp.orthogonality_residual()
    e1, e2 = epsilon_lambda(inp, N), epsilon_lambda(inp, 2 * N)
    scale = max(1.0, float(np.sum(np.abs(inp.beta) ** 2)))
    if orth > tol * scale:
        verdict = "non-member"
    elif e2.value > divergence_threshold:
        verdict = "non-member"
    elif abs(e2.value - e1.value) <= tol * max(1.0, e2.value) and e2.tail_bound <= tol:
        verdict = "member"
    else:
        verdict = "undecided"
    return MembershipVerdict(verdict, orth, e1.value, e2.value, e2.tail_bound)


def h1_reconstruction_check(lam, q, eta, N: int) -> float:
    """Residual of ``(lam - T) zeta - S eta`` on rows ``0..N-1``.

    ``zeta`` is rebuilt from ``eta`` in the equivalent stable form
    ``alpha_n = -q^(n+1) c_n`` (valid on the orthogonal complement), which
    avoids the ``lam^-(n+1)`` growth of the direct formula.  Row 0 carries the
    orthogonality defect of ``eta``.
    """
    inp = eta if isinstance(eta, TailFunctionalInput) else TailFunctionalInput(eta, lam, q)
    lam, q = complex(lam), complex(q)
    beta = np.zeros(max(N, len(inp.beta)), dtype=complex)
    beta[: len(inp.beta)] = inp.beta
    c = TailFunctionalInput(beta, lam, q).tail_coefficients()[:N]
    n = np.arange(N)
    alpha = -(q ** (n + 1.0)) * c
    lhs = lam * alpha
    lhs[1:] -= alpha[:-1]
    res = lhs - q ** n * beta[:N]
    return float(np.linalg.norm(res))


def _power_index(mu, q, rtol=1e-12, kmax=4096):
    mu, q = complex(mu), complex(q)
    if mu == 0:
        return None
    k = round(math.log(abs(mu)) / math.log(abs(q)))
    if k >= 1 and k <= kmax and abs(mu - q ** k) <= rtol * abs(q ** k):
        return k
    return None


def right_kernel_element(params: ModelParams, k: int, beta, alpha_k: complex = 1.0):
    """An element ``(zeta, eta)`` of the kernel of ``r1`` at ``mu = q^k``.

    Uses ``alpha_0 = 0``, ``alpha_n = beta_{n-1} / (mu - q^n)`` for ``n != k``
    and the free coordinate ``alpha_k``; ``beta_{k-1}`` is forced to 0.
    Returns ``zeta`` of length ``len(beta) + 1``.
    """
    q = complex(params.q)
    mu = q ** k
    beta = np.array(beta, dtype=complex)
    if k - 1 < len(beta):
        beta[k - 1] = 0
    zeta = np.zeros(len(beta) + 1, dtype=complex)
    for n in range(1, len(beta) + 1):
        zeta[n] = alpha_k if n == k else beta[n - 1] / (mu - q ** n)
    return zeta, beta


@dataclass(frozen=True)
class RightSolution:
    k: int
    theta: np.ndarray
    residual: float
    kernel_residual: float
    bound_constant: float
    bound_holds: bool


def right_spectrum_solver(params: ModelParams, mu, zeta, eta) -> RightSolution:
    """Lift a kernel element of ``r1`` at ``mu = q^k`` through ``r0``.

    ``theta_n = beta_n / (mu - q^(n+1))`` for ``n != k-1`` and
    ``theta_{k-1} = alpha_k``.  ``zeta`` has one more entry than ``eta``.
    The bound ``||theta||_p <= c ||eta||_p + |alpha_k|`` with
    ``c = max_n 1/|mu - q^(n+1)|`` is checked.
    """
    q = complex(params.q)
    k = _power_index(mu, q)
    if k is None:
        raise BadParameter(f"mu = {mu} is not a positive power of q = {q}")
    mu = q ** k
    zeta = np.asarray(zeta, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    m = len(eta)
    if len(zeta) != m + 1:
        raise BadParameter("zeta must have exactly one more entry than eta")
    n = np.arange(m)
    s_zeta = q ** np.arange(m + 1) * zeta
    t_eta = np.concatenate([[0], eta])
    kernel_residual = float(np.linalg.norm(mu * zeta - s_zeta - t_eta))
    denom = mu - q ** (n + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(n == k - 1, 0, eta / np.where(n == k - 1, 1, denom))
    if k - 1 < m:
        theta[k - 1] = zeta[k]
    t_theta = np.concatenate([[0], theta])
    second = denom * theta
    residual = float(np.sqrt(np.linalg.norm(t_theta - zeta) ** 2 + np.linalg.norm(second - eta) ** 2))
    mask = n != k - 1
    c = float(np.max(1 / np.abs(denom[mask]))) if mask.any() else 0.0
    p = params.p
    lhs = float(np.sum(np.abs(theta) ** p) ** (1 / p))
    free = abs(zeta[k]) if k < len(zeta) else 0.0
    rhs = c * float(np.sum(np.abs(eta) ** p) ** (1 / p)) + free
    return RightSolution(k, theta, residual, kernel_residual, c, lhs <= rhs * (1 + 1e-12) + 1e-300)


def _claim(name, measured, tolerance, passed, **extra):
    out = {"claim": name, "measured": measured, "tolerance": tolerance, "pass": bool(passed)}
    out.update(extra)
    return out


def verify_model(q=0.5, N: int = 200, p: float = 2.0, numerics: bool = True) -> dict:
    """Check every closed-form model statement and return a JSON-ready report."""
    from .cohomology import ToleranceConfig, classify_point

    params = ModelParams(q, p, N)
    qc = complex(q)
    R = params.outer_radius
    claims = []

    for axis, v, want in [("X", 1.5 * R / 2, "spectral"), ("X", 0.0, "resolvent"),
                          ("X", 1.25 * R, "resolvent"), ("X", 1.0, "essential"),
                          ("X", R, "essential"), ("X", 0.5, "unknown-band"),
                          ("Y", 1.0, "spectral"), ("Y", qc, "resolvent"), ("Y", 0.0, "resolvent")]:
        got = reference_membership(params, CharacterPoint(axis, v))
        claims.append(_claim(f"reference membership {axis} {v}", got, want, got == want))

    for lam in (0.75 * R, R):
        if lam <= 1:
            continue
        w = witness_h1_annulus(params, lam)
        claims.append(_claim(f"witness norm closed form at lambda={lam:g}",
                             abs(w.zeta_norm - w.zeta_norm_closed), 1e-10,
                             abs(w.zeta_norm - w.zeta_norm_closed) <= 1e-10 + w.zeta_norm_tail))
        claims.append(_claim(f"telescoping residual at lambda={lam:g}", w.residual, 1e-10,
                             w.residual <= 1e-10, corner=w.corner))
        claims.append(_claim(f"non-liftability at lambda={lam:g}", w.alpha_formula_residual, 1e-10,
                             w.diverges and w.alpha_formula_residual <= 1e-10,
                             liminf_lower=w.liminf_lower))

    worst = 0.0
    for z in (0.1, 0.3 + 0.1j, -0.45):
        for lam in (0.2, -0.5j, 0.75):
            got = epsilon_lambda(geometric_eta(z, lam, qc, 2 * N), N).value
            worst = max(worst, abs(got - geometric_epsilon_closed_form(z, lam, qc)))
    claims.append(_claim("tail functional closed form on geometric grid", worst, 1e-10, worst <= 1e-10))

    ver = m_lambda_membership(geometric_eta(0.3, 0.4, qc, 2 * N), N)
    claims.append(_claim("geometric vector is a member", ver.verdict, "member", ver.verdict == "member"))
    res = h1_reconstruction_check(0.4, qc, geometric_eta(0.3, 0.4, qc, 2 * N), N)
    claims.append(_claim("reconstruction residual, geometric vector", res, 1e-10, res <= 1e-10))

    zeta, eta = right_kernel_element(params, 2, [0.3, 0.2, 0.1, -0.4, 0.05])
    sol = right_spectrum_solver(params, qc ** 2, zeta, eta)
    claims.append(_claim("right lift at mu=q^2", sol.residual, 1e-12,
                         sol.residual <= 1e-12 and sol.bound_holds))

    if numerics:
        pair = model_pair(params)
        cfg = ToleranceConfig.with_sizes([N // 2, N])
        for axis, v, want in [("X", 0.0, (False, None)), ("X", 0.75 * R, (True, (0, 1, 0))),
                              ("X", 1.25 * R, (False, None)), ("Y", 1.0, (True, (0, 1, 1))),
                              ("Y", qc, (False, None))]:
            try:
                c = classify_point(pair, CharacterPoint(axis, v), cfg)
            except Inconclusive as exc:
                c = exc.classification
            ok = c.in_sigma == want[0] and (want[1] is None or c.dims == want[1])
            claims.append(_claim(f"classification {axis} {v}", list(c.dims), list(want[1] or (0, 0, 0)),
                                 ok, in_sigma=c.in_sigma, flags=list(c.flags)))

    return {"schema": 1, "q": [qc.real, qc.imag], "N": N, "p": p, "claims": claims,
            "pass": all(c["pass"] for c in claims)}
