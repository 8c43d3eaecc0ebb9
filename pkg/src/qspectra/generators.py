"""Random exact q-commuting pairs with known candidate spectra.

``S`` is diagonalizable with eigenvalues arranged in q-chains
``s, qs, q^2 s`` plus an optional kernel.  In the eigenbasis ``T`` may only
connect an eigenvector of ``s`` to one of ``q s``, which is exactly the
relation ``ST = qTS``; on the kernel of ``S`` it is upper triangular.  Both are
then conjugated by a unimodular Gaussian-integer matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .koszul import CharacterPoint
from .operators import DenseMatrix
from .pair import QPair, make_q_pair
from .scalars import GaussRat

__all__ = ["GeneratedPair", "random_exact_pair", "random_points", "Q_CHOICES"]

Q_CHOICES = (GaussRat(1, 0) / 2, GaussRat(-1, 0) / 2, GaussRat(0, 1) / 2, GaussRat(3, 4) / 10,
             GaussRat(2), GaussRat(-2), GaussRat(0, 2), GaussRat(6, 8) / 5,
             GaussRat(3), GaussRat(-3), GaussRat(0, 3), GaussRat(9, 12) / 5)


@dataclass(frozen=True)
class GeneratedPair:
    pair: QPair
    sigma_T: tuple
    sigma_S: tuple

    @property
    def candidates_x(self):
        q = self.pair.q
        return _unique(list(self.sigma_T) + [t / q for t in self.sigma_T])

    @property
    def candidates_y(self):
        q = self.pair.q
        return _unique(list(self.sigma_S) + [s * q for s in self.sigma_S])

    def candidate_points(self):
        return ([CharacterPoint("X", v) for v in self.candidates_x]
                + [CharacterPoint("Y", v) for v in self.candidates_y])


def _unique(vals):
    out = []
    for v in vals:
        if v not in out:
            out.append(v)
    return out


def _small(rng, lo=-3, hi=3, denoms=(1, 1, 2, 3)):
    d = int(rng.choice(denoms))
    return GaussRat(int(rng.integers(lo, hi + 1)), int(rng.integers(lo, hi + 1))) / d


def _nonzero(rng):
    while True:
        v = _small(rng)
        if v != 0:
            return v


def _mat(n, fill):
    return np.array([[fill(i, j) for j in range(n)] for i in range(n)], dtype=object)


def _matmul(a, b):
    n = a.shape[0]
    return _mat(n, lambda i, j: sum((a[i, k] * b[k, j] for k in range(n)), GaussRat(0)))


def _unimodular(rng, n):
    """``P = L U`` with unit triangular Gaussian-integer factors, and ``P^-1``."""
    def gi():
        return GaussRat(int(rng.integers(-1, 2)), int(rng.integers(-1, 2)))
    zero, one = GaussRat(0), GaussRat(1)
    L = _mat(n, lambda i, j: one if i == j else (gi() if i > j else zero))
    U = _mat(n, lambda i, j: one if i == j else (gi() if i < j else zero))

    def tri_inv(m, lower):
        # unit triangular inverse by substitution
        inv = _mat(n, lambda i, j: one if i == j else zero)
        order = range(n) if lower else range(n - 1, -1, -1)
        for j in range(n):
            for i in order:
                if i == j:
                    continue
                if (lower and i < j) or (not lower and i > j):
                    continue
                ks = range(j, i) if lower else range(i + 1, j + 1)
                inv[i, j] = -sum((m[i, k] * inv[k, j] for k in ks), GaussRat(0))
        return inv
    P = _matmul(L, U)
    Pinv = _matmul(tri_inv(U, False), tri_inv(L, True))
    return P, Pinv


def random_exact_pair(rng: np.random.Generator, dim: int = None, q=None,
                      max_chain: int = 3) -> GeneratedPair:
    """A valid exact pair of dimension 2..6 with its exact ``σ(T)`` and ``σ(S)``."""
    n = int(rng.integers(2, 7)) if dim is None else dim
    q = Q_CHOICES[int(rng.integers(len(Q_CHOICES)))] if q is None else q
    diag = []
    while len(diag) < n:
        room = n - len(diag)
        if rng.random() < 0.25:
            diag.append(GaussRat(0))
            continue
        length = int(rng.integers(1, min(max_chain, room) + 1))
        s = _nonzero(rng)
        diag.extend(s * q ** i for i in range(length))
    order = rng.permutation(n)
    diag = [diag[i] for i in order]
    kernel = [i for i in range(n) if diag[i] == 0]
    zero = GaussRat(0)

    def t_entry(i, j):
        if diag[i] == 0 and diag[j] == 0:
            if kernel.index(i) <= kernel.index(j):
                return _small(rng) if rng.random() < 0.8 else zero
            return zero
        if diag[i] != 0 and diag[i] == q * diag[j]:
            return _small(rng) if rng.random() < 0.85 else zero
        return zero

    Tm = _mat(n, t_entry)
    Dm = _mat(n, lambda i, j: diag[i] if i == j else zero)
    P, Pinv = _unimodular(rng, n)
    T = _matmul(_matmul(P, Tm), Pinv)
    S = _matmul(_matmul(P, Dm), Pinv)
    pair = make_q_pair(DenseMatrix(T), DenseMatrix(S), q, validation_dim=n, tol=0.0)
    sigma_S = _unique(diag)
    sigma_T = _unique([Tm[i, i] for i in kernel] + ([zero] if len(kernel) < n else []))
    return GeneratedPair(pair, tuple(sigma_T), tuple(sigma_S))


def random_points(gen: GeneratedPair, rng: np.random.Generator, count: int = 6):
    """Candidate points of both axes first, then random Gaussian-rational points."""
    pts = gen.candidate_points()
    rng.shuffle(pts)
    pts = pts[: max(2, count - 2)]
    while len(pts) < count:
        axis = "X" if rng.random() < 0.5 else "Y"
        pts.append(CharacterPoint(axis, _small(rng, -4, 4, (1, 2, 3, 5))))
    return pts
