import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import I, Matrix, Rational

from qspectra.errors import CapExceeded
from qspectra.exact import (ExactMatrix, ResolutionComplex, exact_cohomology, exact_determinant,
                            exact_rank, tor_consistency)
from qspectra.model import ModelParams
from qspectra.operators import DiagonalPowers, Truncation, UnilateralShift, Zero
from qspectra.pair import make_q_pair
from qspectra.scalars import GaussRat

from conftest import X, Y, nilpotent_pair

small = st.integers(-3, 3)
entry = st.builds(lambda a, b, d: GaussRat(a, b) / d, small, small, st.sampled_from([1, 2, 3]))


def _sympy(m):
    return Matrix([[Rational(v.re.numerator, v.re.denominator) + I * Rational(v.im.numerator, v.im.denominator)
                    for v in row] for row in m])


def test_rank_examples():
    z = GaussRat(0)
    assert exact_rank(ExactMatrix.from_rows([[0] * 3] * 3)) == 0
    assert exact_rank(ExactMatrix.from_rows([[int(i == j) for j in range(4)] for i in range(4)])) == 4
    assert exact_rank(ExactMatrix.from_rows([[1, GaussRat(0, 1)], [GaussRat(0, 1), -1]])) == 1
    assert exact_determinant(ExactMatrix.from_rows([[1, 2], [3, 4]])) == -2


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_agrees_with_sympy(r, c, data):
    rows = [[data.draw(entry) for _ in range(c)] for _ in range(r)]
    if r > 1 and data.draw(st.booleans()):
        # force a dependent row
        k = data.draw(entry)
        rows[-1] = [k * v for v in rows[0]]
    assert exact_rank(ExactMatrix.from_rows(rows)) == _sympy(rows).rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_determinant_agrees_with_sympy(n, data):
    rows = [[data.draw(entry) for _ in range(n)] for _ in range(n)]
    want = _sympy(rows).det().expand()
    got = exact_determinant(ExactMatrix.from_rows(rows))
    assert complex(got) == pytest.approx(complex(want), abs=1e-12)
    assert (got == 0) == (want == 0)


def test_exact_cohomology_examples():
    zp = make_q_pair(Zero(1), Zero(1), GaussRat(1) / 2, 2, 0.0)
    assert exact_cohomology(zp, X(GaussRat(0))) == (1, 2, 1)
    pair = nilpotent_pair()
    # Euler characteristic forces h1 = h0 + h2 on every finite complex
    assert exact_cohomology(pair, Y(GaussRat(1))) == (0, 1, 1)
    assert exact_cohomology(pair, Y(GaussRat(3)))[2] == 0


def test_exact_cohomology_cap():
    with pytest.raises(CapExceeded):
        exact_cohomology(nilpotent_pair(), X(GaussRat(0)), cap=1)
    q = GaussRat(1) / 2
    with pytest.raises(CapExceeded):
        exact_cohomology(make_q_pair(UnilateralShift(), DiagonalPowers(q), q, 8, 0.0), X(GaussRat(1)))


def test_tor_consistency_examples():
    zp = make_q_pair(Zero(1), Zero(1), GaussRat(1) / 2, 2, 0.0)
    assert tor_consistency(zp, X(GaussRat(1)))
    assert tor_consistency(nilpotent_pair(), Y(GaussRat(1)))
    q = GaussRat(1) / 2
    model = make_q_pair(UnilateralShift(), DiagonalPowers(q), q, 8, 0.0)
    assert tor_consistency(model, X(GaussRat(1)), Truncation.square(4))
    assert tor_consistency(model, Y(GaussRat(1, 1) / 3), Truncation.tall(4))


def test_resolution_complex_is_complex():
    res = ResolutionComplex.specialize(nilpotent_pair(), X(GaussRat(2, -1)), Truncation.square(2))
    assert res.is_complex()
