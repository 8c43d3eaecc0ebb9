from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qspectra.regions import Circle, Disk, Empty, GeometricHull, Points
from qspectra.scalars import GaussRat, as_exact, parse_scalar, scalar_to_json

fr = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 100)
gr = st.builds(GaussRat, fr, fr)


@given(gr, gr)
def test_gaussrat_matches_complex(a, b):
    for got, want in [(a + b, complex(a) + complex(b)), (a - b, complex(a) - complex(b)),
                      (a * b, complex(a) * complex(b))]:
        assert abs(complex(got) - want) <= 1e-9 * (1 + abs(want))
    if b != 0:
        assert (a / b) * b == a


@given(gr)
def test_gaussrat_conjugate_and_norm(a):
    assert a * a.conjugate() == GaussRat(a.abs2())
    assert hash(a) == hash(GaussRat(a.re, a.im))


def test_gaussrat_pow_negative():
    z = GaussRat(1, 1)
    assert z ** -2 * z ** 2 == 1
    with pytest.raises(ZeroDivisionError):
        GaussRat(0) ** -1


def test_parse_scalar_strings_are_exact():
    assert parse_scalar(["1/2", "-3"]) == GaussRat(Fraction(1, 2), -3)
    assert parse_scalar([0.5, 1.0]) == 0.5 + 1j
    assert as_exact("2/4") == GaussRat(Fraction(1, 2))
    assert parse_scalar(scalar_to_json(GaussRat(Fraction(2, 3), 1))) == GaussRat(Fraction(2, 3), 1)


def test_regions_distance():
    assert Disk(0, 1).distance(2) == 1
    assert Disk(0, 1).contains(0.5j)
    assert Circle(0, 2).distance(0.5) == 1.5
    assert Points((1, 3)).distance(2.5) == 0.5
    assert Empty().distance(0) == float("inf")
    h = GeometricHull(0.5)
    assert h.distance(0.25) == 0 and h.distance(0) == 0
    assert abs(h.distance(0.3) - 0.05) < 1e-15
    assert h.scaled(2).contains(2) and not h.scaled(2).contains(3, 0.5)
    assert (Disk(0, 1) | Circle(0, 2)).contains(2j)
