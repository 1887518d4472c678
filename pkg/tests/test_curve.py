from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import curves
from hyptwist.curve import (
    AffinePoint,
    Curve,
    curves_from_lines,
    is_on_twisted_curve,
    new_curve,
    parse_curve,
    rescale_point,
    twist_class,
    twisted_model_roots,
)
from hyptwist.errors import DuplicateRoot, EvenDegree


def test_new_curve_examples():
    C = new_curve([0, 1, 3])
    assert C.genus == 1 and C.bad_support == frozenset({2, 3})
    C2 = new_curve([0, 1, 2, 3, 4])
    assert C2.genus == 2 and C2.bad_support == frozenset({2, 3})
    with pytest.raises(DuplicateRoot):
        new_curve([0, 0, 1])
    with pytest.raises(EvenDegree):
        new_curve([0, 1])


def test_bad_support_includes_two_always():
    # differences all odd, but the discriminant of an odd-degree model has 2 in it
    assert 2 in new_curve([0, 3, 9]).bad_support


def test_parse_and_lines():
    assert parse_curve("[0, 1, 3]").roots == (0, 1, 3)
    assert [c.roots for c in curves_from_lines(["[0,1,3]", "", "# x", "[105,2431,0]"])] == [(0, 1, 3), (105, 2431, 0)]


def test_membership_examples():
    C = Curve((0, 1, 3))
    assert is_on_twisted_curve(C, 40, AffinePoint(5, 1))
    assert is_on_twisted_curve(C, 1, AffinePoint(0, 0))
    assert not is_on_twisted_curve(C, 40, AffinePoint(4, 1))


def test_twisted_model_roots():
    assert twisted_model_roots(Curve((0, 1, 3)), -2) == (0, -2, -6)
    assert twisted_model_roots(Curve((0, 1, 3)), 1) == (0, 1, 3)
    assert twisted_model_roots(Curve((0, 1, 2, 3, 4)), 3) == (0, 3, 6, 9, 12)


def test_rescale_point():
    C = Curve((0, 1, 3))
    s, P = rescale_point(40, AffinePoint(5, 1))
    assert s == 10 and twist_class(40) == 10
    assert is_on_twisted_curve(C, s, P)


@given(curves(), st.integers(-30, 30), st.integers(1, 20))
def test_twisted_model_correspondence(C, n, m):
    # (x, 1) on t*y^2 = f(x) with t = f(x) maps to (t x, t^(g+1)) on Y^2 = prod (X - t a_i)
    x = Fraction(n, m)
    t = C.f(x)
    if t == 0:
        return
    assert is_on_twisted_curve(C, t, AffinePoint(x, 1))
    X, Y = t * x, t ** (C.genus + 1)
    model = 1
    for a in C.roots:
        model *= X - t * a
    assert Y * Y == model
