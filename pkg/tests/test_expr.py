import random
from fractions import Fraction

import pytest

from dpx.errors import ParseError
from dpx.expr import parse_poly, parse_scalar
from dpx.poly import QQ, QQT, PolyRing
from dpx.scalar import RatFunc

from helpers import random_poly

R = PolyRing(("x", "y1", "y2"), QQ)
x, y1, y2 = R.gens()
t = RatFunc.t()


def test_basic_parse():
    assert parse_poly("x^2 - 2*x*y1 + 1/2", R) == x**2 - 2 * x * y1 + Fraction(1, 2)
    assert parse_poly("-(x + y2)^2", R) == -((x + y2) ** 2)
    assert parse_poly("x/3", R) == x / 3
    assert parse_poly("2^-2*x", R) == x / 4


def test_scalars():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("(t^2 - 1)/(t - 1)", QQT) == t + 1
    assert parse_scalar("t^-1", QQT) == 1 / t


def test_errors_carry_position():
    cases = [
        ("x + w", 5, "unknown identifier"),
        ("x +", 4, "expected"),
        ("x $ y1", 3, "unexpected character"),
        ("x / y1", 5, "divide"),
        ("t*x", 1, "not allowed over Q"),
        ("(x + 1", 7, "expected ')'"),
        ("x^-1", 1, "negative powers"),
        ("", 1, "empty"),
    ]
    for text, col, msg in cases:
        with pytest.raises(ParseError) as info:
            parse_poly(text, R, line=7, column=1)
        err = info.value
        assert err.line == 7 and err.column == col, (text, err)
        assert msg in str(err)
        assert str(err).startswith(f"line 7, column {col}:")


def test_column_offset():
    with pytest.raises(ParseError) as info:
        parse_poly("x + q", R, line=2, column=10)
    assert info.value.column == 14


def test_round_trip_random():
    rng = random.Random(5)
    for _ in range(100):
        p = random_poly(rng, R, max_deg=4, max_terms=5, coeff=7) / rng.choice([1, 2, 3])
        assert parse_poly(str(p), R) == p


def test_round_trip_over_qt():
    S = PolyRing(("z",), QQT)
    z = S.gen("z")
    for p in [(1 / t) * z, (t - 1 / t) * z**2 + t, -(t**2 + 1) / (t - 3) * z, S.const(-1 / t)]:
        assert parse_poly(str(p), S) == p
