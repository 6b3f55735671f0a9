import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import ZZ_I

from blaschke_dyn.errors import DomainError
from blaschke_dyn.gaussian import (
    GaussianRational,
    canonical_associate,
    format_gaussian,
    g_divmod,
    g_gcd,
    g_norm,
    naive_height,
    parse_gaussian,
)

ints = st.integers(-10**12, 10**12)
gints = st.tuples(ints, ints)
nonzero_gints = gints.filter(lambda a: a != (0, 0))
fracs = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**6)
qi = st.builds(lambda a, b: GaussianRational.from_parts(a, b), fracs, fracs)


def _pair(x):
    return x.parts()


def _mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


@settings(max_examples=200, deadline=None)
@given(gints, nonzero_gints)
def test_divmod_remainder_small(a, b):
    q, r = g_divmod(a, b)
    assert _mul(q, b)[0] + r[0] == a[0] and _mul(q, b)[1] + r[1] == a[1]
    assert 2 * g_norm(r) <= g_norm(b)


@settings(max_examples=200, deadline=None)
@given(gints, gints)
def test_gcd_matches_sympy_up_to_units(a, b):
    mine = g_gcd(a, b)
    ref = ZZ_I.gcd(ZZ_I(*a), ZZ_I(*b))
    assert g_norm(mine) == int(ref.x) ** 2 + int(ref.y) ** 2
    if mine != (0, 0):
        assert canonical_associate(mine) == mine
        assert canonical_associate((int(ref.x), int(ref.y))) == mine


@settings(max_examples=200, deadline=None)
@given(qi, qi)
def test_field_arithmetic_against_fractions(x, y):
    (a, b), (c, d) = _pair(x), _pair(y)
    assert _pair(x + y) == (a + c, b + d)
    assert _pair(x - y) == (a - c, b - d)
    assert _pair(x * y) == (a * c - b * d, a * d + b * c)
    if not y.is_zero:
        n = c * c + d * d
        assert _pair(x / y) == ((a * c + b * d) / n, (b * c - a * d) / n)


@settings(max_examples=200, deadline=None)
@given(qi)
def test_lowest_terms_and_canonical_denominator(x):
    assert g_gcd(x.num, x.den) == (1, 0)
    assert x.den[0] > 0 and x.den[1] >= 0
    # equal values are equal objects with equal hashes
    y = GaussianRational(_mul(x.num, (3, 7)), _mul(x.den, (3, 7)))
    assert y == x and hash(y) == hash(x)


@settings(max_examples=200, deadline=None)
@given(qi)
def test_text_round_trip(x):
    assert parse_gaussian(format_gaussian(x)) == x


def test_parse_forms():
    assert parse_gaussian("1/2") == GaussianRational.from_parts(Fraction(1, 2))
    assert parse_gaussian("-3/4*i") == GaussianRational.from_parts(0, Fraction(-3, 4))
    assert parse_gaussian("1/2 + 1/3 i") == GaussianRational.from_parts(Fraction(1, 2), Fraction(1, 3))
    assert parse_gaussian("i") == GaussianRational((0, 1))
    assert parse_gaussian("inf").is_infinite
    for bad in ("", "1/2 1/3", "abc", "*i", "1//2"):
        with pytest.raises((DomainError, ValueError, ZeroDivisionError)):
            parse_gaussian(bad)


def test_format_forms():
    assert format_gaussian(GaussianRational((0, 1))) == "i"
    assert format_gaussian(GaussianRational((0, -1))) == "-i"
    assert format_gaussian(GaussianRational.from_parts(Fraction(1, 2), Fraction(-1, 3))) == "1/2-1/3*i"
    assert str(GaussianRational.infinity()) == "inf"


def test_infinity_behaviour():
    inf = GaussianRational.infinity()
    assert GaussianRational((5, 0), (0, 0)) == inf
    assert -inf is inf
    with pytest.raises(DomainError):
        inf + 1
    with pytest.raises(DomainError):
        GaussianRational((0, 0), (0, 0))
    with pytest.raises(ZeroDivisionError):
        GaussianRational((1, 0)) / 0


def test_naive_height_examples():
    assert naive_height("3/5") == pytest.approx(math.log(5), abs=1e-15)
    assert naive_height("1/2*i") == pytest.approx(math.log(2), abs=1e-15)
    half = GaussianRational((1, 1), (2, 0))
    # (1+i)/2 = 1/(1-i) in lowest terms
    assert g_norm(half.num) == 1 and g_norm(half.den) == 2
    assert naive_height(half) == pytest.approx(0.5 * math.log(2), abs=1e-15)
    assert naive_height(0) == 0.0
    assert naive_height("inf") == 0.0


@settings(max_examples=100, deadline=None)
@given(qi)
def test_height_nonnegative_and_inversion_invariant(x):
    assert naive_height(x) >= 0
    if not x.is_zero:
        assert naive_height(1 / x) == pytest.approx(naive_height(x), abs=1e-12)
