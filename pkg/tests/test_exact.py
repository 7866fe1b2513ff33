from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from efftop.exact import Alg, amax, amin, rational_sqrt

getcontext().prec = 80

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=50)
radicand = st.fractions(min_value=0, max_value=30, max_denominator=20)


def dec(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def approx(terms) -> Decimal:
    # independent high-precision evaluation of sum(c * sqrt(r))
    return sum((dec(c) * dec(r).sqrt() for c, r in terms), Decimal(0))


def build(terms) -> Alg:
    return sum((c * Alg.sqrt(r) for c, r in terms), Alg.of(0))


@given(st.lists(st.tuples(small_q, radicand), max_size=4))
def test_sign_matches_high_precision(terms):
    a = build(terms)
    v = approx(terms)
    if abs(v) > Decimal(10) ** -40:
        assert a.sign() == (1 if v > 0 else -1)


def test_sign_of_cancelling_sums():
    assert (Alg.sqrt(8) - 2 * Alg.sqrt(2)).sign() == 0
    assert (Alg.sqrt(2) + Alg.sqrt(3) - Alg.sqrt(5 + 2 * Fraction(0))).sign() == 1
    # (sqrt2 + sqrt3)^2 = 5 + 2 sqrt6
    x = Alg.sqrt(2) + Alg.sqrt(3)
    assert x * x == 5 + 2 * Alg.sqrt(6)


@given(st.fractions(min_value=0, max_value=1000, max_denominator=1000))
def test_sqrt_squares_back(q):
    s = Alg.sqrt(q)
    assert s * s == q
    assert s >= 0


@given(st.lists(st.tuples(small_q, radicand), max_size=3), st.integers(1, 60))
def test_lower_brackets(terms, bits):
    a = build(terms)
    q = a.lower(bits)
    assert q <= a < q + Fraction(1, 2 ** bits)


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_negative_sqrt_rejected():
    with pytest.raises(ValueError):
        Alg.sqrt(-1)


def test_min_max_and_conversion():
    a, b = Alg.sqrt(2), Alg.of(Fraction(3, 2))
    assert amin(a, b) == a and amax(a, b) == b
    assert b.to_fraction() == Fraction(3, 2)
    with pytest.raises(ValueError):
        a.to_fraction()
    assert abs(-a) == a
    assert float(a) == pytest.approx(2 ** 0.5)
