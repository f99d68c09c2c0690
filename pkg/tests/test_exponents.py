"""Exact total order on Q + Q*sqrt(d) exponents."""

import random
from fractions import Fraction

import pytest

from mustab.errors import FieldMismatch
from mustab.exponents import EXP_ZERO, Exponent, exp


def test_basic_order():
    assert exp("1/2") < exp(1)
    assert Exponent(Fraction(0), Fraction(1), 2) > exp(1)          # sqrt2 > 1
    assert Exponent(Fraction(0), Fraction(1), 2) < exp(2)          # sqrt2 < 2
    assert Exponent(Fraction(3), Fraction(-2), 2) > EXP_ZERO       # 3 - 2 sqrt2 > 0
    assert Exponent(Fraction(1), Fraction(-1), 2) < exp(0)         # 1 - sqrt2 < 0


def test_addition_compatible_with_order():
    x = Exponent(Fraction(1, 3), Fraction(1, 2), 2)   # ~1.040
    y = Exponent(Fraction(-1), Fraction(1), 2)        # ~0.414
    z = Exponent(Fraction(2), Fraction(0))
    assert y < x
    assert (y + z) < (x + z)


def test_mixed_d_rejected():
    with pytest.raises(FieldMismatch):
        Exponent(Fraction(0), Fraction(1), 2) + Exponent(Fraction(0), Fraction(1), 3)


def test_rational_interop():
    assert (exp("1/2") + exp("1/3")) == exp("5/6")
    s = Exponent(Fraction(0), Fraction(1), 2)
    assert (s - s) == EXP_ZERO
    assert s.scale(Fraction(1, 2)) + s.scale(Fraction(1, 2)) == s


def test_parse_roundtrip():
    for text in ["3", "-5/2", "1/2+1/3*sqrt(2)", "sqrt(2)", "-sqrt(2)", "2-sqrt(2)"]:
        e = Exponent.parse(text)
        assert Exponent.parse(str(e)) == e


def test_comparison_agrees_with_high_precision_sqrt2():
    # oracle: rational approximation of sqrt(2) to 60 digits
    sqrt2 = Fraction(
        1414213562373095048801688724209698078569671875376948073176680,
        10**60,
    )
    rng = random.Random(42)
    for _ in range(1000):
        a1 = Fraction(rng.randrange(-50, 51), rng.randrange(1, 20))
        b1 = Fraction(rng.randrange(-50, 51), rng.randrange(1, 20))
        a2 = Fraction(rng.randrange(-50, 51), rng.randrange(1, 20))
        b2 = Fraction(rng.randrange(-50, 51), rng.randrange(1, 20))
        x = Exponent(a1, b1, 2)
        y = Exponent(a2, b2, 2)
        approx_x = a1 + b1 * sqrt2
        approx_y = a2 + b2 * sqrt2
        if approx_x == approx_y:
            continue  # genuinely equal only when components match
        assert (x < y) == (approx_x < approx_y), f"{x} vs {y}"


def test_denominator():
    assert exp("3/4").denominator == 4
    assert Exponent(Fraction(1, 2), Fraction(1, 3), 2).denominator == 6
