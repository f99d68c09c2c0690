"""Scalar arithmetic over Q, Q(sqrt d), F_p, F_q."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mustab.errors import DivisionByZero, FieldMismatch
from mustab.fields import QQ, FieldSpec

QS2 = FieldSpec("QSqrt", d=2)
F5 = FieldSpec("Fp", p=5)
F9 = FieldSpec("Fq", p=3, modulus=(1, 0, 1))  # x^2 + 1 over F_3


def test_construction_guards():
    with pytest.raises(ValueError):
        FieldSpec("QSqrt", d=4)  # perfect square
    with pytest.raises(ValueError):
        FieldSpec("Fp", p=6)
    with pytest.raises(ValueError):
        FieldSpec("Fq", p=5, modulus=(1, 0, 1))  # x^2+1 = (x-2)(x-3) over F_5


def test_difference_of_squares_in_qsqrt2():
    one = QS2.one()
    s = QS2.sqrt_d()
    assert (one + s) * (one - s) == -one


def test_inverse_of_two_in_f5():
    assert F5.from_int(2).inv() == F5.from_int(3)


def test_fraction_addition():
    a = QQ.from_fraction(Fraction(2, 3))
    b = QQ.from_fraction(Fraction(1, 6))
    assert a + b == QQ.from_fraction(Fraction(5, 6))


def test_inv_zero_raises():
    with pytest.raises(DivisionByZero):
        QQ.zero().inv()


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        QQ.one() + F5.one()


def test_fq_arithmetic_and_inverse():
    w = F9.generator()
    # w^2 = -1 in F_9
    assert w * w == -F9.one()
    for a in F9.elements():
        if not a.is_zero():
            assert (a * a.inv()).is_one()


def test_canonical_forms_are_unique():
    assert F5.from_int(7) == F5.from_int(2)
    assert QQ.from_fraction(Fraction(2, 4)) == QQ.from_fraction(Fraction(1, 2))


def test_sqrt_in_each_field():
    assert QQ.from_fraction(Fraction(9, 4)).sqrt() == QQ.from_fraction(Fraction(3, 2))
    assert QQ.from_int(2).sqrt() is None
    # (1 + sqrt2)^2 = 3 + 2 sqrt2
    x = QS2.one() + QS2.sqrt_d()
    sq = x * x
    r = sq.sqrt()
    assert r is not None and r * r == sq
    assert F5.from_int(4).sqrt() is not None
    assert F5.from_int(2).sqrt() is None  # 2 is not a QR mod 5
    for a in F9.elements():
        sq = a * a
        r = sq.sqrt()
        assert r is not None and r * r == sq


def test_kth_root():
    assert QQ.from_int(8).kth_root(3) == QQ.from_int(2)
    assert F5.from_int(2).kth_root(3) == F5.from_int(3)  # 3^3 = 27 = 2 mod 5


@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40))
def test_field_axioms_qsqrt(a, b, c):
    x = QS2.from_int(a) + QS2.sqrt_d() * QS2.from_int(b)
    y = QS2.from_int(c) - QS2.sqrt_d()
    assert x * y == y * x
    assert (x + y) * y == x * y + y * y
    if not x.is_zero():
        assert (x * x.inv()).is_one()


@given(st.integers(0, 8), st.integers(0, 8))
def test_field_axioms_f9(i, j):
    xs = list(F9.elements())
    x, y = xs[i], xs[j]
    assert x * y == y * x
    assert x + y == y + x
    assert (x + y) * x == x * x + y * x


def test_scalar_str_roundtrip():
    from mustab.poly import parse_scalar

    for field, text in [
        (QQ, "5/6"),
        (QQ, "-7"),
        (QS2, "1+2*sqrt(2)"),
        (QS2, "-1/2*sqrt(2)"),
        (F5, "3"),
        (F9, "2*w+1"),
    ]:
        s = parse_scalar(text, field)
        assert parse_scalar(str(s), field) == s
