from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lineorder.dyadic import Dyadic, HALF, ONE, ZERO


def dy(n, e=0):
    return Dyadic(n, e)


dyadics = st.builds(Dyadic, st.integers(-(2**40), 2**40), st.integers(0, 40))


def test_basic_arithmetic():
    assert dy(3, 3) + dy(1, 3) == HALF          # 3/8 + 1/8 = 1/2
    assert dy(3, 2) * HALF == dy(3, 3)          # 3/4 * 1/2 = 3/8
    x = dy(13, 5)
    assert x - x == ZERO
    assert dy(1, 1) + dy(1, 1) == ONE
    assert -dy(3, 2) == dy(-3, 2)


def test_normalization_unique():
    assert Dyadic(4, 2) == Dyadic(1, 0)
    assert Dyadic(4, 2).exp == 0
    assert Dyadic(6, 3) == Dyadic(3, 2)
    assert Dyadic(0, 7) == ZERO and Dyadic(0, 7).exp == 0
    assert Dyadic(-8, 3) == Dyadic(-1, 0)


@given(dyadics, dyadics)
def test_arith_matches_fractions(a, b):
    assert (a + b).to_fraction() == a.to_fraction() + b.to_fraction()
    assert (a - b).to_fraction() == a.to_fraction() - b.to_fraction()
    assert (a * b).to_fraction() == a.to_fraction() * b.to_fraction()


@given(dyadics, dyadics, dyadics)
def test_order_compatible_with_addition(x, y, z):
    if x < y:
        assert x + z < y + z


@given(dyadics)
def test_result_is_normalized(x):
    y = x + x
    assert y.exp == 0 or y.num % 2 == 1


def test_floor():
    assert dy(3, 1).floor() == 1
    assert dy(-1, 2).floor() == -1
    assert dy(2).floor() == 2
    assert dy(3, 1).ceil() == 2
    assert dy(-1, 2).ceil() == 0


def test_log2():
    assert HALF.log2() == -1
    assert dy(4).log2() == 2
    assert dy(3, 2).log2() is None
    assert ONE.log2() == 0
    with pytest.raises(ValueError):
        ZERO.log2()
    with pytest.raises(ValueError):
        dy(-2).log2()


def test_div_exact():
    assert dy(3, 3).div_exact(dy(3, 2)) == HALF
    assert dy(1).div_exact(dy(1, 2)) == dy(4)
    assert dy(6).div_exact(dy(3)) == dy(2)
    with pytest.raises(ValueError):
        dy(1).div_exact(dy(3))
    with pytest.raises(ValueError):
        dy(1).div_exact(ZERO)


def test_mul_pow2_and_half():
    assert dy(3, 2).mul_pow2(2) == dy(3)
    assert dy(3).mul_pow2(-1) == dy(3, 1)
    assert dy(3, 1).half() == dy(3, 2)


def test_parse_and_str_roundtrip():
    for s in ["3/2^3", "-5/2^1", "7", "-2", "0"]:
        assert str(Dyadic.parse(s)) == s
    assert Dyadic.parse("0.3125") == dy(5, 4)
    assert Dyadic.parse("-0.5") == dy(-1, 1)
    assert Dyadic.parse("2.0") == dy(2)
    with pytest.raises(ValueError):
        Dyadic.parse("0.1")
    with pytest.raises(ValueError):
        Dyadic.parse("1/3")


def test_decimal_str_exact():
    assert dy(5, 4).decimal_str() == "0.3125"
    assert dy(-3, 1).decimal_str() == "-1.5"
    assert dy(7).decimal_str() == "7"


def test_int_interop():
    assert dy(1, 1) + 1 == dy(3, 1)
    assert 2 * dy(1, 2) == HALF
    assert 1 - HALF == HALF
    assert HALF < 1 and dy(5, 1) > 2


def test_floor_div():
    assert dy(5, 1).floor_div(2) == 1   # 2.5 / 2
    assert dy(-1, 1).floor_div(3) == -1
    assert dy(6).floor_div(3) == 2


def test_from_fraction():
    assert Dyadic.from_fraction(Fraction(3, 8)) == dy(3, 3)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))
