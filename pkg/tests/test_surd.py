import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lomse.surd import Surd, conjugate_pair

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=50)


def test_canonical_zero_radical():
    assert Surd(3, 5, 0) == Surd(3)
    assert Surd(3, 0, 1) == Surd(3)


def test_rationality():
    assert Surd.sqrt(Fraction(9, 4)).is_rational
    assert not Surd.sqrt(2).is_rational
    assert not Surd.sqrt(-1).is_real


def test_str_and_float():
    x = Surd(1, 2, -1)
    assert str(x) == "1 - sqrt(2)"
    assert float(x) == pytest.approx(1 - 2 ** 0.5, abs=1e-15)
    with pytest.raises(TypeError):
        float(Surd.sqrt(-2))


def test_mixed_radicands_rejected():
    with pytest.raises(ValueError):
        Surd.sqrt(2) + Surd.sqrt(3)


@given(fracs, fracs)
def test_pair_sum_is_rational(center, q):
    a, b = conjugate_pair(center, q)
    assert a + b == Surd(2 * center)
    assert a - b == Surd(0, 4 * q, 1)


@given(fracs, fracs, fracs.filter(lambda c: c != 0))
def test_complex_value_matches(center, q, c):
    a, _ = conjugate_pair(center, q)
    expected = (complex(center) + cmath.sqrt(float(q))) * float(c)
    assert abs(complex(a * c) - expected) <= 1e-12 * (1 + abs(expected))


@given(fracs, fracs)
def test_negation_and_conjugate_involutions(center, q):
    a, _ = conjugate_pair(center, q)
    assert -(-a) == a
    assert a.conjugate().conjugate() == a
    assert (a / 3) * 3 == a
