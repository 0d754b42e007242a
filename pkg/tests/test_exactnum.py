import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ballpack.exactnum import (
    RING_Z,
    RING_Z_PHI,
    RING_Z_SQRT2,
    QuadScalar,
    approx,
    is_ring_integer,
    phi,
    sqrt_if_expressible,
    sqrt_int,
)

SQRT2 = sqrt_int(2)
SQRT5 = sqrt_int(5)
PHI = phi()

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def quads(m):
    return st.builds(lambda a, b: QuadScalar(a, b, m), rationals, rationals)


def test_defining_relations():
    assert SQRT2 * SQRT2 == 2
    assert SQRT5 * SQRT5 == 5
    one_plus = QuadScalar(1, 1, 5)
    assert one_plus * one_plus == QuadScalar(6, 2, 5)
    assert PHI * PHI == PHI + 1


def test_identity_and_rational_mixing():
    x = QuadScalar(Fraction(3, 7), Fraction(-2, 5), 2)
    assert x * 1 == x
    assert x + 0 == x
    assert (x * 2) / 2 == x
    assert 1 - x == QuadScalar(Fraction(4, 7), Fraction(2, 5), 2)


def test_field_mixing_rejected():
    with pytest.raises(ValueError):
        _ = SQRT2 + SQRT5
    with pytest.raises(ValueError):
        _ = SQRT2 * SQRT5


def test_float_mixing_rejected():
    with pytest.raises(TypeError):
        _ = SQRT2 + 0.5
    with pytest.raises(TypeError):
        _ = 0.5 * SQRT2


def test_division():
    x = QuadScalar(1, 1, 5)
    assert x / x == 1
    assert 1 / PHI == PHI - 1
    with pytest.raises(ZeroDivisionError):
        _ = x / QuadScalar(0)


def test_comparisons_exact():
    # sqrt2 < 1.5 < phi ... done exactly
    assert SQRT2 < Fraction(3, 2)
    assert QuadScalar(Fraction(3, 2)) < PHI
    assert PHI < SQRT5
    assert abs(QuadScalar(0, -1, 2)) == SQRT2
    assert (PHI - PHI).sign() == 0


def test_sqrt_examples():
    assert sqrt_if_expressible(QuadScalar(4), m=2) == 2
    assert sqrt_if_expressible(QuadScalar(6, 2, 5)) == QuadScalar(1, 1, 5)
    assert sqrt_if_expressible(QuadScalar(3), m=2) is None
    assert sqrt_if_expressible(QuadScalar(2), m=2) == SQRT2
    assert sqrt_if_expressible(QuadScalar(0)) == 0
    with pytest.raises(ValueError):
        sqrt_if_expressible(QuadScalar(-1))


def test_sqrt_of_phi_powers():
    # phi^2 = phi + 1 and phi^4 both have roots in Q(sqrt5)
    assert sqrt_if_expressible(PHI * PHI) == PHI
    assert sqrt_if_expressible(PHI ** 4) == PHI * PHI


def test_ring_membership():
    assert is_ring_integer(QuadScalar(3, 0, None), RING_Z)
    assert not is_ring_integer(Fraction(1, 2), RING_Z)
    assert is_ring_integer(PHI, RING_Z_PHI)
    assert is_ring_integer(QuadScalar(2, -3, 5), RING_Z_PHI)
    assert not is_ring_integer(QuadScalar(Fraction(1, 2), 0, None), RING_Z_SQRT2)
    assert is_ring_integer(QuadScalar(7, -2, 2), RING_Z_SQRT2)
    assert not is_ring_integer(QuadScalar(Fraction(1, 2), Fraction(1, 3), 5), RING_Z_PHI)
    with pytest.raises(ValueError):
        is_ring_integer(SQRT2, RING_Z_PHI)


def test_approx():
    assert approx(QuadScalar(0, 1, 2)) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert approx(QuadScalar(1, 1, 5)) == pytest.approx(1 + math.sqrt(5), abs=1e-15)
    assert approx(QuadScalar(7)) == 7.0
    assert approx(0.25) == 0.25


@given(quads(2), quads(2), quads(2))
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


@given(quads(5))
def test_sqrt_roundtrip(y):
    assert sqrt_if_expressible(y * y, m=5) == abs(y)


@given(quads(3), quads(3))
def test_division_inverts_multiplication(x, y):
    if y != 0:
        assert (x * y) / y == x


@given(quads(2))
def test_approx_homomorphism(x):
    fx = approx(x)
    assert approx(x + x) == pytest.approx(2 * fx, rel=1e-12, abs=1e-12)
    assert approx(x * x) == pytest.approx(fx * fx, rel=1e-12, abs=1e-12)


@given(quads(5), quads(5))
def test_sign_consistent_with_float(x, y):
    d = (x - y).sign()
    fd = approx(x) - approx(y)
    if abs(fd) > 1e-9:
        assert d == (1 if fd > 0 else -1)
