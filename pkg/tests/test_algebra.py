import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotbeta.algebra import (
    FieldError,
    NumberField,
    ParseError,
    QuadraticExtension,
    RATIONALS,
    is_pisot,
    parse_element,
)

SQRT2 = NumberField([1, 0, -2], name="r", approx=1.414)
CUBIC = NumberField([1, -2, -1, 1], name="b", approx=1.8)


def _random_elements(K, rng, n):
    num = rng.integers(-20, 21, size=(n, K.degree))
    den = rng.integers(1, 9, size=n)
    return [K.from_coeffs([Fraction(int(c), int(d)) for c in row]) for row, d in zip(num, den)]


def test_ring_axioms_on_random_triples():
    rng = np.random.default_rng(1)
    K = CUBIC
    n = 10_000
    xs, ys, zs = (_random_elements(K, rng, n) for _ in range(3))
    for x, y, z in zip(xs, ys, zs):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert x - x == K.zero
        if x:
            assert x * x.inverse() == K.one


def test_field_operations_agree_with_floats():
    rng = np.random.default_rng(2)
    for x, y in zip(_random_elements(CUBIC, rng, 200), _random_elements(CUBIC, rng, 200)):
        assert math.isclose(float(x * y), float(x) * float(y), rel_tol=1e-9, abs_tol=1e-9)
        assert math.isclose(float(x + y), float(x) + float(y), rel_tol=1e-9, abs_tol=1e-9)


@settings(max_examples=300, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 1000))
def test_floor_of_a_plus_b_sqrt2(a, b, d):
    # oracle: floor((a + b*sqrt2)/d) from integer square roots
    x = SQRT2.from_coeffs([Fraction(a, d), Fraction(b, d)])
    m = 2 * b * b
    r = math.isqrt(m)
    exact = r * r == m
    # b*sqrt2 lies in [r, r+1) for b >= 0, mirrored for b < 0
    lo = a + (r if b >= 0 else -r - (0 if exact else 1))
    hi = lo if exact else lo + 1
    if lo == hi:
        assert x.floor() == math.floor(Fraction(lo, d))
    else:
        assert math.floor(Fraction(lo, d)) <= x.floor() <= math.floor(Fraction(hi, d))
        assert x.floor() <= x < x.floor() + 1
    assert x.ceil() - 1 < x <= x.ceil()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=3, max_size=3), st.integers(1, 30))
def test_floor_brackets_element(coeffs, d):
    x = CUBIC.from_coeffs([Fraction(c, d) for c in coeffs])
    f = x.floor()
    assert f <= x < f + 1
    assert f == math.floor(float(x)) or abs(float(x) - round(float(x))) < 1e-9


def test_golden_ratio_identities():
    K = NumberField([1, -1, -1], name="w")
    w = K.gen
    assert w * w == w + 1
    assert w.inverse() == w - 1
    assert (w**5).floor() == 11
    assert w.sign() == 1 and (1 - w).sign() == -1
    assert abs(float(w) - (1 + 5**0.5) / 2) < 1e-15


def test_conjugates_of_golden_ratio():
    K = NumberField([1, -1, -1], name="w")
    vals = sorted(v.real for v in K.gen.conjugate_values())
    assert abs(vals[0] - (1 - 5**0.5) / 2) < 1e-12
    assert abs(vals[1] - (1 + 5**0.5) / 2) < 1e-12


def test_is_pisot():
    assert is_pisot([1, -1, -1])
    assert is_pisot([1, -2, -1])
    assert is_pisot([1, -1, 0, -1])
    assert not is_pisot([1, -1, -1, -1, 1])  # Salem
    assert not is_pisot([1, 0, -2])


def test_reducible_polynomial_rejected():
    with pytest.raises(FieldError):
        NumberField([1, 0, -4])


def test_parse_element():
    K = NumberField([1, -2, -1], name="beta", approx=2.4)
    x = parse_element("3 - beta", K)
    assert x == 3 - K.gen
    assert parse_element("(beta - 1)^2", K) == K.from_coeffs([2])
    assert parse_element("1/2 + beta/4", K) == K.from_coeffs([Fraction(1, 2), Fraction(1, 4)])
    with pytest.raises(ParseError):
        parse_element("beta +* 2", K)
    with pytest.raises(ParseError):
        parse_element("gamma", K)


def test_rationals_field():
    x = RATIONALS.coerce(Fraction(7, 3))
    assert x.floor() == 2 and x.ceil() == 3
    assert x.is_rational() and x.to_fraction() == Fraction(7, 3)


def test_quadratic_extension_golden():
    E = QuadraticExtension(RATIONALS, 1, 1)
    w = E.gen
    assert w * w == w + 1
    assert w.sigma() == 1 - w
    assert w.norm() == -1
    b = E.coerce(3)
    assert (b * w).floor() == 4
    assert (-(b * w)).floor() == -5
    assert (w.sigma()).sign() == -1
