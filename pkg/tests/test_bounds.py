import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from evgeom.bounds import (applicable_bounds, bound, bound_4general, bound_5general,
                           bound_n_minus2, iroot)
from evgeom.constructions import build, ConstructionSpec


def floor_root_by_search(num, den, k):
    """floor((num/den)^(1/k)) by plain integer search."""
    r = 0
    while Fraction((r + 1) ** k) <= Fraction(num, den):
        r += 1
    return r


def floor_sqrt_expr(radicand, shift, den):
    """floor((sqrt(R) + c)/m) by testing candidates exactly."""
    v = -10
    while True:
        # sqrt(R) >= (v+1) m - c ?
        t = (v + 1) * den - shift
        if t <= 0 or t * t <= radicand:
            v += 1
        else:
            return v


def test_spec_values():
    assert bound_n_minus2(4, 2).value == 17
    assert bound_5general(4, 2).value == 6
    assert bound_5general(5, 3).value == 12
    assert bound_5general(6, 4).value == 31
    assert math.isqrt(32761) ** 2 == 32761


@given(st.integers(2, 8), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11]))
def test_floors_agree_with_exact_search(n, q):
    num = math.factorial(n) * (q ** (n + 1) - 1) * (q ** n - 1)
    den = (q - 1) * (q * q - 1)
    if n <= 6:
        assert bound_n_minus2(n, q).value == floor_root_by_search(num, den, n - 1) + n - 2
    r5 = 8 * q ** n + q * q - 6 * q + 1
    assert bound_5general(n, q).value == floor_sqrt_expr(r5, 3 * q - 5, 2 * (q - 1))
    r4 = 8 * q ** (n + 1) + q * q - 6 * q + 1
    assert bound_4general(n, q).value == floor_sqrt_expr(r4, q - 3, 2 * (q - 1))


@given(st.integers(0, 10 ** 40), st.integers(1, 12))
def test_iroot(x, k):
    r = iroot(x, k)
    assert r ** k <= x < (r + 1) ** k


def test_values_are_positive_and_expressions_render():
    for kind in ("n2", "g5", "g4"):
        b = bound(kind, 5, 3)
        assert b.value >= 1 and str(b.n) and b.exact_expression
        assert b.value <= b.approx < b.value + 1
    with pytest.raises(ValueError):
        bound("x", 5, 3)
    with pytest.raises(ValueError):
        bound_5general(1, 3)


def test_asymptotics():
    q = 2 ** 10
    v = bound_n_minus2(4, q).value / q ** 2
    assert abs(v / 24 ** (1 / 3) - 1) < 0.1
    w = bound_4general(5, q).value / q ** 2
    assert abs(w / math.sqrt(2) - 1) < 0.1


def test_constructed_sizes_respect_bounds():
    for fam, qs in [("hyp6", [4, 5, 7]), ("aff5", [4, 5, 7]), ("proj5", [4, 5]),
                    ("ovoid7", [2, 3]), ("pg13", [2])]:
        for q in qs:
            X = build(ConstructionSpec(fam, q))
            for b in applicable_bounds(fam, q):
                assert len(X) <= b.value, (fam, q, b)
    assert 13 <= bound_5general(6, 4).value
    assert 14 <= bound_4general(5, 4).value
    assert 63 <= bound_4general(13, 2).value
