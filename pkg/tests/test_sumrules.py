import cmath
import math
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from subdivjsr.laurent import LaurentPoly, ParamSymbol
from subdivjsr.sumrules import coset_unit_roots, cyclotomic, family_sum_rule_order, sum_rule_order

from conftest import butterfly_family, dd6, fourpoint, fourpoint_family, hat, mixture_family


def _numeric_order(p, m, cap=8):
    """Sum-rule order from floating derivatives at the coset points."""
    s = p.dim
    if abs(p(tuple([1] * s)) - m**s) > 1e-9:
        return 0
    pts = [tuple(cmath.exp(-2j * math.pi * e / m) for e in eps) for eps in coset_unit_roots(m, s)]
    k = 0
    while k < cap:
        for eta in product(range(k + 1), repeat=s):
            if sum(eta) != k:
                continue
            d = p.derivative(eta)
            if any(abs(d(z)) > 1e-8 for z in pts):
                return k
        k += 1
    return k


def test_cyclotomic_small_cases():
    assert cyclotomic(1) == (-1, 1)
    assert cyclotomic(2) == (1, 1)
    assert cyclotomic(4) == (1, 0, 1)
    assert cyclotomic(6) == (1, -1, 1)


@pytest.mark.parametrize("p, order", [(hat(), 2), (fourpoint(), 4), (dd6(), 6)])
def test_fixture_orders(p, order):
    assert sum_rule_order(p, 2).order == order
    assert _numeric_order(p, 2) == order


def test_three_sixtyfourths_has_order_two():
    assert sum_rule_order(fourpoint_family().instantiate(F(3, 64)), 2).order == 2


def test_family_order_is_vertex_minimum():
    assert family_sum_rule_order(fourpoint_family(), 2).order == 2
    assert family_sum_rule_order(mixture_family(), 2).order == 4
    assert family_sum_rule_order(butterfly_family(), 2).order == 2


def test_unnormalized_symbol_has_order_zero():
    r = sum_rule_order(LaurentPoly.var(0) * 3, 2)
    assert r.order == 0 and not r.normalized


def test_ternary_bspline():
    # (1 + z + z**2)**2 / 3 reproduces linears for m = 3
    p = LaurentPoly.from_coeffs([1, 1, 1]) ** 2 * F(1, 3)
    assert sum_rule_order(p, 3).order == 2
    assert _numeric_order(p, 3) == 2


def test_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        sum_rule_order(LaurentPoly({}, 1), 2)
    with pytest.raises(ValueError):
        coset_unit_roots(1, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3))
def test_bspline_times_factor_keeps_order(k, shift):
    z = LaurentPoly.var(0)
    p = (1 + z) ** k * F(2, 2**k)
    p = p.shift((-shift,))
    assert sum_rule_order(p, 2).order == k
    assert _numeric_order(p, 2) == k
