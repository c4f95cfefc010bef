"""Sum-rule order of symbols and symbol families.

Values at the coset points ``xi**eps`` (``xi = exp(-2*pi*i/m)``) are computed
exactly: every monomial becomes a power of ``xi`` and the resulting integer
polynomial is reduced modulo the m-th cyclotomic polynomial, which is the
minimal polynomial of ``xi`` over the rationals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .laurent import LaurentPoly, ParamSymbol

__all__ = [
    "SumRuleResult",
    "coset_unit_roots",
    "cyclotomic",
    "family_sum_rule_order",
    "sum_rule_order",
]


@dataclass(frozen=True)
class SumRuleResult:
    order: int
    normalized: bool
    residual: float


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Integer coefficients (lowest degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x**n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _divide_int(num, list(cyclotomic(d)))
    return tuple(num)


def _divide_int(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        quot[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return quot


def _reduce(coeffs: dict[int, Fraction], m: int) -> list[Fraction]:
    """Reduce ``sum c_k x**k`` (k taken mod m) modulo the m-th cyclotomic polynomial."""
    poly = [Fraction(0)] * m
    for k, c in coeffs.items():
        poly[k % m] += c
    phi = cyclotomic(m)
    deg = len(phi) - 1
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            # phi is monic
            for j, d in enumerate(phi):
                poly[i - deg + j] -= c * d
    return poly[:deg]


def coset_unit_roots(m: int, s: int) -> list[tuple[int, ...]]:
    """Coset points other than ``(1, ..., 1)``, as exponent tuples mod ``|m|``.

    The tuple ``eps`` stands for the point ``(xi**eps_1, ..., xi**eps_s)`` with
    ``xi = exp(-2*pi*i/|m|)``.
    """
    m = abs(m)
    if m < 2:
        raise ValueError("|m| must be at least 2")
    return [eps for eps in product(range(m), repeat=s) if any(eps)]


def coset_point(eps, m: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(-2j * math.pi * e / abs(m)) for e in eps)


def _is_zero_at(p: LaurentPoly, eps, m: int) -> bool:
    powers: dict[int, Fraction] = {}
    for exp, c in p.items():
        k = sum(e * a for e, a in zip(eps, exp))
        powers[k] = powers.get(k, Fraction(0)) + c
    return not any(_reduce(powers, m))


def _multi_indices(total: int, s: int):
    if s == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _multi_indices(total - first, s - 1):
            yield (first,) + rest


def sum_rule_order(p: LaurentPoly, m: int) -> SumRuleResult:
    """Largest ``k`` such that ``p`` satisfies sum rules of order ``k``.

    ``k = 0`` with ``normalized=False`` means ``p(1, ..., 1) != |m|**s``.
    ``residual`` is the largest ``|D**eta p|`` at the coset points over the
    first derivative order that fails (0 when the cap is reached).
    """
    if p.is_zero():
        raise ValueError("sum rules are undefined for the zero polynomial")
    m_abs = abs(m)
    s = p.dim
    points = coset_unit_roots(m_abs, s)
    value_at_one = sum(c for _, c in p.items())
    if value_at_one != m_abs**s:
        return SumRuleResult(0, False, abs(float(value_at_one) - m_abs**s))
    cap = 1 + p.total_degree_span()
    order = 0
    while order < cap:
        failed = []
        for eta in _multi_indices(order, s):
            d = p.derivative(eta)
            for eps in points:
                if not _is_zero_at(d, eps, m_abs):
                    failed.append(abs(d.evaluate(coset_point(eps, m_abs))))
        if failed:
            return SumRuleResult(order, True, float(max(failed)))
        order += 1
    return SumRuleResult(order, True, 0.0)


def family_sum_rule_order(ps: ParamSymbol, m: int) -> SumRuleResult:
    """Minimum sum-rule order over the vertices of the parameter polytope.

    The conditions are linear in the mask, so the minimum over the vertices is
    also the minimum over the whole polytope.
    """
    results = [sum_rule_order(v, m) for v in ps.vertex_symbols()]
    worst = min(results, key=lambda r: (r.order, -r.residual))
    return SumRuleResult(
        worst.order, all(r.normalized for r in results), max(r.residual for r in results if r.order == worst.order)
    )
