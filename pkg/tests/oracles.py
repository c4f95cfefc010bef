"""Independent reference computations used to check the library.

These are deliberately naive: dictionary convolution, explicit enumeration of
all products, plain bisection. They share no code with the package.
"""

from fractions import Fraction
from itertools import product
import math

import mpmath
import numpy as np


def poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def brute_jsr(mats, k):
    """(max rho(P)**(1/k), max ||P||_2**(1/k)) over all products of length k."""
    lo = hi = 0.0
    for word in product(range(len(mats)), repeat=k):
        P = np.eye(mats[0].shape[0])
        for i in word:
            P = mats[i] @ P
        lo = max(lo, max(abs(np.linalg.eigvals(P))) ** (1 / k))
        hi = max(hi, np.linalg.norm(P, 2) ** (1 / k))
    return lo, hi


def subdivide_naive(c: dict, mask: dict, m=2) -> dict:
    """(S c)(alpha) = sum_beta a(alpha - m beta) c(beta) by direct summation."""
    out = {}
    for beta, cb in c.items():
        for k, a in mask.items():
            alpha = m * beta + k
            out[alpha] = out.get(alpha, 0) + a * cb
    return out


def _j0(x):
    # power series, fine at 40 digits for x < 25
    with mpmath.workdps(60):
        x = mpmath.mpf(x)
        term, total, k = mpmath.mpf(1), mpmath.mpf(1), 0
        while abs(term) > mpmath.mpf(10) ** -50:
            k += 1
            term *= -(x / 2) ** 2 / (k * k)
            total += term
        return total


def j0_zeros(count, step=0.05, tol=1e-13):
    """Positive zeros of J0 found by sign scan and bisection of its power series."""
    zeros, x = [], step
    fx = _j0(x)
    while len(zeros) < count:
        y = x + step
        fy = _j0(y)
        if fx * fy < 0:
            a, b, fa = x, y, fx
            while b - a > tol:
                c = (a + b) / 2
                fc = _j0(c)
                if fa * fc <= 0:
                    b = c
                else:
                    a, fa = c, fc
            zeros.append((a + b) / 2)
        x, fx = y, fy
    return zeros


def cyclic_support(supports, m=2, terms=200):
    """Partial sums of sum_k m**-(k+1) l(k), with the last entry repeated."""
    lo = hi = Fraction(0)
    for k in range(terms):
        l, r = supports[min(k, len(supports) - 1)]
        lo += Fraction(l, m ** (k + 1))
        hi += Fraction(r, m ** (k + 1))
    return lo, hi
