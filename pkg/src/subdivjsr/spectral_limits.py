"""Periodic zero sets of non-stationary symbols and a generability test.

For a univariate symbol ``a`` used at level ``r`` the set of ``w`` with
``a(exp(-2j*pi*w / m**r)) == 0`` is a finite union of arithmetic progressions
with period ``m**r``. The zeros of the Fourier transform of a basic limit
function are the union of these sets over the levels, so a function whose
transform has zeros without periodic partners cannot be a limit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from fractions import Fraction

import numpy as np

from .laurent import LaurentPoly

__all__ = [
    "PeriodicZeroSet",
    "GenerabilityVerdict",
    "gamma_set",
    "generability_necessary_test",
    "phi_hat_zero_union",
    "polynomial_roots",
    "squarefree_parts",
]

ROOT_RESIDUAL = 1e-12


@dataclass(frozen=True)
class PeriodicZeroSet:
    level: int
    base_points: tuple[complex, ...]
    period: float

    def contains(self, w: complex, tol: float = 1e-9) -> bool:
        for b in self.base_points:
            d = complex(w) - b
            k = round(d.real / self.period)
            if abs(d - k * self.period) <= tol:
                return True
        return False

    def points_in_window(self, W: float) -> list[complex]:
        """Members with ``|Re w| <= W`` and ``|Im w| <= W``."""
        out = []
        for b in self.base_points:
            if abs(b.imag) > W:
                continue
            k_lo = math.ceil((-W - b.real) / self.period - 1e-12)
            k_hi = math.floor((W - b.real) / self.period + 1e-12)
            out.extend(b + k * self.period for k in range(k_lo, k_hi + 1))
        return out


def polynomial_roots(coeffs: Sequence[complex], polish: int = 8) -> np.ndarray:
    """Roots of ``sum coeffs[j] z**j`` (lowest degree first).

    Companion-matrix eigenvalues refined by a few Newton steps each.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    roots = np.roots(c[::-1])
    p = np.polynomial.Polynomial(c)
    dp = p.deriv()
    scale = np.abs(c).sum()
    out = []
    for z in roots:
        for _ in range(polish):
            fz = p(z)
            if abs(fz) <= ROOT_RESIDUAL * scale * max(1.0, abs(z)) ** (len(c) - 1):
                break
            d = dp(z)
            if d == 0:
                break
            step = fz / d
            # Newton may wander for clustered roots; keep the better point
            if abs(p(z - step)) < abs(fz):
                z = z - step
            else:
                break
        out.append(z)
    return np.array(out)


def _pdivmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + len(den) - 1] / den[-1]
        quot[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    rem = num[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _pgcd(a: list, b: list) -> list:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return [c / a[-1] for c in a]


def _pderiv(a: list) -> list:
    return [k * c for k, c in enumerate(a)][1:]


def squarefree_parts(coeffs: Sequence[Fraction]) -> list[tuple[list, int]]:
    """Yun's factorization of an exact polynomial (lowest degree first).

    Returns ``(factor, multiplicity)`` pairs with squarefree, pairwise coprime
    factors, so numerical roots of each factor are simple.
    """
    a = [Fraction(c) for c in coeffs]
    while a and a[-1] == 0:
        a.pop()
    if len(a) <= 1:
        return []
    out = []
    g = _pgcd(a, _pderiv(a))
    w = _pdivmod(a, g)[0]
    c = g
    k = 1
    while len(w) > 1:
        y = _pgcd(w, c)
        z = _pdivmod(w, y)[0]
        if len(z) > 1:
            out.append((z, k))
        w = y
        c = _pdivmod(c, y)[0]
        k += 1
    return out


def _coefficients(p) -> tuple[int, np.ndarray]:
    if isinstance(p, LaurentPoly):
        if p.dim != 1:
            raise ValueError("zero sets are computed for univariate symbols")
        (lo,), (hi,) = p.support()
        return lo, np.array([complex(p.coeff(k)) for k in range(lo, hi + 1)])
    items = dict(p)
    lo, hi = min(items), max(items)
    return lo, np.array([complex(items.get(k, 0)) for k in range(lo, hi + 1)])


def gamma_set(p, r: int, m: int = 2) -> PeriodicZeroSet:
    """Zero set of ``w -> p(exp(-2j*pi*w / m**r))``.

    ``p`` is a univariate LaurentPoly or a ``{exponent: complex}`` mapping.
    Each root ``z`` contributes the base point solving
    ``exp(-2j*pi*w / m**r) = z`` with real part in ``[0, m**r)``.
    """
    if isinstance(p, LaurentPoly) and p.is_zero():
        raise ValueError("the zero symbol vanishes everywhere")
    m = abs(m)
    period = float(m**r)
    if isinstance(p, LaurentPoly):
        # exact square-free split keeps repeated roots such as z = -1 accurate
        (lo,), (hi,) = p.support()
        roots = []
        for f, k in squarefree_parts([p.coeff(j) for j in range(lo, hi + 1)]):
            roots.extend(list(polynomial_roots([complex(c) for c in f])) * k)
    else:
        _, coeffs = _coefficients(p)
        # leading zeros of the shifted polynomial are roots at z = 0, excluded
        nz = np.flatnonzero(coeffs)
        coeffs = coeffs[nz[0]:] if len(nz) else coeffs
        roots = list(polynomial_roots(coeffs))
    bases = []
    for z in roots:
        if z == 0:
            continue
        w = 1j * period * cmath.log(z) / (2 * math.pi)
        re = w.real % period
        if abs(re - period) < 1e-12 * period or abs(re) < 1e-12 * period:
            re = 0.0
        bases.append(complex(re, w.imag))
    bases.sort(key=lambda b: (round(b.real, 12), round(b.imag, 12)))
    return PeriodicZeroSet(r, tuple(bases), period)


def phi_hat_zero_union(
    symbols: Sequence | Callable[[int], object],
    m: int = 2,
    window: float = 10.0,
    levels: int | None = None,
    start: int = 1,
    dedupe_tol: float = 1e-9,
) -> tuple[list[PeriodicZeroSet], list[complex]]:
    """Zero sets for levels ``start .. start + levels - 1`` and their windowed union.

    ``symbols`` is either a list (entry ``j`` is the level ``start + j``
    symbol) or a callable ``r -> symbol``. Levels past the truncation only
    contribute points of modulus at least about ``m**(start + levels - 1)``.
    Points of the last included levels can lack in-window partners once the
    window exceeds about half their period, so keep ``window`` small relative
    to ``m**(start + levels - 1)`` before feeding the union to the
    generability test.
    """
    if callable(symbols):
        if levels is None:
            raise ValueError("levels is required when symbols is a callable")
        syms = [symbols(r) for r in range(start, start + levels)]
    else:
        syms = list(symbols)[: levels if levels is not None else None]
    sets = [gamma_set(s, start + j, m) for j, s in enumerate(syms)]
    pts: list[complex] = []
    for g in sets:
        for w in g.points_in_window(window):
            if not any(abs(w - q) <= dedupe_tol for q in pts):
                pts.append(w)
    pts.sort(key=lambda w: (w.real, w.imag))
    return sets, pts


@dataclass(frozen=True)
class GenerabilityVerdict:
    verdict: str  # "consistent" | "violation" | "inconclusive"
    violations: tuple[complex, ...]
    tested: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "tested": self.tested,
            "violations": [[w.real, w.imag] for w in self.violations],
        }


def generability_necessary_test(
    zeros: Sequence[complex], m: int = 2, window: float = 20.0, r_max: int = 8, tol: float = 1e-6
) -> GenerabilityVerdict:
    """Look for zeros lacking the periodic partners every limit-function zero has.

    A zero ``w`` with ``|w| + m <= window`` passes if some ``r`` in
    ``1..r_max`` has both ``w + m**r`` and ``w - m**r`` in ``zeros``; a
    translate outside the window cannot be checked and is given the benefit of
    the doubt, but ``r`` values with both translates outside are not used.
    ``consistent`` only means no witness was found inside the window.
    """
    m = abs(m)
    zs = [complex(w) for w in zeros]
    uniq: list[complex] = []
    for w in zs:
        if not any(abs(w - q) <= 1e-9 for q in uniq):
            uniq.append(w)

    def inside(w):
        return abs(w.real) <= window + tol and abs(w.imag) <= window + tol

    def present(w):
        return any(abs(w - q) <= tol for q in uniq)

    tested, bad = 0, []
    for w in uniq:
        if abs(w) + m > window:
            continue
        tested += 1
        ok = False
        for r in range(1, r_max + 1):
            t = m**r
            plus, minus = w + t, w - t
            if not (inside(plus) or inside(minus)):
                continue
            if (present(plus) or not inside(plus)) and (present(minus) or not inside(minus)):
                ok = True
                break
        if not ok:
            bad.append(w)
    if not uniq:
        return GenerabilityVerdict("consistent", (), 0)
    if tested == 0:
        return GenerabilityVerdict("inconclusive", (), 0)
    return GenerabilityVerdict("violation" if bad else "consistent", tuple(bad), tested)
