"""Exact multivariate Laurent polynomials, masks and affine symbol families.

Coefficients are stored as :class:`fractions.Fraction`; floating point only
enters when a polynomial is evaluated at a complex point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from numbers import Number, Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "LaurentPoly",
    "Mask",
    "ParamSymbol",
    "as_fraction",
    "to_mask",
    "to_symbol",
]


def as_fraction(value) -> Fraction:
    """Convert ints, floats, decimal strings and ``"p/q"`` strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Rational, str)):
        return Fraction(value.strip() if isinstance(value, str) else value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coefficient {value!r}")
        return Fraction(value)
    if isinstance(value, Number):
        return Fraction(float(value))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class LaurentPoly:
    """Sparse Laurent polynomial in ``dim`` variables with rational coefficients.

    Parameters
    ----------
    terms : mapping
        ``{exponent tuple: coefficient}``. Zero coefficients are dropped.
    dim : int, optional
        Number of variables. Inferred from the exponents when omitted.

    Examples
    --------
    >>> z = LaurentPoly.var(0, 1)
    >>> (1 + z) * (1 + z)
    LaurentPoly(dim=1, {(0,): 1, (1,): 2, (2,): 1})
    """

    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), dim: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in items:
            exp = (int(exp),) if isinstance(exp, (int, np.integer)) else tuple(int(e) for e in exp)
            if dim is None:
                dim = len(exp)
            elif len(exp) != dim:
                raise ValueError(f"exponent {exp} does not have length {dim}")
            c = as_fraction(coeff)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        if dim is None:
            raise ValueError("dimension of an empty polynomial must be given")
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.dim = dim
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c, dim: int = 1) -> "LaurentPoly":
        return cls({(0,) * dim: c}, dim)

    @classmethod
    def var(cls, i: int, dim: int = 1) -> "LaurentPoly":
        exp = [0] * dim
        exp[i] = 1
        return cls({tuple(exp): 1}, dim)

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "LaurentPoly":
        exp = tuple(exp)
        return cls({exp: c}, len(exp))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, low: int = 0) -> "LaurentPoly":
        """Univariate polynomial ``sum_j coeffs[j] z**(low + j)``."""
        return cls({(low + j,): c for j, c in enumerate(coeffs)}, 1)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exp) -> Fraction:
        exp = (exp,) if isinstance(exp, int) else tuple(exp)
        return self._terms.get(exp, Fraction(0))

    def support(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Tight ``(min, max)`` exponent box of the stored terms."""
        if not self._terms:
            raise ValueError("the zero polynomial has no support")
        exps = np.array(list(self._terms), dtype=np.int64)
        return tuple(int(v) for v in exps.min(0)), tuple(int(v) for v in exps.max(0))

    def total_degree_span(self) -> int:
        """Sum over coordinates of (max - min) exponent."""
        lo, hi = self.support()
        return sum(h - l for l, h in zip(lo, hi))

    # arithmetic
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        return LaurentPoly.constant(as_fraction(other), self.dim)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.dim)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()}, self.dim)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                c = as_fraction(other)
            except TypeError:
                return NotImplemented
            return LaurentPoly({e: c * v for e, v in self._terms.items()}, self.dim)
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out, self.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return self.divide_exact(other)
        return self * (1 / as_fraction(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = LaurentPoly.constant(1, self.dim)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.dim == other.dim and self._terms == other._terms
        try:
            return self == LaurentPoly.constant(as_fraction(other), self.dim)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{e}: {c}" for e, c in self._terms.items())
        return f"LaurentPoly(dim={self.dim}, {{{body}}})"

    def shift(self, exp: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``z**exp``."""
        return LaurentPoly(
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()},
            self.dim,
        )

    # calculus / evaluation
    def derivative(self, eta: Sequence[int] | int) -> "LaurentPoly":
        """Formal partial derivative ``D**eta``."""
        eta = (eta,) if isinstance(eta, int) else tuple(eta)
        if len(eta) != self.dim:
            raise ValueError(f"derivative order {eta} does not match dimension {self.dim}")
        if any(k < 0 for k in eta):
            raise ValueError(f"derivative order must be nonnegative, got {eta}")
        out = {}
        for e, c in self._terms.items():
            factor = 1
            for a, k in zip(e, eta):
                factor *= math.prod(a - j for j in range(k))
            if factor:
                out[tuple(a - k for a, k in zip(e, eta))] = c * factor
        return LaurentPoly(out, self.dim)

    def evaluate(self, z) -> complex:
        """Value at a point of ``(C \\ {0})**dim`` in double precision."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if z.shape != (self.dim,):
            raise ValueError(f"point must have {self.dim} coordinates")
        if np.any(z == 0):
            raise ValueError("symbols are only defined away from the coordinate axes")
        total = 0j
        for e, c in self._terms.items():
            term = complex(c)
            for zi, a in zip(z, e):
                term *= zi**a
            total += term
        return total

    __call__ = evaluate

    # univariate helpers
    def _univariate(self) -> tuple[int, list[Fraction]]:
        if self.dim != 1:
            raise ValueError("operation only defined for univariate polynomials")
        (lo,), (hi,) = self.support()
        return lo, [self._terms.get((k,), Fraction(0)) for k in range(lo, hi + 1)]

    def divide_exact(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact univariate division; raises ``ArithmeticError`` on a remainder."""
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError("division leaves a nonzero remainder")
        return q

    def divmod(self, divisor: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Univariate long division of the polynomial parts, keeping shifts."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly({}, 1), LaurentPoly({}, 1)
        lo, num = self._univariate()
        dlo, den = divisor._univariate()
        num = list(num)
        quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
        for i in range(len(quot) - 1, -1, -1):
            c = num[i + len(den) - 1] / den[-1]
            quot[i] = c
            if c:
                for j, d in enumerate(den):
                    num[i + j] -= c * d
        q = LaurentPoly.from_coeffs(quot, lo - dlo) if quot else LaurentPoly({}, 1)
        r = LaurentPoly.from_coeffs(num[: len(den) - 1], lo) if num else LaurentPoly({}, 1)
        return q, r

    def root_multiplicity(self, root) -> int:
        """Multiplicity of the linear factor ``(z - root)`` for rational ``root``."""
        factor = LaurentPoly.from_coeffs([-as_fraction(root), 1])
        k, p = 0, self
        while p:
            q, r = p.divmod(factor)
            if r:
                break
            k, p = k + 1, q
        return k


@dataclass(frozen=True)
class Mask:
    """Dense mask on ``{0..N}**dim`` plus the exponent offset of its symbol."""

    dim: int
    offset: tuple[int, ...]
    coeffs: np.ndarray  # dtype=object, entries are Fractions

    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape

    def as_float(self) -> np.ndarray:
        return self.coeffs.astype(float)

    def nonzero_items(self):
        for idx in zip(*np.nonzero(self.coeffs != 0)):
            yield tuple(int(i) for i in idx), self.coeffs[idx]


def to_mask(p: LaurentPoly) -> Mask:
    """Shift ``p`` into the nonnegative orthant; the shift is kept as ``offset``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has an empty mask")
    lo, hi = p.support()
    coeffs = np.full(tuple(h - l + 1 for l, h in zip(lo, hi)), Fraction(0), dtype=object)
    for e, c in p.items():
        coeffs[tuple(a - l for a, l in zip(e, lo))] = c
    return Mask(p.dim, lo, coeffs)


def to_symbol(mask: Mask) -> LaurentPoly:
    terms = {}
    for idx in product(*(range(n) for n in mask.coeffs.shape)):
        c = mask.coeffs[idx]
        if c:
            terms[tuple(i + o for i, o in zip(idx, mask.offset))] = c
    return LaurentPoly(terms, mask.dim)


def _as_point(v) -> tuple[Fraction, ...]:
    if isinstance(v, (tuple, list, np.ndarray)):
        return tuple(as_fraction(x) for x in v)
    return (as_fraction(v),)


class DomainError(ValueError):
    """A parameter point lies outside the parameter polytope."""


@dataclass(frozen=True)
class ParamSymbol:
    """Affine symbol family ``base + sum_j omega_j * directions[j]``.

    ``domain`` lists the vertices of the parameter polytope; each vertex is a
    tuple of length ``len(directions)``. A stationary symbol is the family with
    no directions and the single vertex ``()``.
    """

    base: LaurentPoly
    directions: tuple[LaurentPoly, ...] = ()
    domain: tuple[tuple[Fraction, ...], ...] = ((),)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "directions", tuple(self.directions))
        verts = tuple(_as_point(v) for v in self.domain)
        object.__setattr__(self, "domain", verts)
        if not verts:
            raise ValueError("parameter domain needs at least one vertex")
        p = len(self.directions)
        for d in self.directions:
            if d.dim != self.base.dim:
                raise ValueError("all member polynomials must share one dimension")
        for v in verts:
            if len(v) != p:
                raise ValueError(f"vertex {v} does not have {p} coordinates")

    @classmethod
    def stationary(cls, p: LaurentPoly, name: str = "") -> "ParamSymbol":
        return cls(p, (), ((),), name)

    @classmethod
    def interval(cls, base, direction, lo, hi, name: str = "") -> "ParamSymbol":
        return cls(base, (direction,), ((as_fraction(lo),), (as_fraction(hi),)), name)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def n_params(self) -> int:
        return len(self.directions)

    def _point(self, omega) -> tuple:
        omega = _as_point(omega)
        if len(omega) != self.n_params:
            raise ValueError(f"parameter point must have {self.n_params} coordinates")
        return omega

    def check_domain(self, omega, tol: float = 1e-12) -> None:
        """Raise :class:`DomainError` if ``omega`` is outside the polytope."""
        omega = self._point(omega)
        p = self.n_params
        if p == 0:
            return
        if p == 1:
            lo, hi = min(v[0] for v in self.domain), max(v[0] for v in self.domain)
            if omega[0] < lo - tol:
                raise DomainError(f"omega={omega[0]} violates facet omega >= {lo}")
            if omega[0] > hi + tol:
                raise DomainError(f"omega={omega[0]} violates facet omega <= {hi}")
            return
        verts = np.array([[float(x) for x in v] for v in self.domain])
        w = np.array([float(x) for x in omega])
        from scipy.optimize import linprog

        n = len(verts)
        res = linprog(
            np.zeros(n),
            A_eq=np.vstack([verts.T, np.ones(n)]),
            b_eq=np.append(w, 1.0),
            bounds=[(0, None)] * n,
            method="highs",
        )
        if res.status == 0 and np.abs(verts.T @ res.x - w).max() <= tol * 10:
            return
        msg = f"omega={tuple(map(str, omega))} lies outside the parameter polytope"
        try:
            from scipy.spatial import ConvexHull

            hull = ConvexHull(verts)
            viol = hull.equations[:, :-1] @ w + hull.equations[:, -1]
            k = int(np.argmax(viol))
            normal, off = hull.equations[k, :-1], hull.equations[k, -1]
            msg += f"; violated facet {np.round(normal, 12).tolist()}.omega + {off:.12g} <= 0"
        except Exception:  # degenerate polytope, no facet description
            pass
        raise DomainError(msg)

    def instantiate(self, omega=(), check: bool = True) -> LaurentPoly:
        omega = self._point(omega)
        if check:
            self.check_domain(omega)
        out = self.base
        for w, d in zip(omega, self.directions):
            if w:
                out = out + d * w
        return out

    def vertex_symbols(self) -> list[LaurentPoly]:
        return [self.instantiate(v, check=False) for v in self.domain]

    def restricted(self, vertices) -> "ParamSymbol":
        """Same family over a sub-polytope; every new vertex must lie in the domain."""
        verts = tuple(self._point(v) for v in vertices)
        for v in verts:
            self.check_domain(v)
        return ParamSymbol(self.base, self.directions, verts, self.name)

    def common_offset(self) -> tuple[int, ...]:
        """Coordinatewise minimum exponent over all vertex symbols."""
        lows = [s.support()[0] for s in self.vertex_symbols() if s]
        return tuple(min(c) for c in zip(*lows))
