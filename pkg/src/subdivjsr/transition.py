"""Coset transition matrices and their restrictions to difference subspaces."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np
import scipy.linalg

from .laurent import LaurentPoly, Mask, ParamSymbol, to_mask
from .sumrules import family_sum_rule_order

__all__ = [
    "IndexWindow",
    "NotEnoughSumRulesError",
    "SumRuleInconsistencyError",
    "TransitionFamily",
    "cosets",
    "full_matrix",
    "index_window",
    "restrict",
    "restrict_multivariate",
    "restrict_univariate",
    "smoothing_factor",
]

NULLSPACE_TOL = 1e-10
INVARIANCE_TOL = 1e-8


class NotEnoughSumRulesError(ValueError):
    """The symbols do not carry the requested number of sum rules."""

    def __init__(self, msg, achieved: int):
        super().__init__(msg)
        self.achieved = achieved


class SumRuleInconsistencyError(ValueError):
    """The polynomial-annihilating subspace is not invariant under the matrices."""


@dataclass(frozen=True)
class IndexWindow:
    points: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.points)

    def index(self) -> dict[tuple[int, ...], int]:
        return {p: i for i, p in enumerate(self.points)}


def cosets(m: int, s: int) -> list[tuple[int, ...]]:
    return list(product(range(abs(m)), repeat=s))


def index_window(support_width: Sequence[int] | int, m: int) -> IndexWindow:
    """Integer points of the attractor of ``x -> (x + G) / |m|``.

    ``G = {-|m|, ..., N + 1}`` per coordinate, with ``N`` the mask width in
    that coordinate. For every ``beta`` in the window, all ``alpha`` with
    ``a[m*alpha + eps - beta] != 0`` lie in the window too, so polynomial
    sequences on the window are common left eigenvectors.
    """
    m = abs(m)
    if m < 2:
        raise ValueError("|m| must be at least 2")
    widths = (support_width,) if isinstance(support_width, int) else tuple(support_width)
    ranges = []
    for n in widths:
        lo = math.ceil(-m / (m - 1))
        hi = math.floor((n + 1) / (m - 1))
        ranges.append(range(lo, hi + 1))
    return IndexWindow(tuple(product(*ranges)))


def full_matrix(mask: Mask, eps: Sequence[int], window: IndexWindow, m: int) -> np.ndarray:
    """``(a[m*alpha + eps - beta])`` over the window, as an object array of Fractions."""
    m = abs(m)
    eps = tuple(eps)
    if len(eps) != mask.dim or any(not 0 <= e < m for e in eps):
        raise ValueError(f"coset index {eps} must have entries in 0..{m - 1}")
    shape = mask.coeffs.shape
    n = len(window)
    A = np.full((n, n), Fraction(0), dtype=object)
    for i, alpha in enumerate(window.points):
        for j, beta in enumerate(window.points):
            k = tuple(m * a + e - b for a, e, b in zip(alpha, eps, beta))
            if all(0 <= kk < nn for kk, nn in zip(k, shape)):
                A[i, j] = mask.coeffs[k]
    return A


def smoothing_factor(m: int, power: int) -> LaurentPoly:
    """``(1 + z + ... + z**(|m|-1))**power``."""
    return LaurentPoly.from_coeffs([1] * abs(m)) ** power


def _vertex_label(v) -> str:
    return ",".join(str(x) for x in v) if v else "stationary"


@dataclass(frozen=True)
class TransitionFamily:
    """Restricted transition matrices for every polytope vertex and coset."""

    m: int
    ell: int
    dim_V: int
    vertices: tuple[tuple[Fraction, ...], ...]
    cosets: tuple[tuple[int, ...], ...]
    matrices: dict[tuple[int, int], np.ndarray]
    exact: dict[tuple[int, int], np.ndarray] | None = None
    basis: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    method: str = "univariate"

    def family(self) -> list[np.ndarray]:
        return [self.matrices[key] for key in sorted(self.matrices)]

    def matrix(self, vertex: int, eps) -> np.ndarray:
        j = eps if isinstance(eps, int) else self.cosets.index(tuple(eps))
        return self.matrices[(vertex, j)]

    def to_dict(self) -> dict:
        mats = {
            f"vertex_{v}/eps_{e}": [[float(f"{x:.17g}") for x in row] for row in self.matrices[(v, e)]]
            for v, e in sorted(self.matrices)
        }
        return {
            "dim_V": self.dim_V,
            "m": self.m,
            "ell": self.ell,
            "method": self.method,
            "vertices": [[str(x) for x in v] for v in self.vertices],
            "cosets": [list(c) for c in self.cosets],
            "matrices": mats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _difference_symbols(ps: ParamSymbol, m: int, ell: int) -> list[LaurentPoly]:
    factor = smoothing_factor(m, ell + 1)
    out = []
    for v, sym in zip(ps.domain, ps.vertex_symbols()):
        if sym.is_zero():
            out.append(sym)
            continue
        q, r = sym.divmod(factor)
        if r:
            achieved = 0
            while True:
                q2, r2 = sym.divmod(smoothing_factor(m, achieved + 1))
                if r2:
                    break
                achieved += 1
            raise NotEnoughSumRulesError(
                f"symbol at vertex {_vertex_label(v)} is divisible by the smoothing factor only "
                f"{achieved} times (sum-rule order {achieved}), need {ell + 1}",
                achieved,
            )
        out.append(q)
    return out


def restrict_univariate(ps: ParamSymbol, m: int, ell: int) -> TransitionFamily:
    """Difference-scheme matrices ``(b[m*alpha + eps - beta])`` for every vertex.

    ``b = a / (1 + z + ... + z**(|m|-1))**(ell+1)`` is computed exactly. All
    vertices share one shift so that the matrices stay affine in the parameter.
    """
    if ps.dim != 1:
        raise ValueError("univariate restriction needs a univariate symbol")
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    m_abs = abs(m)
    bs = _difference_symbols(ps, m_abs, ell)
    nonzero = [b for b in bs if b]
    lo = min(b.support()[0][0] for b in nonzero)
    hi = max(b.support()[1][0] for b in nonzero)
    width = hi - lo
    size = max(1, math.ceil(width / (m_abs - 1)))
    cos = cosets(m_abs, 1)
    exact, mats = {}, {}
    for vi, b in enumerate(bs):
        coeffs = [b.coeff(lo + k) for k in range(width + 1)]
        for ei, (eps,) in enumerate(cos):
            A = np.full((size, size), Fraction(0), dtype=object)
            for i in range(size):
                for j in range(size):
                    k = m_abs * i + eps - j
                    if 0 <= k <= width:
                        A[i, j] = coeffs[k]
            exact[(vi, ei)] = A
            mats[(vi, ei)] = A.astype(float)
    return TransitionFamily(m_abs, ell, size, ps.domain, tuple(cos), mats, exact, method="univariate")


def _monomial_rows(points: np.ndarray, ell: int) -> np.ndarray:
    s = points.shape[1]
    rows = []
    for eta in product(range(ell + 1), repeat=s):
        if sum(eta) <= ell:
            rows.append(np.prod(points.astype(float) ** np.array(eta), axis=1))
    return np.array(rows)


def restrict_multivariate(ps: ParamSymbol, m: int, ell: int) -> TransitionFamily:
    """Restriction ``B.T @ A_eps @ B`` to the subspace annihilated by ``Pi_ell``.

    ``B`` is an orthonormal basis of the null space of the matrix of monomial
    values ``(p(alpha))`` over the index window, so the result depends on that
    basis only up to orthogonal similarity.
    """
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    m_abs = abs(m)
    got = family_sum_rule_order(ps, m_abs)
    if got.order < ell + 1:
        raise NotEnoughSumRulesError(
            f"family satisfies sum rules of order {got.order}, need {ell + 1}", got.order
        )
    offset = ps.common_offset()
    shifted = [sym.shift(tuple(-o for o in offset)) for sym in ps.vertex_symbols()]
    hi = [max(c) for c in zip(*(s.support()[1] for s in shifted if s))]
    masks = []
    for sym in shifted:
        mk = to_mask(sym) if sym else None
        # pad every mask to the common box {0..N}^s anchored at the origin
        coeffs = np.full(tuple(h + 1 for h in hi), Fraction(0), dtype=object)
        if mk is not None:
            sl = tuple(slice(o, o + n) for o, n in zip(mk.offset, mk.coeffs.shape))
            coeffs[sl] = mk.coeffs
        masks.append(Mask(ps.dim, tuple(offset), coeffs))
    window = index_window(hi, m_abs)
    pts = np.array(window.points)
    P = _monomial_rows(pts, ell)
    B = scipy.linalg.null_space(P, rcond=NULLSPACE_TOL)
    cos = cosets(m_abs, ps.dim)
    mats = {}
    for vi, mk in enumerate(masks):
        for ei, eps in enumerate(cos):
            A = full_matrix(mk, eps, window, m_abs).astype(float)
            R = B.T @ A @ B
            resid = np.abs(A @ B - B @ R).max() if B.size else 0.0
            if resid > INVARIANCE_TOL:
                raise SumRuleInconsistencyError(
                    f"difference subspace not invariant (residual {resid:.3g}) at vertex {vi}, coset {eps}"
                )
            mats[(vi, ei)] = R
    return TransitionFamily(
        m_abs, ell, B.shape[1], ps.domain, tuple(cos), mats, None, basis=B, method="multivariate"
    )


def restrict(ps: ParamSymbol, m: int, ell: int, method: str = "auto") -> TransitionFamily:
    if method == "auto":
        method = "univariate" if ps.dim == 1 else "multivariate"
    if method == "univariate":
        return restrict_univariate(ps, m, ell)
    if method == "multivariate":
        return restrict_multivariate(ps, m, ell)
    raise ValueError(f"unknown restriction method {method!r}")
