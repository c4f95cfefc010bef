"""Certified lower/upper bounds for the joint spectral radius of a matrix family.

The lower bound is the largest averaged spectral radius ``rho(P)**(1/len)`` seen
over explored products. The upper bound comes from a Gripenberg-style
branch-and-bound in an operator norm chosen per family: the plain 1-, 2- and
inf-norms, optimally diagonally scaled 1- and inf-norms, and an ellipsoidal
norm ``||x||_P = sqrt(x.T @ P @ x)`` found by semidefinite bisection. Every
norm value used in a bound is recomputed from its transform with dense linear
algebra; solver output is only a proposal.
"""

from __future__ import annotations

import itertools
import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.optimize

__all__ = [
    "JsrBounds",
    "MatrixFamily",
    "common_invariant_subspace_probe",
    "interval_family_jsr",
    "jsr_bounds",
    "spectral_radius",
]

log = logging.getLogger(__name__)

DEFAULT_DEPTH = 20
DEFAULT_TOL = 1e-6
MAX_WORDS = 40_000


@dataclass(frozen=True)
class MatrixFamily:
    members: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(np.array(A, dtype=float) for A in self.members)
        if not mats:
            raise ValueError("matrix family must be nonempty")
        n = mats[0].shape[0] if mats[0].ndim == 2 else -1
        for A in mats:
            if A.ndim != 2 or A.shape != (n, n):
                raise ValueError("family members must be square matrices of one size")
            if not np.all(np.isfinite(A)):
                raise ValueError("family members must have finite entries")
        object.__setattr__(self, "members", mats)

    @classmethod
    def of(cls, mats) -> "MatrixFamily":
        return mats if isinstance(mats, MatrixFamily) else cls(tuple(mats))

    @property
    def size(self) -> int:
        return self.members[0].shape[0]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class JsrBounds:
    """Bracket ``lower <= JSR <= upper``.

    ``witness`` is a word of member indices whose product ``A[w[-1]] ... A[w[0]]``
    has ``rho**(1/len(w)) == lower``. ``transform`` is the matrix ``T`` of the
    norm certificate: the upper bound is measured as ``||T A T^-1||_p`` with
    ``p`` given in ``norm``.
    """

    lower: float
    upper: float
    witness: tuple[int, ...]
    norm: str
    transform: np.ndarray = field(repr=False)
    max_depth: int
    converged: bool
    words: int = 0

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def scaled(self, c: float) -> "JsrBounds":
        c = abs(c)
        return JsrBounds(self.lower * c, self.upper * c, self.witness, self.norm, self.transform,
                         self.max_depth, self.converged, self.words)


def spectral_radius(A) -> float:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("spectral radius needs a square matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def word_product(mats: Sequence[np.ndarray], word: Sequence[int]) -> np.ndarray:
    P = np.eye(mats[0].shape[0])
    for i in word:
        P = mats[i] @ P
    return P


# --- norm certificates ----------------------------------------------------


@dataclass
class _Norm:
    name: str
    T: np.ndarray
    Tinv: np.ndarray
    p: float

    def value(self, A: np.ndarray) -> float:
        with np.errstate(all="ignore"):
            v = float(np.linalg.norm(self.T @ A @ self.Tinv, self.p))
        # a degenerate scaling certifies nothing
        return v if np.isfinite(v) else np.inf

    def family_max(self, mats) -> float:
        return max(self.value(A) for A in mats)


def _plain_norms(n: int) -> list[_Norm]:
    eye = np.eye(n)
    return [_Norm("1-norm", eye, eye, 1), _Norm("inf-norm", eye, eye, np.inf), _Norm("2-norm", eye, eye, 2)]


def _diagonal_norm(mats, p: float) -> _Norm:
    n = mats[0].shape[0]
    absum = sum(np.abs(A) for A in mats)
    # Perron vector of the absolute sum is the optimal inf-norm scaling for a single nonnegative matrix
    M = absum if p == np.inf else absum.T
    w, V = np.linalg.eig(M + 1e-12 * np.ones((n, n)))
    v = np.abs(np.real(V[:, np.argmax(np.abs(w))]))
    x0 = np.log(np.maximum(v, 1e-12))
    x0 -= x0.mean()

    def objective(x):
        d = np.exp(np.clip(x, -300, 300))
        with np.errstate(all="ignore"):
            v = max(np.linalg.norm((A * d[None, :]) / d[:, None], p) for A in mats)
        return v if np.isfinite(v) else np.inf

    best = min((x0, np.zeros(n)), key=objective)
    if n > 1:
        res = scipy.optimize.minimize(
            objective, best, method="Nelder-Mead",
            options={"maxiter": 400 * n, "xatol": 1e-10, "fatol": 1e-14},
        )
        if res.fun < objective(best):
            best = res.x
    d = np.exp(np.clip(best, -300, 300))
    # ||D^-1 A D||_p with D = diag(d)
    return _Norm(f"diagonal-scaled {'inf' if p == np.inf else '1'}-norm", np.diag(1 / d), np.diag(d), p)


def _ellipsoid_from_gram(P: np.ndarray) -> _Norm | None:
    P = (P + P.T) / 2
    try:
        L = np.linalg.cholesky(P)
    except np.linalg.LinAlgError:
        return None
    T = L.T
    try:
        Tinv = scipy.linalg.solve_triangular(T, np.eye(len(T)), lower=False)
    except (scipy.linalg.LinAlgError, ValueError):
        return None
    if not (np.all(np.isfinite(T)) and np.all(np.isfinite(Tinv))):
        return None
    return _Norm("ellipsoidal 2-norm", T, Tinv, 2)


def _ellipsoid_norm(mats, lo: float, hi: float, tol: float, max_iter: int = 40) -> _Norm | None:
    """Bisection on ``gamma`` for ``A.T P A <= gamma**2 P``, ``P >= I``."""
    try:
        import cvxpy as cp
    except ImportError:  # pragma: no cover
        log.warning("cvxpy unavailable; skipping the ellipsoidal norm pass")
        return None
    n = mats[0].shape[0]
    P = cp.Variable((n, n), symmetric=True)
    g2 = cp.Parameter(nonneg=True)
    cons = [P >> np.eye(n)]
    for A in mats:
        S = g2 * P - A.T @ P @ A
        cons.append((S + S.T) / 2 >> 0)
    prob = cp.Problem(cp.Minimize(0), cons)
    best, best_val = None, hi
    a, b = lo, hi
    for _ in range(max_iter):
        if b - a <= tol * max(lo, 1e-300) / 4:
            break
        g = (a + b) / 2
        g2.value = g * g
        try:
            with warnings.catch_warnings():
                # inaccurate solutions are re-verified below
                warnings.simplefilter("ignore", UserWarning)
                prob.solve(solver=cp.CLARABEL)
            ok = prob.status in ("optimal", "optimal_inaccurate") and P.value is not None
        except cp.SolverError:
            ok = False
        if ok:
            cand = _ellipsoid_from_gram(P.value)
            if cand is not None:
                val = cand.family_max(mats)
                if val < best_val:
                    best, best_val = cand, val
            b = g
        else:
            a = g
    return best


def _choose_norm(mats, lower: float, tol: float, ellipsoid: bool) -> _Norm:
    n = mats[0].shape[0]
    cands = _plain_norms(n)
    best = min(cands, key=lambda c: c.family_max(mats))
    best_val = best.family_max(mats)
    if best_val <= lower * (1 + tol):
        return best
    for p in (1, np.inf):
        c = _diagonal_norm(mats, p)
        v = c.family_max(mats)
        if v < best_val:
            best, best_val = c, v
    if ellipsoid and best_val > lower * (1 + tol):
        c = _ellipsoid_norm(mats, lower, best_val, tol)
        if c is not None and c.family_max(mats) < best_val:
            best = c
    return best


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SUBDIV_JSR_THREADS", "1")))
    except ValueError:
        return 1


# --- bounds -----------------------------------------------------------------


def jsr_bounds(
    family,
    depth: int = DEFAULT_DEPTH,
    tol: float = DEFAULT_TOL,
    *,
    ellipsoid: bool = True,
    stop_above: float | None = None,
    max_words: int = MAX_WORDS,
) -> JsrBounds:
    """Bracket the joint spectral radius of a finite family.

    Parameters
    ----------
    family : sequence of square arrays or MatrixFamily
    depth : int
        Longest product length explored.
    tol : float
        Relative target width; words whose averaged norm is within
        ``lower * (1 + tol)`` are pruned.
    ellipsoid : bool
        Run the semidefinite ellipsoidal-norm pass when cheaper norms leave a gap.
    stop_above : float, optional
        Stop as soon as the lower bound reaches this value (used when only a
        strict ``JSR < threshold`` test matters).
    max_words : int
        Stop, unconverged, once a level would hold more words than this.

    Returns
    -------
    JsrBounds
        ``converged`` is False when depth or ``max_words`` ran out before the
        width reached ``tol * lower``; the bracket is still certified.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    fam = MatrixFamily.of(family)
    n = fam.size
    if n == 0:
        return JsrBounds(0.0, 0.0, (0,), "trivial", np.zeros((0, 0)), 0, True)
    orig = fam.members
    scale = max(np.linalg.norm(A, 2) for A in orig)
    if scale == 0:
        return JsrBounds(0.0, 0.0, (0,), "zero family", np.eye(n), 1, True)
    mats = [A / scale for A in orig]

    radii = [spectral_radius(A) for A in mats]
    lower = max(radii)
    witness = (int(np.argmax(radii)),)
    if stop_above is not None and lower * scale >= stop_above:
        norm = _plain_norms(n)[2]
        up = max(lower, norm.family_max(mats))
        return _finish(orig, scale, lower, up, witness, norm, 1, False, len(mats))

    norm = _choose_norm(mats, lower, tol, ellipsoid)
    B = [norm.T @ A @ norm.Tinv for A in mats]
    p = norm.p
    words = [(i,) for i in range(len(B))]
    prods = list(B)
    pruned = 0.0
    upper = np.inf
    explored = 0
    converged = False
    k = 0
    workers = _threads()
    pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def measure(P):
        return np.linalg.norm(P, p), spectral_radius(P)

    try:
        for k in range(1, depth + 1):
            stats = list(pool.map(measure, prods)) if pool else [measure(P) for P in prods]
            explored += len(prods)
            nus = []
            for w, (nrm, rad) in zip(words, stats):
                r = rad ** (1.0 / k)
                if r > lower * (1 + 1e-14):
                    lower, witness = r, w
                nus.append(nrm ** (1.0 / k))
            thresh = lower * (1 + tol)
            keep = []
            for w, P, nu in zip(words, prods, nus):
                if nu <= thresh:
                    pruned = max(pruned, nu)
                else:
                    keep.append((nu, w, P))
            upper = min(upper, max([pruned] + [nu for nu, _, _ in keep]))
            if not keep or upper - lower <= tol * lower:
                converged = True
                break
            if stop_above is not None and lower * scale >= stop_above:
                break
            if len(keep) * len(B) > max_words or k == depth:
                break
            # best-first, ties broken lexicographically, so the search order is reproducible
            keep.sort(key=lambda t: (-t[0], t[1]))
            words = [w + (i,) for _, w, _ in keep for i in range(len(B))]
            prods = [B[i] @ P for _, _, P in keep for i in range(len(B))]
    finally:
        if pool:
            pool.shutdown()
    return _finish(orig, scale, lower, upper, witness, norm, k, converged, explored)


def _finish(orig, scale, lower, upper, witness, norm, depth, converged, explored) -> JsrBounds:
    # recompute the lower bound from the original matrices so it is reproducible from the witness
    lo = spectral_radius(word_product(orig, witness)) ** (1.0 / len(witness))
    lo = min(lo, lower * scale * (1 + 1e-12))
    up = max(upper * scale, lo)
    return JsrBounds(float(lo), float(up), tuple(int(i) for i in witness), norm.name, norm.T,
                     depth, converged, explored)


def interval_family_jsr(tf, depth: int = DEFAULT_DEPTH, tol: float = DEFAULT_TOL, **kw) -> JsrBounds:
    """Bracket for the whole parameter polytope from its vertex matrices only.

    Every matrix at an interior parameter is a convex combination of vertex
    matrices, so any norm bounding the vertex family bounds it too.
    """
    return jsr_bounds(tf.family(), depth, tol, **kw)


# --- reducibility probe -----------------------------------------------------


@dataclass(frozen=True)
class InvariantSubspaceReport:
    irreducible: bool
    subspaces: tuple[np.ndarray, ...]

    def __str__(self):
        if self.irreducible:
            return "irreducible up to tolerance"
        dims = ", ".join(str(S.shape[1]) for S in self.subspaces)
        return f"candidate common invariant subspaces of dimension {dims}"


def _orbit_span(mats, v: np.ndarray, tol: float) -> np.ndarray:
    Q = v[:, None] / np.linalg.norm(v)
    frontier = [Q[:, 0]]
    while frontier:
        new = []
        for x in frontier:
            for A in mats:
                y = A @ x
                y = y - Q @ (Q.T @ y)
                y = y - Q @ (Q.T @ y)
                nrm = np.linalg.norm(y)
                if nrm > tol * max(1.0, np.linalg.norm(A @ x)):
                    y = y / nrm
                    Q = np.column_stack([Q, y])
                    new.append(y)
        frontier = new
        if Q.shape[1] >= Q.shape[0]:
            break
    return Q


def common_invariant_subspace_probe(family, tol: float = 1e-8, seed: int = 0) -> InvariantSubspaceReport:
    """Heuristic search for a nontrivial common invariant subspace.

    Starting vectors are the real eigenvectors of every member and of a random
    combination; each is closed under the family by Gram-Schmidt. A closure of
    dimension below ``n`` is a common invariant subspace. Not finding one is
    only evidence of irreducibility.
    """
    fam = MatrixFamily.of(family)
    mats = list(fam.members)
    n = fam.size
    rng = np.random.default_rng(seed)
    combo = sum(rng.standard_normal() * A for A in mats)
    starts = []
    for M in mats + [combo]:
        w, V = np.linalg.eig(M)
        for j in range(len(w)):
            if abs(w[j].imag) <= tol * max(1.0, abs(w[j])):
                v = np.real(V[:, j])
                if np.linalg.norm(v) > 0:
                    starts.append(v)
    found: list[np.ndarray] = []
    for v in starts:
        Q = _orbit_span(mats, v, tol)
        if 0 < Q.shape[1] < n:
            if not any(_same_span(Q, S, tol) for S in found):
                found.append(Q)
    found.sort(key=lambda S: S.shape[1])
    return InvariantSubspaceReport(not found, tuple(found))


def _same_span(Q: np.ndarray, S: np.ndarray, tol: float) -> bool:
    if Q.shape[1] != S.shape[1]:
        return False
    return np.linalg.norm(Q - S @ (S.T @ Q)) <= np.sqrt(tol)
