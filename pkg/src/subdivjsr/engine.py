"""Non-stationary subdivision cascade, parameter schedules and limit supports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .laurent import LaurentPoly, Mask, ParamSymbol, as_fraction, to_mask

__all__ = [
    "ParameterSchedule",
    "ProbeReport",
    "RefinedData",
    "cascade",
    "convergence_probe",
    "delta",
    "limit_support",
    "subdivide_once",
    "support_interval",
]

RANDOM_DENOMINATOR = 2**20


@dataclass(frozen=True)
class RefinedData:
    """Values ``values[i]`` at grid index ``origin + i``, physical position ``index / m**level``."""

    values: np.ndarray
    origin: tuple[int, ...]
    level: int = 0
    m: int = 2
    params: tuple = field(default=(), compare=False)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def spacing(self) -> Fraction:
        return Fraction(1, self.m**self.level)

    def indices(self, axis: int = 0) -> np.ndarray:
        return self.origin[axis] + np.arange(self.values.shape[axis])

    def positions(self, axis: int = 0) -> np.ndarray:
        return self.indices(axis) / float(self.m**self.level)

    def nonzero_extent(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Exact box of positions carrying nonzero values."""
        nz = np.nonzero(self.values != 0)
        if not len(nz[0]):
            raise ValueError("data is identically zero")
        out = []
        for ax, idx in enumerate(nz):
            lo, hi = self.origin[ax] + int(idx.min()), self.origin[ax] + int(idx.max())
            out.append((Fraction(lo, self.m**self.level), Fraction(hi, self.m**self.level)))
        return tuple(out)

    def as_float(self) -> "RefinedData":
        return RefinedData(self.values.astype(float), self.origin, self.level, self.m, self.params)


def delta(dim: int = 1, m: int = 2, exact: bool = False) -> RefinedData:
    vals = np.full((1,) * dim, Fraction(1) if exact else 1.0, dtype=object if exact else float)
    return RefinedData(vals, (0,) * dim, 0, m)


def subdivide_once(data: RefinedData, mask: Mask, m: int | None = None) -> RefinedData:
    """``(S c)(alpha) = sum_beta a[alpha - m*beta] c(beta)``.

    Object-dtype data is refined exactly with the rational mask; float data
    uses the mask converted to floats.
    """
    m = data.m if m is None else abs(m)
    if mask.dim != data.dim:
        raise ValueError(f"mask dimension {mask.dim} does not match data dimension {data.dim}")
    exact = data.values.dtype == object
    c = data.values
    up_shape = tuple(m * (n - 1) + 1 for n in c.shape)
    out_shape = tuple(u + k - 1 for u, k in zip(up_shape, mask.coeffs.shape))
    if exact:
        out = np.full(out_shape, Fraction(0), dtype=object)
    else:
        out = np.zeros(out_shape)
    up_slices = tuple(slice(None, None, m) for _ in c.shape)
    for k, a in mask.nonzero_items():
        region = tuple(slice(kk, kk + u) for kk, u in zip(k, up_shape))
        view = out[region]
        view[up_slices] = view[up_slices] + (a if exact else float(a)) * c
    origin = tuple(m * o + off for o, off in zip(data.origin, mask.offset))
    return RefinedData(out, origin, data.level + 1, m, data.params)


@dataclass(frozen=True)
class ParameterSchedule:
    """Level ``r -> omega(r)``.

    ``prefix`` fixes the parameters of the first levels (``prefix[0]`` is used
    at ``start``); later levels follow ``kind``:

    ``fixed``       ``values[0]`` at every level
    ``list``        ``values`` in order, the last one repeated
    ``random``      seeded random convex combination of ``vertices``
    ``convergent``  ``target + (values[0] - target) * 2**-r``
    """

    kind: str
    values: tuple = ()
    prefix: tuple = ()
    vertices: tuple = ()
    target: tuple = ()
    seed: int = 0
    start: int = 1

    def __post_init__(self):
        pt = lambda v: tuple(as_fraction(x) for x in (v if isinstance(v, (tuple, list)) else (v,)))
        object.__setattr__(self, "values", tuple(pt(v) for v in self.values))
        object.__setattr__(self, "prefix", tuple(pt(v) for v in self.prefix))
        object.__setattr__(self, "vertices", tuple(pt(v) for v in self.vertices))
        if self.target != ():
            object.__setattr__(self, "target", pt(self.target))
        if self.kind not in ("fixed", "list", "random", "convergent"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.kind in ("fixed", "list", "convergent") and not self.values:
            raise ValueError(f"{self.kind} schedule needs values")
        if self.kind == "random" and not self.vertices:
            raise ValueError("random schedule needs vertices")
        if self.kind == "convergent" and not self.target:
            raise ValueError("convergent schedule needs a target")

    @classmethod
    def fixed(cls, omega, **kw) -> "ParameterSchedule":
        return cls("fixed", values=(omega,), **kw)

    @classmethod
    def stationary(cls) -> "ParameterSchedule":
        return cls("fixed", values=((),))

    def __call__(self, r: int) -> tuple[Fraction, ...]:
        j = r - self.start
        if j < 0:
            raise ValueError(f"level {r} precedes the schedule start {self.start}")
        if j < len(self.prefix):
            return self.prefix[j]
        j -= len(self.prefix)
        if self.kind == "fixed":
            return self.values[0]
        if self.kind == "list":
            return self.values[min(j, len(self.values) - 1)]
        if self.kind == "convergent":
            w = Fraction(1, 2**r)
            return tuple(t + (v - t) * w for t, v in zip(self.target, self.values[0]))
        rng = np.random.default_rng([self.seed, r])
        n = len(self.vertices)
        if n == 1:
            return self.vertices[0]
        raw = rng.dirichlet(np.ones(n)) if n > 2 else np.array([rng.random(), 0.0])
        ks = [int(x * RANDOM_DENOMINATOR) for x in raw[:-1]]
        weights = [Fraction(k, RANDOM_DENOMINATOR) for k in ks]
        weights.append(1 - sum(weights))
        return tuple(
            sum((w * v[i] for w, v in zip(weights, self.vertices)), Fraction(0))
            for i in range(len(self.vertices[0]))
        )

    def tail_points(self) -> tuple[tuple[Fraction, ...], ...]:
        """Points whose convex hull holds every parameter after the prefix."""
        if self.kind == "fixed":
            return (self.values[0],)
        if self.kind == "list":
            return (self.values[-1],)
        if self.kind == "convergent":
            return (self.target, self.values[0])
        return self.vertices

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "seed": self.seed, "start": self.start}
        for key in ("values", "prefix", "vertices"):
            vals = getattr(self, key)
            if vals:
                d[key] = [[str(x) for x in v] for v in vals]
        if self.target:
            d["target"] = [str(x) for x in self.target]
        return d


def cascade(
    ps: ParamSymbol,
    schedule: ParameterSchedule,
    start_level: int = 1,
    levels: int = 1,
    initial: RefinedData | None = None,
    m: int = 2,
    exact: bool = False,
) -> RefinedData:
    """Apply the masks ``a(omega(r))`` for ``r = start_level .. start_level + levels - 1``."""
    if levels < 0:
        raise ValueError("levels must be nonnegative")
    data = initial if initial is not None else delta(ps.dim, m, exact)
    params = list(data.params)
    for r in range(start_level, start_level + levels):
        omega = schedule(r)
        mask = to_mask(ps.instantiate(omega))
        data = subdivide_once(data, mask, m)
        params.append(omega)
    return RefinedData(data.values, data.origin, data.level, data.m, tuple(params))


def support_interval(supports: Sequence[tuple[int, int]], m: int = 2, tail_from: int | None = None
                     ) -> tuple[Fraction, Fraction]:
    """Exact ``[sum_k m**-(k+1) left(k), sum_k m**-(k+1) right(k)]``.

    ``supports[k]`` is the exponent range of the mask used at the ``k``-th
    refinement. The last entry is taken to repeat forever; with ``tail_from``
    every entry from that index on must agree.
    """
    m = abs(m)
    if m < 2:
        raise ValueError("|m| must be at least 2")
    supports = [(int(a), int(b)) for a, b in supports]
    if not supports:
        raise ValueError("need at least one mask support")
    K = len(supports) - 1 if tail_from is None else tail_from
    if not 0 <= K < len(supports) or any(s != supports[K] for s in supports[K:]):
        raise ValueError("mask supports are not constant from the tail index on")
    lo = hi = Fraction(0)
    for k in range(K):
        lo += Fraction(supports[k][0], m ** (k + 1))
        hi += Fraction(supports[k][1], m ** (k + 1))
    # sum_{k >= K} m**-(k+1) = m**-K / (m - 1)
    tail = Fraction(1, m**K * (m - 1))
    return lo + supports[K][0] * tail, hi + supports[K][1] * tail


def _support_1d(polys: Sequence[LaurentPoly]) -> tuple[int, int]:
    lows, highs = zip(*(p.support() for p in polys if p))
    return min(l[0] for l in lows), max(h[0] for h in highs)


def limit_support(ps: ParamSymbol, schedule: ParameterSchedule, start_level: int = 1, m: int = 2
                  ) -> tuple[Fraction, Fraction]:
    """Support of the basic limit function started at ``start_level`` (univariate).

    Tail levels use the generic support over the schedule's tail points: an
    affine coefficient that is nonzero at one of them vanishes at no more than
    one point of the segment.
    """
    if ps.dim != 1:
        raise ValueError("limit supports are computed for univariate schemes")
    skip = start_level - schedule.start
    sups = [_support_1d([ps.instantiate(w)]) for w in schedule.prefix[max(skip, 0):]]
    if schedule.kind == "list":
        rest = schedule.values[max(skip - len(schedule.prefix), 0):] or schedule.values[-1:]
        sups += [_support_1d([ps.instantiate(w)]) for w in rest]
    else:
        sups.append(_support_1d([ps.instantiate(w) for w in schedule.tail_points()]))
    return support_interval(sups, m)


@dataclass(frozen=True)
class ProbeReport:
    """Empirical decay of refined data; a heuristic, not a convergence proof."""

    levels: tuple[int, ...]
    differences: tuple[float, ...]
    gaps: tuple[float, ...]
    rate: float
    order: int
    heuristic: bool = True


def convergence_probe(
    ps: ParamSymbol,
    schedule: ParameterSchedule,
    levels: int = 12,
    start_level: int = 1,
    order: int = 2,
    window: tuple[int, int] | None = None,
    m: int = 2,
) -> ProbeReport:
    """Decay of ``max |Delta**order c(r)|`` and of the hat-interpolant gap per level.

    ``gaps[r]`` is ``max |c(r+1) - PL_r|`` on the level ``r+1`` grid, where
    ``PL_r`` is the piecewise linear (hat-function) interpolant of level ``r``.
    ``rate`` is the geometric mean of ``differences[r+1] / differences[r]``
    over ``window`` (default: the second half of the levels).
    """
    if ps.dim != 1:
        raise ValueError("the probe is univariate")
    data = delta(1, m)
    diffs, gaps, lv = [], [], []
    for r in range(start_level, start_level + levels):
        mask = to_mask(ps.instantiate(schedule(r)))
        new = subdivide_once(data, mask, m)
        x_new, x_old = new.positions(), data.positions()
        # pad with zeros so the interpolant vanishes outside the data
        xs = np.concatenate([[x_old[0] - data.spacing], x_old, [x_old[-1] + data.spacing]]).astype(float)
        ys = np.concatenate([[0.0], data.values.astype(float), [0.0]])
        pl = np.interp(x_new, xs, ys, left=0.0, right=0.0)
        gaps.append(float(np.max(np.abs(new.values - pl))))
        d = np.diff(np.concatenate([np.zeros(order), new.values, np.zeros(order)]), order)
        diffs.append(float(np.max(np.abs(d))))
        lv.append(new.level)
        data = new
    lo, hi = window if window is not None else (levels // 2, levels)
    lo, hi = max(lo, 1), min(hi, levels)
    ratios = [diffs[j] / diffs[j - 1] for j in range(lo, hi) if diffs[j - 1] > 0]
    rate = float(np.exp(np.mean(np.log(np.maximum(ratios, 1e-300))))) if ratios else 0.0
    return ProbeReport(tuple(lv), tuple(diffs), tuple(gaps), rate, order)
