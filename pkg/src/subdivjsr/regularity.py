"""Convergence verdicts and Hölder lower bounds for parameter-dependent schemes.

For a family whose symbols satisfy sum rules of order ``k`` the search tries
``ell = k-1, k-2, ..., 0``: the restricted vertex family at ``ell`` is bracketed
and the scheme is certified ``C^ell`` as soon as the upper end of the bracket is
strictly below ``|m|**-ell``. The reported exponent is computed from that upper
end, so every statement is a sound under-approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .jsr import DEFAULT_DEPTH, DEFAULT_TOL, JsrBounds, interval_family_jsr
from .laurent import LaurentPoly, ParamSymbol
from .sumrules import family_sum_rule_order
from .transition import restrict

__all__ = ["RegularityReport", "analyze", "stationary_analyze"]


@dataclass(frozen=True)
class Attempt:
    ell: int
    threshold: float
    jsr: JsrBounds

    @property
    def certified(self) -> bool:
        return self.jsr.upper < self.threshold


@dataclass(frozen=True)
class RegularityReport:
    sum_rule_order: int
    ell_used: int
    jsr: JsrBounds | None
    convergent_in: int
    holder_lower: float | None
    m: int = 2
    attempts: tuple[Attempt, ...] = ()
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def convergent(self) -> bool:
        return self.convergent_in >= 0

    @property
    def alpha_bracket(self) -> tuple[float, float] | None:
        """``(-log gamma_hi, -log gamma_lo)``; only the left end is a certified regularity bound."""
        if self.jsr is None:
            return None
        lo = self.jsr.lower
        return self.holder_lower, (math.inf if lo <= 0 else -math.log(lo) / math.log(self.m))

    def to_dict(self) -> dict:
        return {
            "order": self.sum_rule_order,
            "ell": self.ell_used,
            "gamma_lo": None if self.jsr is None else self.jsr.lower,
            "gamma_hi": None if self.jsr is None else self.jsr.upper,
            "alpha_lower": self.holder_lower,
            "convergent": self.convergent,
            "convergent_in": self.convergent_in,
            "jsr_converged": None if self.jsr is None else self.jsr.converged,
            "norm": None if self.jsr is None else self.jsr.norm,
            "witness": None if self.jsr is None else list(self.jsr.witness),
            "attempts": [
                {"ell": a.ell, "threshold": a.threshold, "gamma_lo": a.jsr.lower,
                 "gamma_hi": a.jsr.upper, "certified": a.certified}
                for a in self.attempts
            ],
            "notes": list(self.notes),
        }

    def summary(self) -> str:
        lines = [f"sum-rule order: {self.sum_rule_order}"]
        for a in self.attempts:
            mark = "<" if a.certified else "not <"
            lines.append(
                f"  ell={a.ell}: JSR in [{a.jsr.lower:.10g}, {a.jsr.upper:.10g}] "
                f"({a.jsr.norm}, depth {a.jsr.max_depth}) {mark} {a.threshold:.6g}"
            )
        if self.convergent:
            lines.append(f"certified C^{self.convergent_in}-convergent")
        else:
            lines.append("convergence not certified")
        if self.holder_lower is not None:
            lines.append(f"Hölder exponent >= {self.holder_lower:.6f}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def analyze(
    ps: ParamSymbol,
    m: int = 2,
    *,
    ell: int | None = None,
    subdomain=None,
    depth: int = DEFAULT_DEPTH,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
) -> RegularityReport:
    """Regularity report for the affine family ``ps`` with dilation ``m``.

    Parameters
    ----------
    ell : int, optional
        Largest smoothness order to try; defaults to the sum-rule order minus one.
    subdomain : sequence of parameter points, optional
        Vertices of a sub-polytope containing every parameter the scheme uses
        from some level on. A smaller range can only raise the bound.
    """
    m_abs = abs(m)
    notes = []
    if subdomain is not None:
        ps = ps.restricted(subdomain)
        notes.append("parameters restricted to vertices " + "; ".join(
            "(" + ", ".join(str(x) for x in v) + ")" for v in ps.domain))
    if ps.n_params:
        notes.append("bracket covers every parameter of the polytope via its vertex matrices")
    order = family_sum_rule_order(ps, m_abs).order
    if order == 0:
        notes.append("no sum rules: no difference subspace to analyze")
        return RegularityReport(0, -1, None, -1, None, m_abs, (), tuple(notes))
    top = order - 1 if ell is None else min(order - 1, ell)
    if ell is not None and ell > order - 1:
        notes.append(f"requested ell={ell} exceeds available sum rules; using {top}")
    attempts = []
    for l in range(top, -1, -1):
        threshold = float(m_abs) ** (-l)
        tf = restrict(ps, m_abs, l, method)
        b = interval_family_jsr(tf, depth, tol, stop_above=threshold)
        attempts.append(Attempt(l, threshold, b))
        if b.upper < threshold:
            break
    last = attempts[-1]
    if last.certified:
        conv = last.ell
    else:
        conv = -1
        if last.jsr.upper <= last.threshold * (1 + tol):
            notes.append("JSR bracket touches the threshold; the strict inequality is not certified")
    alpha = -math.log(last.jsr.upper) / math.log(m_abs) if last.jsr.upper > 0 else math.inf
    if not last.jsr.converged:
        notes.append("JSR bracket did not reach the requested width; bound uses the certified upper end")
    return RegularityReport(order, last.ell, last.jsr, conv, alpha, m_abs, tuple(attempts), tuple(notes))


def stationary_analyze(p: LaurentPoly, m: int = 2, **options) -> RegularityReport:
    return analyze(ParamSymbol.stationary(p), m, **options)
