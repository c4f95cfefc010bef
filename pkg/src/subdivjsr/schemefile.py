"""Reading and writing scheme-definition JSON documents.

A document looks like::

    {"name": "four-point", "dim": 1, "m": 2,
     "base": [[[-1], "1/2"], [[0], "1"], [[1], "1/2"]],
     "directions": [[[[-3], "-1"], [[-1], "1"], [[1], "1"], [[3], "-1"]]],
     "domain_vertices": [["0"], ["1/16"]],
     "schedule": {"kind": "fixed", "values": [["1/16"]]}}

Coefficients and parameters are decimal or ``"p/q"`` strings (plain JSON
numbers are accepted too); exponents are integer lists, or bare integers when
``dim`` is 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .engine import ParameterSchedule
from .laurent import LaurentPoly, ParamSymbol, as_fraction

__all__ = ["SchemeDocument", "SchemeFormatError", "dump_scheme", "format_scheme", "load_scheme", "parse_scheme"]


class SchemeFormatError(ValueError):
    """Malformed scheme document; ``line``/``column`` are set for JSON syntax errors."""

    def __init__(self, msg, line: int | None = None, column: int | None = None):
        super().__init__(msg)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SchemeDocument:
    symbol: ParamSymbol
    m: int = 2
    name: str = ""
    notes: str = ""
    schedule: ParameterSchedule | None = None
    extra: dict = field(default_factory=dict)

    def default_schedule(self) -> ParameterSchedule:
        """The stored schedule, else seeded random points of the whole domain."""
        if self.schedule is not None:
            return self.schedule
        if self.symbol.n_params == 0:
            return ParameterSchedule.stationary()
        return ParameterSchedule("random", vertices=self.symbol.domain, seed=0)


def _poly(terms, dim: int, what: str) -> LaurentPoly:
    if not isinstance(terms, list):
        raise SchemeFormatError(f"{what}: expected a list of [exponent, coefficient] pairs")
    out = {}
    for item in terms:
        if not (isinstance(item, list) and len(item) == 2):
            raise SchemeFormatError(f"{what}: bad term {item!r}")
        exp, c = item
        exp = [exp] if isinstance(exp, int) and not isinstance(exp, bool) else exp
        if not (isinstance(exp, list) and len(exp) == dim and all(isinstance(e, int) for e in exp)):
            raise SchemeFormatError(f"{what}: exponent {item[0]!r} is not an integer {dim}-tuple")
        key = tuple(exp)
        try:
            out[key] = out.get(key, Fraction(0)) + as_fraction(c)
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise SchemeFormatError(f"{what}: bad coefficient {c!r} ({e})") from None
    return LaurentPoly(out, dim)


def _points(raw, what: str) -> tuple:
    if not isinstance(raw, list):
        raise SchemeFormatError(f"{what}: expected a list of parameter points")
    pts = []
    for p in raw:
        p = p if isinstance(p, list) else [p]
        try:
            pts.append(tuple(as_fraction(x) for x in p))
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise SchemeFormatError(f"{what}: bad parameter point {p!r} ({e})") from None
    return tuple(pts)


def _schedule(raw: dict) -> ParameterSchedule:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise SchemeFormatError("schedule: expected an object with a 'kind'")
    kw = {"kind": raw["kind"], "seed": int(raw.get("seed", 0)), "start": int(raw.get("start", 1))}
    for key in ("values", "prefix", "vertices"):
        if key in raw:
            kw[key] = _points(raw[key], f"schedule.{key}")
    if "target" in raw:
        kw["target"] = _points([raw["target"]], "schedule.target")[0]
    try:
        return ParameterSchedule(**kw)
    except ValueError as e:
        raise SchemeFormatError(f"schedule: {e}") from None


def parse_scheme(doc: dict) -> SchemeDocument:
    if not isinstance(doc, dict):
        raise SchemeFormatError("scheme document must be a JSON object")
    dim = doc.get("dim", 1)
    m = doc.get("m", 2)
    if not isinstance(dim, int) or dim < 1:
        raise SchemeFormatError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(m, int) or abs(m) < 2:
        raise SchemeFormatError(f"m must be an integer with |m| >= 2, got {m!r}")
    if "base" not in doc:
        raise SchemeFormatError("missing 'base' symbol")
    base = _poly(doc["base"], dim, "base")
    dirs = tuple(_poly(d, dim, f"directions[{j}]") for j, d in enumerate(doc.get("directions", [])))
    verts = _points(doc["domain_vertices"], "domain_vertices") if "domain_vertices" in doc else ((),)
    try:
        ps = ParamSymbol(base, dirs, verts, doc.get("name", ""))
    except ValueError as e:
        raise SchemeFormatError(str(e)) from None
    if not any(ps.vertex_symbols()):
        raise SchemeFormatError("symbol vanishes identically")
    sched = _schedule(doc["schedule"]) if "schedule" in doc else None
    known = {"name", "dim", "m", "base", "directions", "domain_vertices", "notes", "schedule"}
    return SchemeDocument(ps, m, doc.get("name", ""), doc.get("notes", ""), sched,
                          {k: v for k, v in doc.items() if k not in known})


def load_scheme(path) -> SchemeDocument:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemeFormatError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}", e.lineno, e.colno) from None
    return parse_scheme(doc)


def _terms(p: LaurentPoly) -> list:
    return [[list(e), str(c)] for e, c in p.items()]


def dump_scheme(sd: SchemeDocument) -> dict:
    ps = sd.symbol
    out = {
        "name": sd.name or ps.name,
        "dim": ps.dim,
        "m": sd.m,
        "base": _terms(ps.base),
        "directions": [_terms(d) for d in ps.directions],
        "domain_vertices": [[str(x) for x in v] for v in ps.domain],
    }
    if sd.notes:
        out["notes"] = sd.notes
    if sd.schedule is not None:
        out["schedule"] = sd.schedule.to_dict()
    out.update(sd.extra)
    return out


def format_scheme(doc: dict) -> str:
    """Compact JSON text with one top-level key per line."""
    lines = [f" {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"
