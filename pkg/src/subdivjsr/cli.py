"""Command-line interface: ``subdivjsr <command> ...``.

Exit codes: 0 success, 2 bad arguments or input files, 3 analysis did not
certify what was asked (the report is still written).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .engine import ParameterSchedule, cascade, limit_support
from .jsr import DEFAULT_DEPTH, DEFAULT_TOL, jsr_bounds
from .laurent import DomainError, as_fraction
from .regularity import analyze
from .schemefile import SchemeFormatError, load_scheme
from .spectral_limits import gamma_set, generability_necessary_test
from .transition import NotEnoughSumRulesError, SumRuleInconsistencyError, restrict

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 2, 3


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    """Machine output goes to ``out`` when given, else to standard output."""
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _symbol(args):
    sd = load_scheme(args.scheme)
    ps = sd.symbol
    if getattr(args, "interval", None):
        if ps.n_params != 1:
            raise UsageError("--interval needs a one-parameter family")
        lo, hi = args.interval
        if lo > hi:
            raise UsageError("--interval needs LO <= HI")
        ps = ps.restricted([(lo,), (hi,)])
    return sd, ps


def _analyze(args) -> int:
    sd, ps = _symbol(args)
    rep = analyze(ps, sd.m, ell=args.ell, depth=args.depth, tol=args.tol, method=args.method)
    print(rep.summary())
    doc = rep.to_dict()
    doc["scheme"] = sd.name
    doc["vertices"] = [[str(x) for x in v] for v in ps.domain]
    text = json.dumps(doc, indent=1) + "\n"
    _emit(text, args.out)
    return EXIT_OK if rep.convergent else EXIT_FAILED


def _matrices(args) -> int:
    sd, ps = _symbol(args)
    tf = restrict(ps, sd.m, args.ell, args.method)
    doc = tf.to_dict()
    if tf.exact is not None:
        doc["exact"] = {
            f"vertex_{v}/eps_{e}": [[str(x) for x in row] for row in tf.exact[(v, e)]]
            for v, e in sorted(tf.exact)
        }
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return EXIT_OK


_KEY = re.compile(r"^vertex_(\d+)/eps_(\d+)$")


def read_matrix_family(path) -> list[np.ndarray]:
    """Matrices of an exported family, ordered by (vertex, coset)."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemeFormatError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}", e.lineno, e.colno) from None
    mats = doc.get("matrices") if isinstance(doc, dict) else None
    if not isinstance(mats, dict) or not mats:
        raise SchemeFormatError(f"{path}: expected an object with a nonempty 'matrices' map")
    keyed = []
    for k, rows in mats.items():
        g = _KEY.match(k)
        order = (int(g.group(1)), int(g.group(2))) if g else (10**9, k)
        try:
            A = np.array(rows, dtype=float)
        except (TypeError, ValueError):
            raise SchemeFormatError(f"{path}: matrix {k!r} is not numeric") from None
        keyed.append((order, A))
    keyed.sort(key=lambda t: t[0])
    return [A for _, A in keyed]


def _jsr(args) -> int:
    mats = read_matrix_family(args.matrices)
    try:
        b = jsr_bounds(mats, args.depth, args.tol, ellipsoid=not args.no_ellipsoid)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(f"JSR in [{b.lower:.12g}, {b.upper:.12g}] (norm: {b.norm}, depth {b.max_depth}, "
          f"{'converged' if b.converged else 'not converged'})")
    doc = {"gamma_lo": b.lower, "gamma_hi": b.upper, "witness": list(b.witness), "norm": b.norm,
           "depth": b.max_depth, "converged": b.converged, "words": b.words}
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return EXIT_OK


def _schedule(sd, args) -> ParameterSchedule:
    sched = sd.default_schedule()
    if args.seed is not None:
        sched = dataclasses.replace(sched, seed=args.seed)
    return sched


def _render(args) -> int:
    sd = load_scheme(args.scheme)
    if sd.symbol.dim != 1:
        raise UsageError("render writes univariate data only")
    sched = _schedule(sd, args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "position", "value"])
    data = None
    for r in range(args.start, args.start + args.levels):
        data = cascade(sd.symbol, sched, r, 1, initial=data, m=sd.m)
        for x, v in zip(data.positions(), data.values):
            w.writerow([data.level, f"{float(x):.17g}", f"{float(v):.17g}"])
    print(f"# seed {sched.seed}, schedule {json.dumps(sched.to_dict())}", file=sys.stderr)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _support(args) -> int:
    sd = load_scheme(args.scheme)
    if sd.symbol.dim != 1:
        raise UsageError("support is computed for univariate schemes")
    lo, hi = limit_support(sd.symbol, _schedule(sd, args), args.start, sd.m)
    print(f"[{lo}, {hi}]")
    return EXIT_OK


def _gamma(args) -> int:
    sd = load_scheme(args.scheme)
    if sd.symbol.dim != 1:
        raise UsageError("zero sets are computed for univariate schemes")
    r1, r2 = args.levels
    if r1 < 1 or r2 < r1:
        raise UsageError("--levels needs 1 <= R1 <= R2")
    sched = _schedule(sd, args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "re", "im", "period"])
    for r in range(r1, r2 + 1):
        p = sd.symbol.instantiate(sched(r))
        g = gamma_set(p, r, sd.m)
        for b in g.base_points:
            w.writerow([r, f"{b.real:.17g}", f"{b.imag:.17g}", f"{g.period:.17g}"])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def read_zeros(path) -> list[complex]:
    zeros = []
    with open(path, encoding="utf-8", newline="") as fh:
        for n, row in enumerate(csv.reader(fh), 1):
            row = [c.strip() for c in row if c.strip()]
            if not row or row[0].startswith("#"):
                continue
            try:
                vals = [float(c) for c in row[:2]]
            except ValueError:
                if n == 1:
                    continue  # header
                raise SchemeFormatError(f"{path}: line {n}: expected 're[,im]'") from None
            zeros.append(complex(vals[0], vals[1] if len(vals) > 1 else 0.0))
    return zeros


def _generability(args) -> int:
    zeros = read_zeros(args.zeros)
    v = generability_necessary_test(zeros, args.m, args.window, args.rmax)
    print(f"verdict: {v.verdict} ({v.tested} zeros tested)")
    for w in v.violations:
        print(f"  no periodic partners for {w.real:.10g}{w.imag:+.10g}i")
    if v.verdict == "consistent":
        print("  (no witness inside the window; this does not prove generability)")
    _emit(json.dumps(v.to_dict(), indent=1) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subdivjsr", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def scheme_cmd(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("scheme", help="scheme JSON file")
        p.add_argument("--out", help="write machine output here instead of standard output")
        return p

    def jsr_flags(p):
        p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = scheme_cmd("analyze", "certify C^ell convergence and bound the Hölder exponent")
    p.add_argument("--interval", nargs=2, type=_fraction, metavar=("LO", "HI"))
    p.add_argument("--ell", type=int)
    p.add_argument("--method", choices=["auto", "univariate", "multivariate"], default="auto")
    jsr_flags(p)
    p.set_defaults(func=_analyze)

    p = scheme_cmd("matrices", "export restricted transition matrices as JSON")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--interval", nargs=2, type=_fraction, metavar=("LO", "HI"))
    p.add_argument("--method", choices=["auto", "univariate", "multivariate"], default="auto")
    p.set_defaults(func=_matrices)

    p = sub.add_parser("jsr", help="bracket the joint spectral radius of an exported family")
    p.add_argument("matrices", help="matrix-family JSON")
    p.add_argument("--out")
    p.add_argument("--no-ellipsoid", action="store_true", help="skip the semidefinite norm search")
    jsr_flags(p)
    p.set_defaults(func=_jsr)

    p = scheme_cmd("render", "run the cascade from a delta and write CSV samples")
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_render)

    p = scheme_cmd("support", "exact support of the basic limit function")
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_support)

    p = scheme_cmd("gamma", "periodic zero sets of the level symbols as CSV")
    p.add_argument("--levels", nargs=2, type=int, metavar=("R1", "R2"), default=[1, 4])
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_gamma)

    p = sub.add_parser("generability", help="necessary spectral test on a list of zeros")
    p.add_argument("zeros", help="CSV with columns re[,im]")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--window", type=float, default=20.0)
    p.add_argument("--rmax", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=_generability)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (SchemeFormatError, UsageError, DomainError, FileNotFoundError, IsADirectoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NotEnoughSumRulesError, SumRuleInconsistencyError) as e:
        print(f"analysis failed: {e}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run())
