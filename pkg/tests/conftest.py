from fractions import Fraction as F
from pathlib import Path

import pytest

from subdivjsr import LaurentPoly, ParamSymbol

SCHEMES = Path(__file__).resolve().parent.parent / "schemes"

# (criterion, passed, detail) rows filled in by test_acceptance
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def z():
    return LaurentPoly.var(0)


def hat():
    """Linear B-spline symbol z**-1 (1+z)**2 / 2."""
    return LaurentPoly.monomial((-1,)) * (1 + z()) ** 2 * F(1, 2)


def fourpoint_direction():
    return LaurentPoly.from_coeffs([-1, 0, 1, 0, 1, 0, -1], -3)


def fourpoint():
    return hat() + fourpoint_direction() * F(1, 16)


def dd6():
    return LaurentPoly.monomial((-5,)) * (1 + z()) ** 6 * LaurentPoly.from_coeffs([3, -18, 38, -18, 3]) * F(1, 256)


def fourpoint_family(lo=0, hi=F(1, 16)):
    return ParamSymbol.interval(hat(), fourpoint_direction(), lo, hi)


def mixture_family(lo=0, hi=F(1, 2)):
    """omega * four-point + (1 - omega) * six-point."""
    return ParamSymbol.interval(dd6(), fourpoint() - dd6(), lo, hi)


BUTTERFLY_C = {
    (-1, -2): 1, (-1, 2): 1, (-2, -1): 1, (2, -1): 1, (2, 3): -2, (3, 2): -2, (2, 4): 1, (4, 2): 1,
    (3, 4): 1, (4, 3): 1, (-1, 0): -2, (-2, 0): 1, (2, 0): -2, (0, -1): -2, (3, 0): 1, (0, -2): 1,
    (0, 2): -2, (0, 3): 1,
}


def butterfly_family():
    z1, z2 = LaurentPoly({(1, 0): 1}, 2), LaurentPoly({(0, 1): 1}, 2)
    one = LaurentPoly.constant(1, 2)
    base = (one + z1) * (one + z2) * (one + z1 * z2) * F(1, 2)
    return ParamSymbol(base, (LaurentPoly(BUTTERFLY_C, 2),), ((0,), (F(1, 16),)))


@pytest.fixture
def schemes_dir():
    return SCHEMES
