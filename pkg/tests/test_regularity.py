import json
import math
from fractions import Fraction as F

import pytest

from subdivjsr.laurent import LaurentPoly, ParamSymbol
from subdivjsr.regularity import analyze, stationary_analyze

from conftest import fourpoint_family, hat


def test_hat_is_c0_with_exponent_one():
    rep = stationary_analyze(hat())
    # b = z**-1 / 2 after two smoothing factors: gamma = 1/2 at ell = 1 is not below 1/2
    assert rep.sum_rule_order == 2
    assert rep.convergent_in == 0
    assert rep.holder_lower == pytest.approx(1.0, abs=1e-6)


def test_haar_boundary_is_not_certified():
    rep = stationary_analyze(1 + LaurentPoly.var(0))
    assert rep.sum_rule_order == 1
    assert rep.jsr.lower == pytest.approx(1.0) and rep.jsr.upper == pytest.approx(1.0)
    assert rep.convergent_in == -1
    assert any("threshold" in n for n in rep.notes)


def test_no_sum_rules():
    rep = stationary_analyze(LaurentPoly.var(0) * 3)
    assert rep.sum_rule_order == 0 and rep.jsr is None and not rep.convergent


def test_fourpoint_family_boundary():
    # gamma = 1/2 exactly at ell = 1, so only C^0 is certified, with exponent about 1
    rep = analyze(fourpoint_family())
    first = rep.attempts[0]
    assert first.ell == 1 and not first.certified
    assert first.jsr.upper == pytest.approx(0.5, abs=1e-9)
    assert rep.convergent_in == 0
    assert rep.holder_lower == pytest.approx(1.0, abs=1e-6)


def test_subdomain_sharpens_the_bound():
    ps = fourpoint_family()
    full = analyze(ps)
    sub = analyze(ps, subdomain=[(F(3, 64),), (F(1, 16),)])
    assert sub.holder_lower >= full.holder_lower
    assert sub.holder_lower == pytest.approx(-math.log2(3 / 8), abs=1e-3)


def test_requested_ell_is_capped():
    rep = analyze(fourpoint_family(), ell=5)
    assert rep.attempts[0].ell == 1
    assert any("exceeds" in n for n in rep.notes)


def test_report_serializes():
    d = analyze(fourpoint_family()).to_dict()
    json.dumps(d)
    for key in ("order", "ell", "gamma_lo", "gamma_hi", "alpha_lower", "convergent"):
        assert key in d


def test_summary_mentions_verdict():
    text = analyze(fourpoint_family()).summary()
    assert "C^0" in text and "Hölder" in text


def test_attempts_descend_until_certified():
    ps = ParamSymbol.stationary(fourpoint_family().instantiate(F(1, 16)))
    rep = analyze(ps, depth=8)
    assert [a.ell for a in rep.attempts][:1] == [3]
    assert rep.attempts[-1].certified
    assert all(not a.certified for a in rep.attempts[:-1])
