import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subdivjsr.jsr import (
    MatrixFamily,
    common_invariant_subspace_probe,
    interval_family_jsr,
    jsr_bounds,
    spectral_radius,
    word_product,
)
from subdivjsr.transition import restrict

from conftest import fourpoint_family
from oracles import brute_jsr

GOLDEN = (1 + math.sqrt(5)) / 2


def test_single_matrix_bracket_is_its_spectral_radius():
    A = np.array([[0.5, 0.2], [0.0, 0.3]])
    b = jsr_bounds([A])
    assert b.lower == pytest.approx(0.5)
    assert b.upper <= 0.5 * (1 + 1e-6) + 1e-12


def test_golden_ratio_pair():
    # JSR of these two shears is attained by the product of both
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    B = np.array([[1.0, 0.0], [1.0, 1.0]])
    b = jsr_bounds([A, B], depth=20, tol=1e-6)
    assert b.contains(GOLDEN, 1e-9)
    assert b.lower == pytest.approx(GOLDEN, rel=1e-12)
    assert sorted(b.witness) == [0, 1]


def test_witness_reproduces_lower_bound():
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    B = np.array([[1.0, 0.0], [1.0, 1.0]])
    b = jsr_bounds([A, B])
    P = word_product([A, B], b.witness)
    assert spectral_radius(P) ** (1 / len(b.witness)) == pytest.approx(b.lower, rel=1e-12)


def test_upper_bound_is_a_norm_bound_in_the_certificate():
    tf = restrict(fourpoint_family(), 2, 1)
    b = interval_family_jsr(tf)
    T = b.transform
    Tinv = np.linalg.inv(T)
    # the bracket closes at length one: every member has a norm at most the upper end
    if b.norm.startswith("ellipsoidal") or "2" in b.norm:
        vals = [np.linalg.norm(T @ A @ Tinv, 2) for A in tf.family()]
    else:
        p = 1 if "1" in b.norm else np.inf
        vals = [np.linalg.norm(T @ A @ Tinv, p) for A in tf.family()]
    assert max(vals) <= b.upper * (1 + 1e-12)


def test_full_range_family_closes_at_length_one():
    b = interval_family_jsr(restrict(fourpoint_family(), 2, 1))
    assert b.max_depth == 1
    assert abs(b.lower - 0.5) <= 1e-9 and abs(b.upper - 0.5) <= 1e-9


def test_defective_matrix_stays_sound():
    J = np.array([[1.0, 1.0], [0.0, 1.0]])
    b = jsr_bounds([J], depth=12, tol=1e-9, ellipsoid=False)
    assert b.lower <= 1 + 1e-12 <= b.upper + 1e-12


def test_zero_family():
    b = jsr_bounds([np.zeros((3, 3))])
    assert b.lower == b.upper == 0.0


def test_stop_above_returns_early():
    A = np.array([[2.0]])
    b = jsr_bounds([A], stop_above=1.0)
    assert b.lower == 2.0 and not b.converged


@pytest.mark.parametrize(
    "mats",
    [[], [np.ones((2, 3))], [np.eye(2), np.eye(3)], [np.array([[np.nan]])]],
)
def test_invalid_families(mats):
    with pytest.raises(ValueError):
        MatrixFamily.of(mats)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        jsr_bounds([np.eye(2)], depth=0)
    with pytest.raises(ValueError):
        jsr_bounds([np.eye(2)], tol=0)


def test_thread_count_does_not_change_bracket(monkeypatch):
    rng = np.random.default_rng(3)
    mats = [rng.standard_normal((3, 3)) for _ in range(2)]
    monkeypatch.setenv("SUBDIV_JSR_THREADS", "1")
    a = jsr_bounds(mats, depth=8, ellipsoid=False)
    monkeypatch.setenv("SUBDIV_JSR_THREADS", "4")
    b = jsr_bounds(mats, depth=8, ellipsoid=False)
    assert (a.lower, a.upper, a.witness) == (b.lower, b.upper, b.witness)


def test_reducible_family_is_detected():
    A = np.array([[1.0, 2.0, 0.0], [0.0, 0.5, 1.0], [0.0, 0.0, 0.3]])
    B = np.array([[0.2, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.7]])
    rep = common_invariant_subspace_probe([A, B])
    assert not rep.irreducible
    assert min(S.shape[1] for S in rep.subspaces) == 1


def test_generic_family_looks_irreducible():
    rng = np.random.default_rng(0)
    rep = common_invariant_subspace_probe([rng.standard_normal((4, 4)) for _ in range(2)])
    assert rep.irreducible


small = st.lists(st.floats(-2, 2, allow_nan=False, width=32), min_size=4, max_size=4).map(
    lambda v: np.array(v, dtype=float).reshape(2, 2)
)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=3))
def test_bracket_contains_brute_force_lower_bound(mats):
    b = jsr_bounds(mats, depth=6, ellipsoid=False)
    lo, hi = brute_jsr(mats, 3)
    assert b.lower <= hi * (1 + 1e-9) + 1e-12
    assert lo <= b.upper * (1 + 1e-9) + 1e-12
    assert b.lower <= b.upper
