"""Witness statistic, single-card eigenvalue, and the mixing lower bound."""

import math

import numpy as np
import pytest

from treespectra import (
    F_identity,
    F_statistic,
    build_tree,
    contraction_factor,
    edge_list,
    expected_square_increment,
    expected_statistic_after_step,
    gamma_from_lambda,
    interchange_gap,
    lambda_prime_from_lambda,
    node_count,
    spectral_gap,
    trial_generator,
    variance_bound,
    wilson_lower_bound,
    wilson_witness,
)


# -- witness vector -----------------------------------------------------------

def test_witness_frozen_values_and_regime():
    g = build_tree(2, 3)
    w = wilson_witness(g)
    assert w.real_x_regime
    assert w.x.imag == 0.0
    assert w.x.real == pytest.approx(0.8894793937131029, abs=1e-12)
    assert w.f[1] == pytest.approx(0.5179858198706272, abs=1e-12)
    assert w.f[7] == pytest.approx(0.832486023799878, abs=1e-12)
    assert F_identity(w.f) == pytest.approx(8.342364899200504, abs=1e-10)


def test_witness_exists_in_complex_regime_with_flag():
    # shallow binary trees have a complex root pair; the witness is still a
    # real eigenvector, built by the recurrence lift, with the flag down
    w = wilson_witness(build_tree(2, 2))
    assert not w.real_x_regime
    assert w.x.imag != 0.0
    assert np.isrealobj(w.f)


@pytest.mark.parametrize("h", range(3, 9))
def test_witness_bounds_d2(h):
    g = build_tree(2, h)
    f = wilson_witness(g).f
    assert np.max(np.abs(f)) <= 2.0
    for u, v in edge_list(g).edges:
        l = g.level(v)  # child endpoint sets the level of the edge
        assert abs(f[u] - f[v]) <= 2.0 / 2.0 ** (l - 1)


def test_witness_is_walk_eigenvector():
    from treespectra import walk_residual
    for d, h in [(2, 3), (3, 2), (2, 5)]:
        g = build_tree(d, h)
        w = wilson_witness(g)
        assert walk_residual(g, w.f, w.lam) <= 1e-9


# -- statistic algebra --------------------------------------------------------

def test_F_statistic_identity_and_permutation():
    f = np.array([1.0, -2.0, 0.5])
    assert F_identity(f) == pytest.approx(1.0 + 4.0 + 0.25, abs=1e-15)
    mapping = np.array([2, 0, 1])  # card 2 at node 0, etc.
    expected = f[0] * f[2] + f[1] * f[0] + f[2] * f[1]
    assert F_statistic(f, mapping) == pytest.approx(expected, abs=1e-15)


def test_single_card_eigenvalue_formulas_agree():
    for d, h in [(2, 2), (2, 3), (3, 2)]:
        n = node_count(d, h)
        lam2 = spectral_gap(d, h).lambda2
        lp = lambda_prime_from_lambda(d, n, lam2)
        assert contraction_factor(d, h, lam2) == lp
        gamma = gamma_from_lambda(d, n, lam2)
        # two routes to the same number: direct and via 1 - lambda'
        assert gamma == pytest.approx((d + 1) * (1 - lam2) / (2 * (n - 1)),
                                      abs=1e-16)
        assert abs(gamma - (1.0 - lp)) <= 1e-14


def test_single_card_eigenvalue_frozen_values():
    assert lambda_prime_from_lambda(2, 7, spectral_gap(2, 2).lambda2) \
        == pytest.approx(0.9776709006307397, abs=1e-13)
    assert lambda_prime_from_lambda(2, 15, spectral_gap(2, 3).lambda2) \
        == pytest.approx(0.9965432830682698, abs=1e-13)
    assert lambda_prime_from_lambda(3, 13, spectral_gap(3, 2).lambda2) \
        == pytest.approx(0.99130366031158, abs=1e-13)


def test_one_step_expectation_contracts_by_lambda_prime():
    g = build_tree(2, 3)
    w = wilson_witness(g)
    lp = contraction_factor(2, 3, w.lam)
    rng = trial_generator(999, 0)
    for trial in range(5):
        mapping = rng.permutation(g.n).astype(np.int64)
        F = F_statistic(w.f, mapping)
        expected = expected_statistic_after_step(g, w.f, mapping)
        assert expected == pytest.approx(lp * F, abs=1e-12 * max(1, abs(F)))


def test_variance_bound_routes():
    g = build_tree(2, 3)
    f = wilson_witness(g).f
    r_paper, r_computed = variance_bound(g, f)
    assert r_paper == pytest.approx(64 * 2 ** 4 / 14.0, abs=1e-12)
    assert r_computed == pytest.approx(0.0799405059438461, abs=1e-12)
    # the computed route dominates the realized mean-square increment at
    # any arrangement (|f(m(v)) - f(m(u))| <= 2 max |f|)
    rng = trial_generator(555, 0)
    for trial in range(5):
        mapping = rng.permutation(g.n).astype(np.int64)
        assert expected_square_increment(g, f, mapping) <= r_computed + 1e-15


def test_expected_square_increment_identity_case():
    g = build_tree(2, 2)
    f = wilson_witness(g).f
    ident = np.arange(g.n, dtype=np.int64)
    # at the identity every swap changes F by -(f(u)-f(v))^2
    manual = sum((f[u] - f[v]) ** 4 for u, v in edge_list(g).edges)
    manual /= 2.0 * (g.n - 1)
    assert expected_square_increment(g, f, ident) == pytest.approx(
        manual, abs=1e-15)


# -- threshold report ---------------------------------------------------------

def test_wilson_report_frozen_values():
    rep = wilson_lower_bound(2, 3, 0.25)
    d = rep.as_dict()
    assert set(d) == {"d", "h", "n", "epsilon", "lambda2", "lambda_prime",
                      "gamma", "F_id", "R_paper", "R_computed", "t0_paper_R",
                      "t0_computed_R", "vacuous"}
    assert d["vacuous"] is True
    assert d["t0_paper_R"] == pytest.approx(-1225.8834181455102, abs=1e-9)
    assert d["t0_computed_R"] == pytest.approx(-241.26493125586782, abs=1e-9)
    assert d["gamma"] == pytest.approx(0.0034567169317302393, abs=1e-15)


def test_wilson_threshold_positive_for_deep_trees():
    for h in (6, 8):
        rep = wilson_lower_bound(2, h, 0.25)
        assert rep.t0_computed_R > 0
        assert rep.vacuous  # the pessimistic variance constant stays vacuous


def test_threshold_grows_with_epsilon():
    # a larger allowed distance-from-1 buys strictly more provable steps
    t0s = [wilson_lower_bound(2, 7, eps).t0_computed_R
           for eps in (0.05, 0.25, 0.6)]
    assert t0s[0] < t0s[1] < t0s[2]


def test_wilson_report_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        wilson_lower_bound(2, 6, 0.0)
    with pytest.raises(ValueError):
        wilson_lower_bound(2, 6, 1.0)


# -- interchange gap ----------------------------------------------------------

def test_interchange_gap_frozen_case():
    ig = interchange_gap(2, 2)
    assert ig.gap_exact == pytest.approx(0.022329099369260225, abs=1e-14)
    assert ig.gap_asymptotic == pytest.approx(1.0 / 96.0, abs=1e-16)
    assert ig.ratio == pytest.approx(2.1435935394489816, abs=1e-12)


def test_interchange_gap_is_scaled_walk_gap():
    for d, h in [(2, 2), (2, 4), (3, 3)]:
        n = node_count(d, h)
        sg = spectral_gap(d, h)
        ig = interchange_gap(d, h)
        assert ig.gap_exact == pytest.approx(
            (d + 1) * sg.gap / (2.0 * (n - 1)), abs=1e-16)


def test_interchange_ratio_approaches_one():
    ratios = [interchange_gap(2, h).ratio for h in range(2, 11)]
    assert all(abs(r2 - 1.0) < abs(r1 - 1.0)
               for r1, r2 in zip(ratios, ratios[1:]))
    assert abs(ratios[-1] - 1.0) < 0.01


def test_t0_denominator_uses_log1p():
    # gamma is tiny for deep trees; -log1p(-gamma) keeps full precision
    rep = wilson_lower_bound(2, 10, 0.25)
    denom = -math.log1p(-rep.gamma)
    assert denom > 0
    num = (math.log(rep.F_id)
           + 0.5 * math.log(rep.gamma * 0.25 / (4.0 * rep.R_computed)))
    assert rep.t0_computed_R == pytest.approx(num / denom, rel=1e-12)
