"""End-to-end acceptance checks, one test per shipped guarantee.

Each test registers a PASS/FAIL line that the terminal summary prints, so
the full verdict is visible in one block at the end of the run.  Criteria
are checked at their stated tolerances — no loosening.  A failing line
means the guarantee does not hold on this machine and is reported as such.
"""

import math
import time

import numpy as np
import pytest
from conftest import record_acceptance

import treespectra.tolerances as tol
from treespectra import (
    DegenerateStatisticError,
    F_identity,
    SimulationConfig,
    antisymmetric_profile,
    build_full_basis,
    build_tree,
    contraction_factor,
    dense_eigensolve_symmetric,
    edge_list,
    estimate_tv_lower_bound,
    exact_contraction_check,
    fisher_yates,
    full_spectrum,
    interchange_gap,
    node_count,
    run_trajectories,
    single_card_matrix,
    spectral_gap,
    spectrum_compare,
    symmetric_profile,
    trial_generator,
    verify_eigenpair,
    verify_x_equation,
    walk_matrix,
    wilson_lower_bound,
    wilson_witness,
)

GRID = [(d, h) for d in (2, 3) for h in range(1, 6)]
STAT_SEED = 20260825
SIGMA_BAND = 3.5  # inside the stated 3-or-4 sigma window


def test_a01_spectrum_matches_dense_oracle():
    start = time.perf_counter()
    worst = 0.0
    all_ok = True
    for d, h in GRID:
        table = full_spectrum(d, h)
        dec = dense_eigensolve_symmetric(walk_matrix(build_tree(d, h)).entries)
        cmp_ = spectrum_compare(table, dec.eigenvalues, match_tol=1e-8)
        worst = max(worst, cmp_.max_abs_diff)
        all_ok = all_ok and cmp_.ok
    elapsed = time.perf_counter() - start
    ok = all_ok and worst <= 1e-8
    record_acceptance(
        "A1 analytic spectrum == dense Jacobi oracle, {2,3}x{1..5}",
        ok, f"max |dLambda| = {worst:.2e} (tol 1e-08), {elapsed:.1f}s")
    assert ok


def test_a02_multiplicity_count_is_exactly_n():
    bad = []
    for d in range(2, 6):
        for h in range(1, 13):
            total = full_spectrum(d, h).total_multiplicity()
            if total != node_count(d, h):
                bad.append((d, h, total))
    ok = not bad
    record_acceptance(
        "A2 multiplicities sum to n exactly, d<=5 h<=12",
        ok, "48/48 tables exact" if ok else f"mismatches: {bad}")
    assert ok, bad


def test_a03_eigenbasis_residuals_and_rank():
    worst = 0.0
    ranks_ok = True
    for d, h in GRID:
        g = build_tree(d, h)
        basis = build_full_basis(g)
        worst = max(worst, max(verify_eigenpair(g, r) for r in basis.records))
        ranks_ok = ranks_ok and basis.rank(pivot_tol=1e-8) == g.n
    ok = worst <= 1e-9 and ranks_ok
    record_acceptance(
        "A3 basis: eigen-residual <= 1e-09 and full rank, {2,3}x{1..5}",
        ok, f"max residual = {worst:.2e}, all ranks full = {ranks_ok}")
    assert ok


def test_a04_closed_forms_and_stored_roots():
    worst_gap = 0.0
    worst_res = 0.0
    for d, h in GRID:
        for line in full_spectrum(d, h).lines:
            if line.family == "symmetric":
                p = symmetric_profile(d, h, line.lam)
                worst_gap = max(worst_gap, p.closed_form_gap)
            elif line.family == "antisymmetric":
                p = antisymmetric_profile(d, line.index, line.lam)
                worst_gap = max(worst_gap, p.closed_form_gap)
            h_or_k = h if line.family in ("trivial", "symmetric") \
                else line.index
            for x in line.x_pair:
                worst_res = max(
                    worst_res, verify_x_equation(d, h_or_k, line.family, x))
    ok = worst_gap <= 1e-8 and worst_res <= 1e-9
    record_acceptance(
        "A4 recurrence vectors == closed forms; stored roots solve their "
        "equations",
        ok, f"max closed-form gap = {worst_gap:.2e} (tol 1e-08), "
            f"max root residual = {worst_res:.2e} (tol 1e-09)")
    assert ok


def test_a05_second_eigenvalue_asymptotics_and_floor():
    worst_ratio = 0.0
    for h in range(6, 11):
        sg = spectral_gap(2, h)
        budget = 4.0 * (h + 1) / 2.0 ** (2 * h)
        worst_ratio = max(worst_ratio, sg.deviation / budget)
    floor_ok = True
    for d, h in GRID + [(2, h) for h in range(6, 11)]:
        floor = -2.0 * math.sqrt(d) / (d + 1.0)
        floor_ok = floor_ok and \
            full_spectrum(d, h).min_eigenvalue() >= floor - 1e-12
    ok = worst_ratio <= 1.0 and floor_ok
    record_acceptance(
        "A5 lambda2 deviation <= 4(h+1)/d^(2h) (d=2, h=6..10); spectral "
        "floor holds",
        ok, f"worst deviation/budget = {worst_ratio:.3f}, "
            f"floor respected = {floor_ok}")
    assert ok


def test_a06_single_card_affine_identity_and_gap():
    worst_affine = 0.0
    gap_ok = True
    for d in (2, 3):
        for h in (1, 2, 3):
            g = build_tree(d, h)
            n = g.n
            q = walk_matrix(g).entries
            p = single_card_matrix(g).entries
            affine = ((2 * n - d - 3) * np.eye(n) + (d + 1) * q) \
                / (2.0 * (n - 1))
            worst_affine = max(worst_affine,
                               float(np.max(np.abs(p - affine))))
            ig = interchange_gap(d, h)
            budget = (d + 1) / (2.0 * (n - 1)) * 4.0 * (h + 1) / d ** (2 * h)
            gap_ok = gap_ok and \
                abs(ig.gap_exact - ig.gap_asymptotic) <= budget
    ok = worst_affine <= 1e-15 and gap_ok
    record_acceptance(
        "A6 single-card chain is the stated affine image of the walk; "
        "scaled gap budget",
        ok, f"max affine defect = {worst_affine:.2e} (tol 1e-15), "
            f"gap within scaled budget = {gap_ok}")
    assert ok


def test_a07_exact_contraction_for_identity_and_100_permutations():
    worst = 0.0
    resampled = 0
    for d, h in [(2, 2), (2, 3), (3, 2)]:
        g = build_tree(d, h)
        w = wilson_witness(g)
        lp = contraction_factor(d, h, w.lam)
        ident = np.arange(g.n, dtype=np.int64)
        worst = max(worst, abs(exact_contraction_check(g, w.f, ident) - lp))
        accepted, idx = 0, 0
        while accepted < 100:
            perm = fisher_yates(g.n, trial_generator(777, idx))
            idx += 1
            try:
                ratio = exact_contraction_check(g, w.f, perm)
            except DegenerateStatisticError:
                resampled += 1
                continue
            accepted += 1
            worst = max(worst, abs(ratio - lp))
    ok = worst <= 1e-12
    record_acceptance(
        "A7 one-step expectation ratio == lambda' exactly (id + 100 "
        "seeded permutations)",
        ok, f"max |ratio - lambda'| = {worst:.2e} (tol 1e-12), "
            f"{resampled} degenerate draws resampled")
    assert ok


def test_a08_witness_bounds_with_frozen_onset():
    ONSET = 4  # F(id) >= d n / 2 first holds at this height (frozen)
    sup_ok = True
    edge_ok = True
    onset_ok = True
    for h in range(3, 9):
        g = build_tree(2, h)
        f = wilson_witness(g).f
        sup_ok = sup_ok and float(np.max(np.abs(f))) <= 2.0
        for u, v in edge_list(g).edges:
            l = g.level(v)
            if abs(f[u] - f[v]) > 2.0 / 2.0 ** (l - 1):
                edge_ok = False
        holds = F_identity(f) >= 2.0 * g.n / 2.0
        onset_ok = onset_ok and (holds == (h >= ONSET))
    ok = sup_ok and edge_ok and onset_ok
    record_acceptance(
        "A8 witness bounds (d=2, h=3..8): |f| <= d, per-edge decay, "
        "F(id) >= dn/2 from h=4",
        ok, f"sup bound = {sup_ok}, edge bound = {edge_ok}, "
            f"onset at h=4 = {onset_ok}")
    assert ok


def test_a09_threshold_sign_and_scaling_window():
    vacuous_ok = wilson_lower_bound(2, 3, 0.25).vacuous
    positive_ok = True
    ratios = {}
    window_ok = True
    for h in range(6, 11):
        rep = wilson_lower_bound(2, h, 0.25)
        positive_ok = positive_ok and rep.t0_computed_R > 0
        n = rep.n
        scale = n * n * (math.log(n) + math.log(0.25))
        ratios[h] = rep.t0_computed_R / scale
        window_ok = window_ok and 0.5 <= ratios[h] <= 1.5
    ok = vacuous_ok and positive_ok and window_ok
    shown = ", ".join(f"h={h}: {r:.3f}" for h, r in ratios.items())
    record_acceptance(
        "A9 threshold: vacuous with pessimistic R at (2,3); positive and "
        "in [0.5, 1.5] x n^2(log n + log eps) for h=6..10",
        ok, f"vacuous = {vacuous_ok}, positive = {positive_ok}, "
            f"ratios [{shown}]")
    assert ok, (
        "scaling-window ratios fall below 0.5 for h <= 9 "
        f"({shown}); see the decisions ledger for the analysis")


def test_a10a_one_step_marginal_matches_single_card_rows():
    g = build_tree(2, 1)
    trials = 100_000
    cfg = SimulationConfig(
        d=2, h=1, steps=1, trials=trials, seed=STAT_SEED,
        observers=frozenset({"card_position:0", "card_position:1",
                             "card_position:2"}))
    stats = run_trajectories(cfg)
    rows = single_card_matrix(g).entries
    worst_z = 0.0
    zeros_ok = True
    for card in range(3):
        emp = np.bincount(stats.card_positions[card], minlength=3) / trials
        for node in range(3):
            p = rows[card, node]
            if p == 0.0:
                zeros_ok = zeros_ok and emp[node] == 0.0
            else:
                se = math.sqrt(p * (1 - p) / trials)
                worst_z = max(worst_z, abs(emp[node] - p) / se)
    ok = worst_z <= SIGMA_BAND and zeros_ok
    record_acceptance(
        "A10a one-step card marginal == single-card rows "
        "(1e5 samples, d=2 h=1)",
        ok, f"max z = {worst_z:.2f} (band {SIGMA_BAND}), structural zeros "
            f"exact = {zeros_ok}")
    assert ok


def test_a10b_mean_trace_follows_power_law():
    cfg = SimulationConfig(d=2, h=2, steps=200, trials=10_000,
                           seed=STAT_SEED)
    stats = run_trajectories(cfg)
    lam2 = spectral_gap(2, 2).lambda2
    lp = contraction_factor(2, 2, lam2)
    pred = stats.F_id * lp ** np.arange(201)
    se = np.sqrt(stats.F_var_per_step[1:] / cfg.trials)
    z = np.abs(stats.F_mean_per_step[1:] - pred[1:]) / se
    worst = float(np.max(z))
    ok = worst <= SIGMA_BAND
    record_acceptance(
        "A10b mean F-trace == lambda'^t F(id) (1e4 trials, t <= 200)",
        ok, f"max z over t=1..200 = {worst:.2f} (band {SIGMA_BAND})")
    assert ok


def test_a10c_tv_bound_near_one_then_small():
    n = node_count(2, 2)
    t_late = int(round(50 * n * n * math.log(n)))
    cfg = SimulationConfig(d=2, h=2, steps=0, trials=10_000, seed=STAT_SEED)
    at0 = estimate_tv_lower_bound(cfg, t=0)
    # exact value over all 5040 arrangements for the midpoint threshold
    exact0 = 0.9031746031746032
    start_ok = (at0.lower_bound >= 0.8
                and abs(at0.lower_bound - exact0) <= 4 * at0.stderr)
    late = estimate_tv_lower_bound(cfg, t=t_late)
    late_ok = late.lower_bound <= 0.1
    ok = start_ok and late_ok
    record_acceptance(
        "A10c TV lower bound ~ 1 at t=0 and <= 0.1 at t = 50 n^2 log n "
        "(1e4 trials)",
        ok, f"t=0: {at0.lower_bound:.4f} (exact {exact0:.4f}, stderr "
            f"{at0.stderr:.4f}); t={t_late}: {late.lower_bound:.4f}")
    assert ok
