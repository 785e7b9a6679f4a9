"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criteria 1-5 and 7-9 are expected to pass.  Criterion 6 asserts the full
qualitative reproduction of the variance-vs-delta figures across all seven
fields at X = 1000; at this desk scale the real fields (and one imaginary
field's inversion count) genuinely violate the stated bands, so the test
reports per-field details and fails honestly.  See the README for the
analysis of why X = 1000 is below the asymptotic regime for the statistic.
"""

import math
import random

import numpy as np
import pytest

from quadprimes.fields import FieldSpec, BasisKind, make_field
from quadprimes.ideals import (
    SplitType,
    condensation_sum,
    dual_lattice_count,
    enumerate_prime_ideals,
    enumerate_squarefree_ideals,
    ideal_lattice,
    ideal_smoothed_count,
    ideal_smoothed_count_scaled,
    ramanujan_smoothed_sum_scaled,
    split_prime,
    SquarefreeIdeal,
)
from quadprimes.primes import build_grid, count_primes_box, is_prime_element
from quadprimes.singular_series import (
    mobius_phi_profile,
    montgomery_sum,
    residue_rk,
    sieved_singular_box,
    singular_series,
    singular_sum_smoothed,
)
from quadprimes.smoothing import Kind, TestFunction
from quadprimes.statistics import variance_profile, zbaseline_row

Qi = make_field(-1)


def report(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)


def fit_slope(x, y) -> float:
    return float(np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)[0])


def test_criterion_1_exact_identities(capsys):
    fields = [make_field(-1), make_field(-3), make_field(2),
              FieldSpec(5, BasisKind.HALF)]
    bad = 0
    checked = 0
    for field in fields:
        box = [(k1, k2) for k1 in range(-20, 21) for k2 in range(-20, 21)]
        for c in enumerate_squarefree_ideals(field, 200):
            nc = c.norm
            for (k1, k2) in box:
                eta = field.element(k1, k2)
                want = nc if c.contains(eta) else 0
                if condensation_sum(c, eta) != want:
                    bad += 1
                checked += 1
    # Moebius-inversion identity for S_q, integer-scaled so equality is exact
    sq_bad = 0
    for field in (Qi, make_field(2)):
        for a in enumerate_squarefree_ideals(field, 50):
            for H in (1, 3, 7, 20):
                lhs = sum(ramanujan_smoothed_sum_scaled(q, H)
                          for q in a.divisors())
                rhs = a.norm * ideal_smoothed_count_scaled(a, H)
                if lhs != rhs:
                    sq_bad += 1
    ok = bad == 0 and sq_bad == 0
    report(capsys, 1, ok,
           f"condensation: {checked} cases, {bad} mismatches; "
           f"S_q inversion: {sq_bad} mismatches")
    assert ok


def test_criterion_2_residue_oracles(capsys):
    oracles = {
        -1: math.pi / 4.0,
        -3: math.pi / (3.0 * math.sqrt(3.0)),
        2: math.log(1.0 + math.sqrt(2.0)) / math.sqrt(2.0),
    }
    errs = {}
    for D, want in oracles.items():
        got = residue_rk(make_field(D), 1e-6).value
        errs[D] = abs(got - want)
    ok = all(e <= 1e-5 for e in errs.values())
    detail = ", ".join(f"D={D}: err={e:.2e}" for D, e in errs.items())
    report(capsys, 2, ok, detail)
    assert ok


def test_criterion_3_montgomery_slope(capsys):
    Hs = [2 ** k for k in range(10, 18)]
    sums = [montgomery_sum(H, cutoff=1_000_000) for H in Hs]
    slope = fit_slope([math.log(H) for H in Hs], sums)
    ok = abs(slope - (-0.5)) <= 0.05
    report(capsys, 3, ok, f"slope {slope:.4f} (target -0.500 +/- 0.05)")
    assert ok


def test_criterion_4_mu2_phi_drift(capsys):
    rk = residue_rk(Qi, 1e-8).value
    cutoffs = [2 ** k for k in range(10, 20)] + [10 ** 6]
    cutoffs = [y for y in cutoffs if 10 ** 3 <= y <= 10 ** 6]
    sums = mobius_phi_profile(Qi, cutoffs)
    drift = [s - rk * math.log(y) for s, y in zip(sums, cutoffs)]
    spread = max(drift) - min(drift)
    ok = spread <= 0.5
    report(capsys, 4, ok, f"drift max-min {spread:.4f} (bound 0.5)")
    assert ok


def test_criterion_5_smoothed_sum_slopes(capsys):
    Hs = [32, 64, 128, 256, 512]
    logH = [math.log(H) for H in Hs]
    rk = residue_rk(Qi, 1e-8).value
    results = {}
    for kind, tol in ((Kind.DISC_AUTOCORR, 0.10), (Kind.SQUARE_AUTOCORR, 0.15)):
        w = TestFunction(kind)
        sums = [singular_sum_smoothed(Qi, w, H, cutoff=1_000_000).value
                for H in Hs]
        slope = fit_slope(logH, sums)
        target = -w.value_at_zero * rk * 2.0
        results[kind.value] = (slope, target, abs(slope / target - 1.0) <= tol)
    ok = all(v[2] for v in results.values())
    detail = "; ".join(
        f"{k}: slope {s:.3f} vs target {t:.3f}" for k, (s, t, _) in results.items()
    )
    report(capsys, 5, ok, detail)
    assert ok


def test_criterion_6_variance_figures(capsys):
    deltas = [round(0.1 * k, 1) for k in range(1, 10)]
    lines = []
    ok = True
    for D in (-1, -3, -5, -7, 2, 3, 10):
        field = make_field(D)
        rows = variance_profile(field, 1000.0, deltas)
        ratios = [r.ratio for r in rows]
        inversions = sum(1 for a, b in zip(ratios, ratios[1:]) if b > a)
        slope = fit_slope(deltas, ratios)
        field_ok = inversions <= 1 and -1.5 <= slope <= -0.5
        ok = ok and field_ok
        lines.append(f"D={D}: slope {slope:.3f}, inversions {inversions}"
                     f" [{'ok' if field_ok else 'violated'}]")
    report(capsys, 6, ok, "; ".join(lines))
    assert ok


def test_criterion_7_rational_baseline_bands(capsys):
    row = zbaseline_row(10 ** 5, 0.5)
    lhs = abs(math.sqrt(row.V_lambda) / math.log(row.X) - math.sqrt(row.V_prime))
    consistency = lhs / math.sqrt(row.V_prime)
    ok = (0.5 <= row.ratio_lambda <= 1.5 and 0.5 <= row.ratio_prime <= 1.5
          and consistency <= 0.25)
    report(capsys, 7, ok,
           f"ratio_prime {row.ratio_prime:.3f}, ratio_lambda "
           f"{row.ratio_lambda:.3f}, weight consistency {consistency:.3f}")
    assert ok


def test_criterion_8_oracle_equivalences(capsys):
    # sieved box vs pointwise Euler products: bit-for-bit
    box = sieved_singular_box(Qi, 10, cutoff=1000)
    box_bad = 0
    for k1 in range(-10, 11):
        for k2 in range(-10, 11):
            if k1 == 0 and k2 == 0:
                continue
            if box.value_at(k1, k2).value != singular_series(
                    Qi.element(k1, k2), cutoff=1000).value:
                box_bad += 1
    # prefix-grid box counts vs brute-force scans
    grid = build_grid(Qi, 60)
    rng = random.Random(0)
    scan_bad = 0
    for _ in range(200):
        cx = rng.uniform(-45.0, 45.0)
        cy = rng.uniform(-45.0, 45.0)
        H = rng.uniform(0.5, 12.0)
        lo1, hi1 = math.ceil(cx - H), math.floor(cx + H)
        lo2, hi2 = math.ceil(cy - H), math.floor(cy + H)
        direct = sum(
            1
            for k1 in range(lo1, hi1 + 1)
            for k2 in range(lo2, hi2 + 1)
            if is_prime_element(Qi.element(k1, k2))
        )
        if count_primes_box(grid, cx, cy, H) != direct:
            scan_bad += 1
    total_direct = sum(
        1
        for k1 in range(-60, 61)
        for k2 in range(-60, 61)
        if is_prime_element(Qi.element(k1, k2))
    )
    totals_match = grid.total_primes() == total_direct
    ok = box_bad == 0 and scan_bad == 0 and totals_match
    report(capsys, 8, ok,
           f"box mismatches {box_bad}, scan mismatches {scan_bad}/200, "
           f"grid total {'==' if totals_match else '!='} scan")
    assert ok


def test_criterion_9_lattice_diagnostics(capsys):
    # calibrate: N * lambda_1(dual)^2 across squarefree ideals, then assert
    # the count vanishes strictly below the calibrated threshold
    ideals = [q for q in enumerate_squarefree_ideals(Qi, 200) if q.factors]
    c_values = []
    shortest = []
    for q in ideals:
        lat = ideal_lattice(q)
        a, b, c, det = lat.a, lat.b, lat.c, lat.det
        best = math.inf
        for z1 in range(-c, c + 1):
            for z2 in range(-a, a + 1):
                if z1 == 0 and z2 == 0:
                    continue
                y1 = z1 / a
                y2 = (-b * z1 + a * z2) / det
                best = min(best, math.hypot(y1, y2))
        shortest.append((q, lat, best))
        c_values.append(q.norm * best * best)
    c_cal = min(c_values)
    zero_bad = 0
    for q, lat, lam in shortest:
        r = 0.98 * math.sqrt(c_cal / q.norm)
        if r > 0 and dual_lattice_count(lat, r) != 0:
            zero_bad += 1
    # smoothed counts: exact w(0) branch, and the main term for small norms
    w = TestFunction(Kind.SQUARE_AUTOCORR)
    inert103 = SquarefreeIdeal.product(split_prime(103, Qi))
    assert inert103.norm == 103 * 103
    w0_exact = ideal_smoothed_count(inert103, w, 2.0) == w.value_at_zero
    H = 50.0
    rel_errs = {}
    for n in (2, 5, 9, 25):
        qs = [p for p in enumerate_prime_ideals(Qi, 25) if p.norm == n]
        if n == 25:
            q = SquarefreeIdeal.product(
                [p for p in enumerate_prime_ideals(Qi, 5) if p.norm == 5])
        else:
            q = SquarefreeIdeal.product(qs[:1])
        assert q.norm == n
        got = ideal_smoothed_count(q, w, H)
        want = H * H * w.fourier_at_zero / n
        rel_errs[n] = abs(got / want - 1.0)
    main_ok = all(e <= 0.05 for e in rel_errs.values())
    ok = zero_bad == 0 and w0_exact and main_ok
    detail = (
        f"calibrated c {c_cal:.3f}, below-threshold nonzeros {zero_bad}; "
        f"w(0) branch {'exact' if w0_exact else 'violated'}; main-term rel err "
        + ", ".join(f"N={n}: {e:.3%}" for n, e in rel_errs.items())
    )
    report(capsys, 9, ok, detail)
    assert ok
