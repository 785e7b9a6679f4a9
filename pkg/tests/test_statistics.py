import math

import numpy as np
import pytest

from quadprimes.errors import BudgetError
from quadprimes.fields import make_field
from quadprimes.primes import build_grid
from quadprimes.statistics import (
    Sampler,
    expectation_E,
    expectation_rational,
    prime_power_correction,
    variance_profile,
    variance_rational_lambda,
    variance_rational_prime,
    variance_V,
    zbaseline_row,
)

Qi = make_field(-1)


class TestSampler:
    def test_grid_centers(self):
        pts = Sampler().centers(3.0)
        assert pts.shape == (49, 2)
        assert pts.min() == -3 and pts.max() == 3

    def test_jitter_deterministic_and_in_range(self):
        s = Sampler(kind="jitter", q=2, seed=5)
        a = s.centers(4.0)
        b = s.centers(4.0)
        assert np.array_equal(a, b)
        assert a.shape == (4 * 81, 2)
        assert a.min() >= -4.5 and a.max() <= 4.5

    def test_seed_changes_jitter(self):
        a = Sampler(kind="jitter", seed=1).centers(3.0)
        b = Sampler(kind="jitter", seed=2).centers(3.0)
        assert not np.array_equal(a, b)

    def test_budget(self):
        with pytest.raises(BudgetError):
            Sampler().centers(10**5)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Sampler(kind="sobol").centers(2.0)


class TestFieldStatistics:
    def test_expectation_whole_grid_single_center(self):
        g = build_grid(Qi, 30)
        res = expectation_E(Qi, g, 0.0, 30.0)
        assert res.value == g.total_primes()
        assert res.n_samples == 1

    def test_expectation_near_reference(self):
        # convergence to the density reference is slow; ~16% off at X = 1000
        X, H = 1000.0, 1000.0**0.5
        g = build_grid(Qi, 1035)
        res = expectation_E(Qi, g, X, H)
        assert res.value == pytest.approx(res.reference, rel=0.25)

    def test_variance_identity_expansion(self):
        # mean(t^2) = mean(c^2) - 2 mean(c w)/r + mean(w^2)/r^2
        from quadprimes.primes import count_primes_boxes, log_weight_boxes
        from quadprimes.statistics import _residue

        X, H = 60.0, 6.0
        g = build_grid(Qi, 70)
        centers = Sampler().centers(X)
        c = count_primes_boxes(g, centers, H).astype(float)
        w = log_weight_boxes(g, centers, H)
        rk = _residue(Qi)
        expanded = (
            np.mean(c * c) - 2 * np.mean(c * w) / rk + np.mean(w * w) / rk**2
        )
        assert variance_V(Qi, g, X, H) == pytest.approx(expanded, rel=1e-9)

    def test_full_lattice_indicator_near_deterministic(self):
        # replace primes by the full lattice: integer H boxes have constant counts
        g = build_grid(Qi, 40)
        centers = Sampler().centers(20.0)
        H = 5.0
        counts = np.full(len(centers), (2 * int(H) + 1) ** 2, dtype=float)
        assert counts.var() == 0.0

    def test_profile_rows(self):
        rows = variance_profile(Qi, 50.0, [0.3, 0.5, 0.7])
        assert [r.delta for r in rows] == [0.3, 0.5, 0.7]
        for r in rows:
            assert r.H == pytest.approx(50.0**r.delta, rel=1e-12)
            assert r.target == pytest.approx(1.0 - r.delta)
            assert r.V >= 0.0 and r.E > 0.0
            assert r.ratio == pytest.approx(r.V / r.E, rel=1e-12)

    def test_profile_deterministic(self):
        a = variance_profile(Qi, 40.0, [0.5])
        b = variance_profile(Qi, 40.0, [0.5])
        assert a == b

    def test_bad_deltas(self):
        with pytest.raises(ValueError):
            variance_profile(Qi, 40.0, [0.0, 0.5])


class TestRationalBaselines:
    def test_hand_window_counts(self):
        # windows (k, k+2] for k = 0..9: primes 2,3,5,7,11
        want = [1, 2, 1, 1, 1, 1, 1, 0, 0, 1]
        from quadprimes.statistics import _rational_prefixes

        pi, _, _ = _rational_prefixes(12)
        got = [int(pi[k + 2] - pi[k]) for k in range(10)]
        assert got == want
        assert expectation_rational(10, 2) == pytest.approx(np.mean(want))

    def test_hand_lambda(self):
        _, _, psi = __import__(
            "quadprimes.statistics", fromlist=["_rational_prefixes"]
        )._rational_prefixes(12)
        want = (
            math.log(2) * 3  # 2, 4, 8
            + math.log(3) * 2  # 3, 9
            + math.log(5)
            + math.log(7)
            + math.log(11)
        )
        assert psi[11] == pytest.approx(want, rel=1e-12)

    def test_h0_zero(self):
        assert variance_rational_prime(10, 0) == 0.0
        assert variance_rational_lambda(10, 0) == 0.0

    def test_direct_small_case(self):
        X, H = 30, 3
        from quadprimes.statistics import _rational_prefixes

        pi, L, psi = _rational_prefixes(X + H)
        vp = np.mean(
            [((pi[k + H] - pi[k]) - (L[k + H] - L[k])) ** 2 for k in range(X)]
        )
        assert variance_rational_prime(X, H) == pytest.approx(float(vp), rel=1e-12)

    def test_desk_scale_bands(self):
        row = zbaseline_row(10**4, 0.5)
        assert 0.3 < row.ratio_prime < 2.0
        assert 0.3 < row.ratio_lambda < 2.0

    def test_prime_power_window(self):
        assert prime_power_correction(7, 2) == pytest.approx(1 / 3 + 1 / 2)
        assert prime_power_correction(50, 10) == pytest.approx(0.0)  # (50,60]: none
        assert prime_power_correction(120, 10) == pytest.approx(1 / 2 + 1 / 3 + 1 / 7)
        # (120,130]: 121 = 11^2, 125 = 5^3, 128 = 2^7

    def test_appendix_consistency_desk_scale(self):
        X = 10**4
        row = zbaseline_row(X, 0.5)
        lhs = abs(math.sqrt(row.V_lambda) / math.log(X) - math.sqrt(row.V_prime))
        assert lhs <= 0.35 * math.sqrt(row.V_prime)
