"""Short-interval expectation/variance statistics and rational baselines.

The field statistics average box counts of prime elements over centers in the
sup-norm ball of radius X, with the density-weighted correction subtracted
per center.  The rational baselines are exact: for integer interval length the
window counts are piecewise constant in the left endpoint, so the averages
are finite sums over integer shifts computed from prefix arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetError
from .fields import FieldSpec
from .primes import (
    PrefixGrid,
    _prime_sieve,
    build_grid,
    count_primes_boxes,
    log_weight_boxes,
    miller_rabin,
)
from .singular_series import residue_rk

_SAMPLE_BUDGET = 30_000_000


@dataclass(frozen=True)
class Sampler:
    """Center sampler for the x-average.

    kind "grid": every integer point of the sup-norm ball (exact for the
    piecewise-constant integrand on the integer-offset granularity).
    kind "jitter": stratified q x q sub-offsets per integer cell with one
    uniform jitter per stratum, seeded; estimates the continuous integral.
    """

    kind: str = "grid"
    q: int = 2
    seed: int = 0

    def centers(self, X: float) -> np.ndarray:
        M = math.floor(X)
        k = np.arange(-M, M + 1, dtype=np.float64)
        n_cells = (2 * M + 1) ** 2
        if self.kind == "grid":
            if n_cells > _SAMPLE_BUDGET:
                raise BudgetError(f"{n_cells} sample centers exceed the budget")
            g1, g2 = np.meshgrid(k, k, indexing="ij")
            return np.column_stack([g1.ravel(), g2.ravel()])
        if self.kind != "jitter":
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        q = self.q
        if n_cells * q * q > _SAMPLE_BUDGET:
            raise BudgetError("stratified sample count exceeds the budget")
        rng = np.random.default_rng(self.seed)
        g1, g2 = np.meshgrid(k, k, indexing="ij")
        cells = np.column_stack([g1.ravel(), g2.ravel()])
        strata = np.stack(
            np.meshgrid(np.arange(q), np.arange(q), indexing="ij"), axis=-1
        ).reshape(-1, 2)
        pts = []
        for s in strata:
            u = rng.random((len(cells), 2))
            pts.append(cells + (s + u) / q - 0.5)
        return np.concatenate(pts, axis=0)


@lru_cache(maxsize=32)
def _residue(field: FieldSpec) -> float:
    return residue_rk(field, 1e-8).value


@dataclass(frozen=True, slots=True)
class ExpectationResult:
    value: float
    reference: float  # vol(B_H) / (r_K log vol(B_X))
    n_samples: int


def expectation_E(
    field: FieldSpec, grid: PrefixGrid, X: float, H: float, sampler: Sampler = Sampler()
) -> ExpectationResult:
    """Average prime count over sampled centers, with the density reference."""
    centers = sampler.centers(X)
    counts = count_primes_boxes(grid, centers, H)
    rk = _residue(field)
    log_vol = math.log((2.0 * X) ** 2) if X > 0.5 else math.nan
    reference = (2.0 * H) ** 2 / (rk * log_vol)
    return ExpectationResult(float(counts.mean()), reference, len(centers))


def variance_V(
    field: FieldSpec, grid: PrefixGrid, X: float, H: float, sampler: Sampler = Sampler()
) -> float:
    """Average of the squared density-corrected count over sampled centers."""
    centers = sampler.centers(X)
    counts = count_primes_boxes(grid, centers, H).astype(np.float64)
    weights = log_weight_boxes(grid, centers, H)
    tilde = counts - weights / _residue(field)
    return float(np.mean(tilde * tilde))


@dataclass(frozen=True, slots=True)
class VarianceRow:
    field: str
    X: float
    delta: float
    H: float
    n_samples: int
    E: float
    V: float
    ratio: float
    target: float  # 1 - delta


def variance_profile(
    field: FieldSpec,
    X: float,
    deltas: list[float],
    sampler: Sampler = Sampler(),
    grid: PrefixGrid | None = None,
) -> list[VarianceRow]:
    """One grid build, one row per interval exponent delta."""
    if not deltas or not all(0.0 < d < 1.0 for d in deltas):
        raise ValueError("deltas must lie strictly between 0 and 1")
    if grid is None:
        extent = math.ceil(X + X ** max(deltas)) + 2
        grid = build_grid(field, extent)
    centers = sampler.centers(X)
    rk = _residue(field)
    rows = []
    for delta in deltas:
        H = X**delta
        counts = count_primes_boxes(grid, centers, H).astype(np.float64)
        weights = log_weight_boxes(grid, centers, H)
        tilde = counts - weights / rk
        E = float(counts.mean())
        V = float(np.mean(tilde * tilde))
        rows.append(
            VarianceRow(
                field.spec_string(), X, delta, H, len(centers), E, V, V / E, 1.0 - delta
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Rational baselines (exact, prefix-sum evaluation)


@lru_cache(maxsize=8)
def _rational_prefixes(limit: int):
    """Prefix sums of the prime indicator, 1/log n, and the von Mangoldt fn."""
    sieve = _prime_sieve(limit)
    pi = np.zeros(limit + 1, dtype=np.int64)
    np.cumsum(sieve, out=pi)
    inv_log = np.zeros(limit + 1, dtype=np.float64)
    n = np.arange(2, limit + 1, dtype=np.float64)
    inv_log[2:] = 1.0 / np.log(n)
    L = np.cumsum(inv_log.astype(np.longdouble)).astype(np.float64)
    lam = np.zeros(limit + 1, dtype=np.float64)
    for p in np.flatnonzero(sieve):
        p = int(p)
        logp = math.log(p)
        pk = p
        while pk <= limit:
            lam[pk] = logp
            pk *= p
    psi = np.cumsum(lam.astype(np.longdouble)).astype(np.float64)
    return pi, L, psi


def expectation_rational(X: int, H: int) -> float:
    """E_N: average of #{p : k < p <= k+H} over k = 0..X-1."""
    pi, _, _ = _rational_prefixes(X + H)
    k = np.arange(X)
    return float(np.mean(pi[k + H] - pi[k]))


def variance_rational_prime(X: int, H: int) -> float:
    """V_N: mean square of the 1/log-corrected prime count in (k, k+H]."""
    if H < 0 or X < 2:
        raise ValueError("need H >= 0 and X >= 2")
    if H == 0:
        return 0.0
    pi, L, _ = _rational_prefixes(X + H)
    k = np.arange(X)
    tilde = (pi[k + H] - pi[k]).astype(np.float64) - (L[k + H] - L[k])
    return float(np.mean(tilde * tilde))


def variance_rational_lambda(X: int, H: int) -> float:
    """Mean square of psi(k+H) - psi(k) - H over k = 0..X-1."""
    if H < 0 or X < 2:
        raise ValueError("need H >= 0 and X >= 2")
    if H == 0:
        return 0.0
    _, _, psi = _rational_prefixes(X + H)
    k = np.arange(X)
    dev = psi[k + H] - psi[k] - float(H)
    return float(np.mean(dev * dev))


def prime_power_correction(x: float, H: float) -> float:
    """Sum of 1/k over proper prime powers p^k in the window (x, x+H]."""
    hi = math.floor(x + H)
    if hi < 4:
        return 0.0
    total = 0.0
    p = 2
    while p * p <= hi:
        if miller_rabin(p):
            pk, k = p * p, 2
            while pk <= hi:
                if pk > x:
                    total += 1.0 / k
                pk *= p
                k += 1
        p += 1
    return total


@dataclass(frozen=True, slots=True)
class ZBaselineRow:
    X: int
    delta: float
    H: int
    E: float
    V_prime: float
    V_lambda: float
    ratio_prime: float   # V_N / ((1-delta) E_N)
    ratio_lambda: float  # V_Lambda / (H (log X - log H))


def zbaseline_row(X: int, delta: float) -> ZBaselineRow:
    """The Conjecture-style rational-integer statistics at H = floor(X^delta)."""
    H = math.floor(X**delta)
    E = expectation_rational(X, H)
    Vp = variance_rational_prime(X, H)
    Vl = variance_rational_lambda(X, H)
    return ZBaselineRow(
        X,
        delta,
        H,
        E,
        Vp,
        Vl,
        Vp / ((1.0 - delta) * E),
        Vl / (H * (math.log(X) - math.log(H))),
    )
