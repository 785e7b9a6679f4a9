"""Singular series over prime ideals, their rational counterpart, and the
smoothed sums they control.

Truncated Euler products are evaluated with one fixed floating-point recipe:
a cached base product over all prime ideals of norm >= 3 (taken in ascending
norm order), then the norm-2 factors (0 or 2 exactly), then one correction
ratio per prime ideal containing the shift.  The box sieve replays exactly the
same multiplication sequence per lattice point, so sieved values are
bit-identical to pointwise evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import zeta as hurwitz_zeta
from sympy import factorint, primerange

from .errors import BudgetError
from .fields import FieldSpec, QuadInt
from .ideals import PrimeIdeal, SplitType, enumerate_prime_ideals, kronecker

DEFAULT_CUTOFF = 100_000


# ---------------------------------------------------------------------------
# Residue of the Dedekind zeta function


@dataclass(frozen=True, slots=True)
class ResidueValue:
    value: float
    error_bound: float
    method: str


def _character_table(d: int) -> list[int]:
    q = abs(d)
    return [kronecker(d, r) for r in range(q)]


def residue_rk(field: FieldSpec, tol: float, blocks: int = 128) -> ResidueValue:
    """L(1, chi_d) for the field discriminant d, i.e. Res_{s=1} zeta_K.

    The series is summed over `blocks` full periods of the character exactly
    (fsum), and the remainder is evaluated analytically from the character
    moments and Hurwitz zeta values; the reported error bound is dominated by
    float rounding of the direct part.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = field.discriminant
    q = abs(d)
    chi = _character_table(d)
    direct = math.fsum(
        chi[n % q] / n for n in range(1, blocks * q) if chi[n % q]
    )
    # tail: sum over j >= blocks, r in 1..q of chi(r)/(j q + r), expanded in
    # powers of r/(j q); the k = 0 moment vanishes for a nonprincipal character
    kmax = 18
    tail = 0.0
    for k in range(1, kmax + 1):
        m_k = sum(chi[r % q] * r**k for r in range(1, q))
        tail += (-1) ** k * (m_k / q ** (k + 1)) * float(hurwitz_zeta(k + 1, blocks))
    remainder = 2.0 * blocks ** (-(kmax + 1)) * (1.0 + blocks / kmax)
    rounding = 4.0e-16 * (1.0 + math.log(max(blocks * q, 2)))
    bound = remainder + rounding
    if bound > tol:
        raise BudgetError(
            f"cannot certify tolerance {tol:g}; reachable bound is {bound:g}"
        )
    return ResidueValue(direct + tail, bound, "character-series+moment-tail")


# ---------------------------------------------------------------------------
# Euler product plumbing (shared by pointwise values and sieves)


def _base_factor(n: int) -> float:
    """Euler factor when the shift avoids the ideal: (1-2/N)/(1-1/N)^2."""
    return (1.0 - 2.0 / n) / (1.0 - 1.0 / n) ** 2


def _member_ratio(n: int) -> float:
    """Ratio of the member factor to the base factor: (N-1)/(N-2)."""
    return (n - 1.0) / (n - 2.0)


@dataclass(frozen=True)
class _EulerData:
    ideals: tuple[PrimeIdeal, ...]       # norm >= 3, ascending
    ratios: tuple[float, ...]            # member/base ratio per ideal
    norm2: tuple[PrimeIdeal, ...]        # the (at most two) norm-2 ideals
    base: float                          # product of base factors, norm >= 3


@lru_cache(maxsize=16)
def _euler_data(field: FieldSpec, cutoff: int) -> _EulerData:
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    if cutoff > 2_000_000:
        raise BudgetError(f"cutoff {cutoff} exceeds the prime-ideal budget")
    all_ideals = enumerate_prime_ideals(field, cutoff)
    norm2 = tuple(pi for pi in all_ideals if pi.norm == 2)
    rest = tuple(pi for pi in all_ideals if pi.norm >= 3)
    base = 1.0
    for pi in rest:
        base *= _base_factor(pi.norm)
    ratios = tuple(_member_ratio(pi.norm) for pi in rest)
    return _EulerData(rest, ratios, norm2, base)


@dataclass(frozen=True, slots=True)
class SingularValue:
    value: float
    cutoff: int
    tail_bound: float  # relative bound on the omitted factors


def _tail_bound(cutoff: int) -> float:
    # prod over N > P of (1 +- 1/(N-1)^2) bounded by sum 2/(m-1)^2 <= 4/P
    return 4.0 / cutoff


def singular_series(eta: QuadInt, cutoff: int = DEFAULT_CUTOFF) -> SingularValue:
    """Truncated singular series for a nonzero shift eta.

    Product over prime ideals of norm <= cutoff of
    (1 - nu/N) / (1 - 1/N)^2 with nu = 1 if eta lies in the ideal, else 2.
    """
    if eta.is_zero():
        raise ValueError("the singular series is undefined at eta = 0")
    data = _euler_data(eta.field, cutoff)
    value = data.base
    for pi in data.norm2:
        value *= 2.0 if pi.contains(eta) else 0.0
    if value != 0.0:
        for pi, ratio in zip(data.ideals, data.ratios):
            if pi.contains(eta):
                value *= ratio
    return SingularValue(value, cutoff, _tail_bound(cutoff))


@lru_cache(maxsize=8)
def _rational_euler_data(cutoff: int) -> tuple[tuple[int, ...], float]:
    primes = tuple(primerange(3, cutoff + 1))
    base = 1.0
    for p in primes:
        base *= _base_factor(p)
    return primes, base


def singular_series_rational(h: int, cutoff: int = DEFAULT_CUTOFF) -> SingularValue:
    """Truncated Hardy-Littlewood singular series for a nonzero integer shift."""
    if h == 0:
        raise ValueError("the singular series is undefined at h = 0")
    _, base = _rational_euler_data(cutoff)
    value = base
    value *= 2.0 if h % 2 == 0 else 0.0
    if value != 0.0:
        for p in sorted(factorint(abs(h))):
            if p != 2 and p <= cutoff:
                value *= _member_ratio(p)
    return SingularValue(value, cutoff, _tail_bound(cutoff))


# ---------------------------------------------------------------------------
# Sieved evaluation over boxes


@dataclass(frozen=True)
class SingularBox:
    """Singular-series values on the coordinate box sup|m(eta)| <= radius.

    `values[i, j]` holds the value at (k1, k2) = (i - radius, j - radius);
    the origin entry is NaN.
    """

    field: FieldSpec
    radius: int
    cutoff: int
    tail_bound: float
    values: np.ndarray

    def value_at(self, k1: int, k2: int) -> SingularValue:
        if k1 == 0 and k2 == 0:
            raise ValueError("the singular series is undefined at eta = 0")
        M = self.radius
        if abs(k1) > M or abs(k2) > M:
            raise ValueError("point outside the sieved box")
        return SingularValue(float(self.values[k1 + M, k2 + M]), self.cutoff, self.tail_bound)


def sieved_singular_box(
    field: FieldSpec, radius: int, cutoff: int = DEFAULT_CUTOFF
) -> SingularBox:
    """Sieve the singular series over a full coordinate box.

    Per entry, the multiplication sequence is identical to `singular_series`:
    base product, norm-2 factors, then member ratios in ascending norm order,
    so entries agree bit-for-bit with pointwise evaluation.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    W = 2 * radius + 1
    if W * W > 40_000_000:
        raise BudgetError(f"box with {W * W} entries exceeds the memory budget")
    data = _euler_data(field, cutoff)
    M = radius
    vals = np.full((W, W), data.base, dtype=np.float64)
    k = np.arange(-M, M + 1)
    for pi in data.norm2:
        member = ((k[:, None] + pi.root * k[None, :]) % 2) == 0
        vals *= np.where(member, 2.0, 0.0)
    for pi, ratio in zip(data.ideals, data.ratios):
        if pi.split_type is SplitType.INERT:
            start = M % pi.p
            vals[start :: pi.p, start :: pi.p] *= ratio
        else:
            p, r = pi.p, pi.root
            c_start = (M - r * k) % p  # first k1-index in each k2-column
            maxn = (W - 1) // p + 1
            rows = c_start[None, :] + p * np.arange(maxn)[:, None]
            valid = rows < W
            cols = np.broadcast_to(np.arange(W)[None, :], rows.shape)
            flat = rows[valid] * W + cols[valid]
            vals.flat[flat] *= ratio
    vals[M, M] = np.nan
    return SingularBox(field, radius, cutoff, _tail_bound(cutoff), vals)


@dataclass(frozen=True, slots=True)
class SmoothedSumResult:
    value: float
    uncertainty: float  # worst-case effect of the Euler-product truncation
    H: float
    cutoff: int


def singular_sum_smoothed(
    field: FieldSpec, w, H: float, cutoff: int = DEFAULT_CUTOFF
) -> SmoothedSumResult:
    """Smoothed sum of (singular series - 1) over nonzero shifts.

    Sums (S(eta) - 1) * w(m(eta)/H) over the scaled support box using the
    sieve.  The reported uncertainty is the conservative per-term tail bound;
    membership and avoidance corrections beyond the cutoff cancel on average,
    so the realized truncation error is far smaller.
    """
    if H < 2:
        raise ValueError("H must be at least 2")
    M = math.floor(H * w.support_radius)
    box = sieved_singular_box(field, M, cutoff)
    vals = box.values.copy()
    vals[M, M] = 1.0  # origin excluded: contributes (1 - 1) * w = 0
    k = np.arange(-M, M + 1)
    wgrid = np.asarray(w.eval(k[:, None] / H, k[None, :] / H), dtype=np.float64)
    wgrid[M, M] = 0.0
    total = float(np.sum((vals - 1.0) * wgrid))
    uncertainty = box.tail_bound * float(np.sum(np.abs(vals) * wgrid))
    return SmoothedSumResult(total, uncertainty, H, cutoff)


# ---------------------------------------------------------------------------
# Rational-integer sieve and Montgomery's weighted sum


@lru_cache(maxsize=16)
def sieved_singular_rational(hmax: int, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Singular-series values for shifts 1..hmax (index 0 is NaN).

    Same fixed multiplication order as `singular_series_rational`, so entries
    match pointwise evaluation exactly.
    """
    if hmax < 1:
        raise ValueError("hmax must be at least 1")
    primes, base = _rational_euler_data(cutoff)
    vals = np.full(hmax + 1, base, dtype=np.float64)
    vals[2::2] *= 2.0
    vals[1::2] *= 0.0
    for p in primes:
        if p > hmax:
            break
        vals[p::p] *= _member_ratio(p)
    vals[0] = np.nan
    return vals


def montgomery_sum(H: int, cutoff: int = DEFAULT_CUTOFF) -> float:
    """Sum over h <= H of (singular series - 1) weighted by (1 - h/H)."""
    if H < 2:
        raise ValueError("H must be at least 2")
    vals = sieved_singular_rational(H, cutoff)
    h = np.arange(1, H + 1, dtype=np.float64)
    return float(np.dot(vals[1:] - 1.0, 1.0 - h / H))


# ---------------------------------------------------------------------------
# Partial sums of mu^2/phi over ideals (log-growth diagnostic)


def _phi_inverse_dfs(norms: list[int], max_norm: int) -> float:
    """Sum of 1/phi over squarefree products of the given prime-ideal norms."""
    total = [0.0]

    def extend(start: int, inv_phi: float, norm: int):
        total[0] += inv_phi
        for i in range(start, len(norms)):
            n2 = norm * norms[i]
            if n2 > max_norm:
                break
            extend(i + 1, inv_phi / (norms[i] - 1), n2)

    extend(0, 1.0, 1)
    return total[0]


def mobius_phi_partial_sum(field: FieldSpec, Y: int) -> float:
    """Sum of mu^2(q)/phi(q) over squarefree ideals of norm <= Y."""
    if Y < 1:
        raise ValueError("Y must be at least 1")
    norms = [pi.norm for pi in enumerate_prime_ideals(field, Y)]
    return _phi_inverse_dfs(norms, Y)


def mobius_phi_profile(field: FieldSpec, cutoffs: list[int]) -> list[float]:
    """Partial sums at several cutoffs, enumerating prime ideals only once."""
    ymax = max(cutoffs)
    norms = [pi.norm for pi in enumerate_prime_ideals(field, ymax)]
    return [_phi_inverse_dfs([n for n in norms if n <= y], y) for y in cutoffs]
