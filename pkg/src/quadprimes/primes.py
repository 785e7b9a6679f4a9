"""Prime elements of O_K and prefix-sum grids for O(1) box queries.

An element is prime exactly when its principal ideal is a prime ideal: the
absolute norm is a rational prime, or the square of an inert prime with the
element an associate of that prime.  Grids tabulate 2D prefix sums of the
prime indicator and of the 1/log|N| weight (over all elements of norm > 1),
so any coordinate box is answered by four corner lookups.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ExtentError
from .fields import BasisKind, FieldSpec, QuadInt, divide_exact
from .ideals import kronecker

GRID_MAGIC = b"SINF"
GRID_VERSION = 1
_GRID_CELL_BUDGET = 60_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def miller_rabin(n: int) -> bool:
    """Deterministic strong-pseudoprime test, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime_element(alpha: QuadInt) -> bool:
    """Whether the principal ideal generated by alpha is prime."""
    m = abs(alpha.norm())
    if m <= 1:
        return False
    if miller_rabin(m):
        return True
    p = math.isqrt(m)
    if p * p != m or not miller_rabin(p):
        return False
    d = alpha.field.discriminant
    if d % p == 0 or kronecker(d, p) != -1:
        return False
    quot = divide_exact(alpha, alpha.field.element(p, 0))
    return quot is not None and quot.is_unit()


def _prime_sieve(limit: int) -> np.ndarray:
    """Boolean array of length limit+1 marking rational primes."""
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return sieve


@dataclass(frozen=True)
class PrefixGrid:
    """Prefix-sum tables over the coordinate box [-R, R]^2.

    Tables have shape (2R+2, 2R+2) with a zero row/column in front, so
    `prime_count[i+1, j+1]` is the count over k1 <= i-R, k2 <= j-R, and a box
    query is plain four-corner inclusion-exclusion.
    """

    field: FieldSpec
    extent: int
    prime_count: np.ndarray
    log_weight: np.ndarray

    def total_primes(self) -> int:
        return int(self.prime_count[-1, -1])

    def total_weight(self) -> float:
        return float(self.log_weight[-1, -1])


def build_grid(field: FieldSpec, extent: int) -> PrefixGrid:
    """Scan the full box once and accumulate both prefix tables.

    The norm surface is evaluated vectorized; prime norms come from a sieve
    up to max|N|, and the inert-square case is resolved through a per-prime
    inertness table (an element of norm p^2 with p inert is automatically an
    associate of p, since no ideal of norm p exists).
    """
    if extent < 0:
        raise ValueError("extent must be nonnegative")
    R = extent
    W = 2 * R + 1
    if W * W > _GRID_CELL_BUDGET:
        raise BudgetError(f"grid with {W * W} cells exceeds the memory budget")
    k = np.arange(-R, R + 1, dtype=np.int64)
    K1, K2 = k[:, None], k[None, :]
    D = field.D
    if field.basis is BasisKind.HALF:
        norms = K1 * K1 + K1 * K2 + K2 * K2 * ((1 - D) // 4)
    else:
        norms = K1 * K1 - D * K2 * K2
    abs_norm = np.abs(norms)
    max_norm = int(abs_norm.max()) if abs_norm.size else 0
    if max_norm > 2_000_000_000:
        raise BudgetError(f"norms up to {max_norm} exceed the sieve budget")
    sieve = _prime_sieve(max(max_norm, 2))
    prime_mask = sieve[abs_norm]
    # inert squares: |N| = p^2 with p inert
    root = np.rint(np.sqrt(abs_norm.astype(np.float64))).astype(np.int64)
    square = (root * root == abs_norm) & (abs_norm > 1)
    limit = math.isqrt(max(max_norm, 1))
    d = field.discriminant
    inert = np.zeros(limit + 1, dtype=bool)
    for p in np.flatnonzero(sieve[: limit + 1]):
        p = int(p)
        inert[p] = d % p != 0 and kronecker(d, p) == -1
    prime_mask |= square & inert[np.minimum(root, limit)]

    counts = np.zeros((W + 1, W + 1), dtype=np.int64)
    counts[1:, 1:] = prime_mask.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    with np.errstate(divide="ignore"):
        wts = np.where(abs_norm > 1, 1.0 / np.log(np.maximum(abs_norm, 2)), 0.0)
    weights = np.zeros((W + 1, W + 1), dtype=np.float64)
    # extended-precision accumulation keeps the 10^7-term prefix sums tight
    weights[1:, 1:] = wts.astype(np.longdouble).cumsum(axis=0).cumsum(axis=1)
    return PrefixGrid(field, R, counts, weights)


def _box_bounds(grid: PrefixGrid, x1: float, x2: float, H: float):
    lo1, hi1 = math.ceil(x1 - H), math.floor(x1 + H)
    lo2, hi2 = math.ceil(x2 - H), math.floor(x2 + H)
    R = grid.extent
    if lo1 < -R or lo2 < -R or hi1 > R or hi2 > R:
        raise ExtentError(
            f"box [{lo1},{hi1}]x[{lo2},{hi2}] exceeds the grid extent {R}"
        )
    return lo1, hi1, lo2, hi2


def _corner_query(table: np.ndarray, R: int, lo1, hi1, lo2, hi2):
    if hi1 < lo1 or hi2 < lo2:
        return table.dtype.type(0)
    a, b = lo1 + R, hi1 + R + 1
    c, d = lo2 + R, hi2 + R + 1
    return table[b, d] - table[a, d] - table[b, c] + table[a, c]


def count_primes_box(grid: PrefixGrid, x1: float, x2: float, H: float) -> int:
    """Number of prime elements with sup-norm distance <= H from (x1, x2)."""
    lo1, hi1, lo2, hi2 = _box_bounds(grid, x1, x2, H)
    return int(_corner_query(grid.prime_count, grid.extent, lo1, hi1, lo2, hi2))


def log_weight_box(grid: PrefixGrid, x1: float, x2: float, H: float) -> float:
    """Sum of 1/log|N| over elements of norm > 1 in the closed box."""
    lo1, hi1, lo2, hi2 = _box_bounds(grid, x1, x2, H)
    return float(_corner_query(grid.log_weight, grid.extent, lo1, hi1, lo2, hi2))


def _batch_bounds(grid: PrefixGrid, centers: np.ndarray, H: float):
    lo = np.ceil(centers - H).astype(np.int64)
    hi = np.floor(centers + H).astype(np.int64)
    R = grid.extent
    if lo.min() < -R or hi.max() > R:
        raise ExtentError("some query box exceeds the grid extent")
    return lo, hi


def _batch_query(table: np.ndarray, R: int, lo: np.ndarray, hi: np.ndarray):
    a, b = lo[:, 0] + R, hi[:, 0] + R + 1
    c, d = lo[:, 1] + R, hi[:, 1] + R + 1
    return table[b, d] - table[a, d] - table[b, c] + table[a, c]


def count_primes_boxes(grid: PrefixGrid, centers: np.ndarray, H: float) -> np.ndarray:
    """Vectorized `count_primes_box` over an (n, 2) array of centers."""
    lo, hi = _batch_bounds(grid, centers, H)
    return _batch_query(grid.prime_count, grid.extent, lo, hi)


def log_weight_boxes(grid: PrefixGrid, centers: np.ndarray, H: float) -> np.ndarray:
    """Vectorized `log_weight_box` over an (n, 2) array of centers."""
    lo, hi = _batch_bounds(grid, centers, H)
    return _batch_query(grid.log_weight, grid.extent, lo, hi)


# ---------------------------------------------------------------------------
# Binary persistence

_BASIS_CODE = {BasisKind.SQRT_D: 0, BasisKind.HALF: 1}
_HEADER = struct.Struct("<4sIqBI")


def save_grid(grid: PrefixGrid, path: str) -> None:
    """Little-endian binary dump: header, u32 count prefixes, f64 weights."""
    if grid.total_primes() >= 2**32:
        raise BudgetError("prime counts do not fit the u32 file format")
    with open(path, "wb") as f:
        f.write(
            _HEADER.pack(
                GRID_MAGIC,
                GRID_VERSION,
                grid.field.D,
                _BASIS_CODE[grid.field.basis],
                grid.extent,
            )
        )
        f.write(grid.prime_count.astype("<u4").tobytes())
        f.write(grid.log_weight.astype("<f8").tobytes())


def load_grid(path: str) -> PrefixGrid:
    with open(path, "rb") as f:
        magic, version, D, basis_code, R = _HEADER.unpack(f.read(_HEADER.size))
        if magic != GRID_MAGIC or version != GRID_VERSION:
            raise ValueError(f"not a grid file (magic {magic!r}, version {version})")
        field = FieldSpec(D, BasisKind.HALF if basis_code else BasisKind.SQRT_D)
        W1 = 2 * R + 2
        counts = np.frombuffer(f.read(4 * W1 * W1), dtype="<u4").astype(np.int64)
        weights = np.frombuffer(f.read(8 * W1 * W1), dtype="<f8").astype(np.float64)
    return PrefixGrid(field, R, counts.reshape(W1, W1), weights.reshape(W1, W1))
