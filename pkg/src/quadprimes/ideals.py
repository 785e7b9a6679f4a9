"""Prime ideals, squarefree ideals, Ramanujan sums, and ideal lattices.

Prime ideals are found by splitting rational primes according to the Kronecker
symbol of the field discriminant.  Squarefree ideals are products of distinct
prime ideals and carry their Moebius value, totient and norm.  Each squarefree
ideal also induces a rank-2 sublattice of the coordinate lattice, kept in
Hermite normal form; the lattice is what the singular-series sieve and the
smoothed-count diagnostics walk.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from sympy import primerange
from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import BudgetError
from .fields import BasisKind, FieldSpec, QuadInt


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n >= 0."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    # strip factors of 2 from n
    while n % 2 == 0:
        n //= 2
        if a % 8 in (3, 5):
            result = -result
    # now n odd >= 1: Jacobi symbol with reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


class SplitType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True, slots=True)
class PrimeIdeal:
    """A prime ideal above the rational prime p.

    For split and ramified primes the ideal is (p, omega - root) and
    membership of k1 + k2*omega is the congruence k1 + root*k2 = 0 (mod p).
    Inert primes have no root and norm p^2.
    """

    field: FieldSpec
    p: int
    split_type: SplitType
    root: Optional[int]

    @property
    def norm(self) -> int:
        return self.p * self.p if self.split_type is SplitType.INERT else self.p

    def contains(self, eta: QuadInt) -> bool:
        if eta.field != self.field:
            raise ValueError("element belongs to a different field")
        if self.split_type is SplitType.INERT:
            return eta.k1 % self.p == 0 and eta.k2 % self.p == 0
        return (eta.k1 + self.root * eta.k2) % self.p == 0

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm, self.p, -1 if self.root is None else self.root)


def split_prime(p: int, field: FieldSpec) -> list[PrimeIdeal]:
    """Prime ideals above the rational prime p, ordered by root."""
    from sympy import isprime

    if not isprime(p):
        raise ValueError(f"{p} is not a rational prime")
    d = field.discriminant
    D = field.D
    if p == 2:
        if d % 2 == 0:
            # always ramified for the sqrt basis
            root = 1 if D % 2 else 0
            return [PrimeIdeal(field, 2, SplitType.RAMIFIED, root)]
        if d % 8 == 1:
            return [PrimeIdeal(field, 2, SplitType.SPLIT, 0),
                    PrimeIdeal(field, 2, SplitType.SPLIT, 1)]
        return [PrimeIdeal(field, 2, SplitType.INERT, None)]
    if d % p == 0:
        if field.basis is BasisKind.HALF:
            root = (1 * pow(2, -1, p)) % p  # (1 + sqrt(D))/2 with sqrt(D) = 0
        else:
            root = 0
        return [PrimeIdeal(field, p, SplitType.RAMIFIED, root)]
    sym = kronecker(d, p)
    if sym == -1:
        return [PrimeIdeal(field, p, SplitType.INERT, None)]
    s = sqrt_mod(D % p, p)
    if field.basis is BasisKind.HALF:
        inv2 = pow(2, -1, p)
        roots = sorted({((1 + s) * inv2) % p, ((1 - s) * inv2) % p})
    else:
        roots = sorted({s % p, (-s) % p})
    return [PrimeIdeal(field, p, SplitType.SPLIT, r) for r in roots]


@lru_cache(maxsize=32)
def enumerate_prime_ideals(field: FieldSpec, max_norm: int) -> tuple[PrimeIdeal, ...]:
    """All prime ideals of norm <= max_norm, sorted by (norm, p, root)."""
    if max_norm < 2:
        return ()
    ideals: list[PrimeIdeal] = []
    for p in primerange(2, max_norm + 1):
        for pi in split_prime(p, field):
            if pi.norm <= max_norm:
                ideals.append(pi)
    ideals.sort(key=PrimeIdeal.sort_key)
    return tuple(ideals)


@dataclass(frozen=True, slots=True)
class SquarefreeIdeal:
    """A product of distinct prime ideals (possibly empty: the unit ideal)."""

    field: FieldSpec
    factors: tuple[PrimeIdeal, ...]

    @staticmethod
    def unit(field: FieldSpec) -> "SquarefreeIdeal":
        return SquarefreeIdeal(field, ())

    @staticmethod
    def product(factors: Iterable[PrimeIdeal]) -> "SquarefreeIdeal":
        fs = sorted(set(factors), key=PrimeIdeal.sort_key)
        if not fs:
            raise ValueError("use SquarefreeIdeal.unit for the empty product")
        return SquarefreeIdeal(fs[0].field, tuple(fs))

    @property
    def norm(self) -> int:
        return math.prod(f.norm for f in self.factors)

    @property
    def mu(self) -> int:
        return -1 if len(self.factors) % 2 else 1

    @property
    def phi(self) -> int:
        return math.prod(f.norm - 1 for f in self.factors)

    def contains(self, eta: QuadInt) -> bool:
        return all(f.contains(eta) for f in self.factors)

    def divisors(self) -> list["SquarefreeIdeal"]:
        out = []
        for k in range(len(self.factors) + 1):
            for combo in itertools.combinations(self.factors, k):
                out.append(SquarefreeIdeal(self.field, combo))
        return out


def enumerate_squarefree_ideals(field: FieldSpec, max_norm: int) -> list[SquarefreeIdeal]:
    """All squarefree ideals of norm <= max_norm, the unit ideal included."""
    primes = enumerate_prime_ideals(field, max_norm)
    out: list[SquarefreeIdeal] = []

    def extend(start: int, chosen: tuple[PrimeIdeal, ...], norm: int):
        out.append(SquarefreeIdeal(field, chosen))
        for i in range(start, len(primes)):
            n2 = norm * primes[i].norm
            if n2 > max_norm:
                break
            extend(i + 1, chosen + (primes[i],), n2)

    extend(0, (), 1)
    out.sort(key=lambda q: (q.norm, tuple(f.sort_key() for f in q.factors)))
    return out


def ramanujan_sum(q: SquarefreeIdeal, eta: QuadInt) -> int:
    """c_q(eta): product over prime factors of (norm - 1) or -1."""
    c = 1
    for f in q.factors:
        c *= (f.norm - 1) if f.contains(eta) else -1
    return c


def condensation_sum(c: SquarefreeIdeal, eta: QuadInt) -> int:
    """Sum of Ramanujan sums over all divisors of a squarefree ideal.

    Collapses to N(c) when eta lies in c and to 0 otherwise; used as an
    exact cross-check of `ramanujan_sum` and membership.
    """
    return sum(ramanujan_sum(d, eta) for d in c.divisors())


# ---------------------------------------------------------------------------
# Ideal lattices


@dataclass(frozen=True, slots=True)
class IdealLattice:
    """HNF basis of the coordinate lattice of an ideal.

    Basis columns are (a, 0) and (b, c) with a, c > 0 and 0 <= b < a, so that
    lattice points are (a*t + b*s, c*s) for integers t, s.  det = a*c equals
    the ideal norm.
    """

    a: int
    b: int
    c: int

    @property
    def det(self) -> int:
        return self.a * self.c

    def basis_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (0, self.c))

    def contains_point(self, k1: int, k2: int) -> bool:
        if k2 % self.c:
            return False
        s = k2 // self.c
        return (k1 - self.b * s) % self.a == 0


def _hnf_from_columns(cols: list[tuple[int, int]]) -> IdealLattice:
    """Column HNF of a rank-2 set of integer generators."""
    # reduce second coordinates to a single generator by gcd
    cols = [c for c in cols if c != (0, 0)]
    while True:
        nz = [c for c in cols if c[1] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda v: abs(v[1]))
        x, y = nz[0], nz[1]
        q = y[1] // x[1]
        y2 = (y[0] - q * x[0], y[1] - q * x[1])
        cols.remove(y)
        if y2 != (0, 0):
            cols.append(y2)
    v2 = next(c for c in cols if c[1] != 0)
    if v2[1] < 0:
        v2 = (-v2[0], -v2[1])
    firsts = [abs(c[0]) for c in cols if c[1] == 0 and c[0] != 0]
    a = math.gcd(*firsts) if firsts else 0
    if a == 0:
        raise ValueError("generators do not span a rank-2 lattice")
    b, c = v2[0] % a, v2[1]
    return IdealLattice(a, b, c)


def ideal_lattice(q: SquarefreeIdeal) -> IdealLattice:
    """HNF basis of {m(alpha) : alpha in q}; det equals the ideal norm."""
    lat = IdealLattice(1, 0, 1)
    for f in sorted(q.factors, key=PrimeIdeal.sort_key):
        p = f.p
        cols = [(lat.a, 0), (lat.b, lat.c)]
        if f.split_type is SplitType.INERT:
            assert lat.det % p != 0, "inert prime repeated in squarefree ideal"
            lat = IdealLattice(lat.a * p, (lat.b * p) % (lat.a * p), lat.c * p)
            continue
        r = f.root
        phi = [(v[0] + r * v[1]) % p for v in cols]
        if phi[0] != 0:
            inv = pow(phi[0], -1, p)
            new_cols = [(cols[0][0] * p, 0),
                        (cols[1][0] - (phi[1] * inv % p) * cols[0][0],
                         cols[1][1] - (phi[1] * inv % p) * cols[0][1])]
        else:
            assert phi[1] != 0, "lattice already inside prime ideal"
            new_cols = [cols[0], (cols[1][0] * p, cols[1][1] * p)]
        lat = _hnf_from_columns(new_cols)
    assert lat.det == q.norm
    return lat


def dual_lattice_count(lat: IdealLattice, r: float, budget: int = 10_000_000) -> int:
    """Nonzero dual-lattice vectors of Euclidean length <= r, by enumeration.

    The dual basis is the inverse transpose of the HNF basis; enumeration runs
    over integer combinations inside an exact bounding box and errors out if
    the box exceeds `budget` candidates.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    a, b, c, det = lat.a, lat.b, lat.c, lat.det
    # dual vectors: y = ((c*z1)/det, (-b*z1 + a*z2)/det) for integer z1, z2
    z1_max = math.floor(r * a)
    count = 0
    seen = 0
    for z1 in range(-z1_max, z1_max + 1):
        y1 = z1 / a
        rem = r * r - y1 * y1
        if rem < 0:
            continue
        half = math.sqrt(rem) * det
        lo = math.ceil((b * z1 - half) / a)
        hi = math.floor((b * z1 + half) / a)
        seen += max(0, hi - lo + 1)
        if seen > budget:
            raise BudgetError("dual lattice enumeration budget exceeded")
        for z2 in range(lo, hi + 1):
            if z1 == 0 and z2 == 0:
                continue
            y2 = (-b * z1 + a * z2) / det
            if y1 * y1 + y2 * y2 <= r * r:
                count += 1
    return count


def lattice_points_in_box(lat: IdealLattice, radius: int):
    """Yield lattice points (k1, k2) with sup-norm at most `radius`."""
    c = lat.c
    s_max = radius // c
    for s in range(-s_max, s_max + 1):
        k2 = c * s
        base = lat.b * s
        t_lo = math.ceil((-radius - base) / lat.a)
        t_hi = math.floor((radius - base) / lat.a)
        for t in range(t_lo, t_hi + 1):
            yield (base + lat.a * t, k2)


def ideal_smoothed_count(q: SquarefreeIdeal, w, H: float) -> float:
    """Exact finite sum of w(m(eta)/H) over eta in the ideal.

    Enumerates the ideal lattice inside the scaled support box; for large
    ideal norms only eta = 0 survives and the sum equals w(0).
    """
    if H <= 0:
        raise ValueError("H must be positive")
    lat = ideal_lattice(q)
    radius = math.floor(H * w.support_radius + 1e-12)
    total = 0.0
    for (k1, k2) in lattice_points_in_box(lat, radius):
        total += w.eval(k1 / H, k2 / H)
    return total


def ideal_smoothed_count_scaled(q: SquarefreeIdeal, H: int) -> int:
    """Integer-exact H^2-scaled smoothed count for the square autocorrelation.

    With w(x) = (2-|x1|)+ (2-|x2|)+ every term w(k/H) * H^2 is the integer
    (2H-|k1|)+ (2H-|k2|)+, so identities involving these sums can be checked
    with zero tolerance.
    """
    lat = ideal_lattice(q)
    radius = 2 * H
    total = 0
    for (k1, k2) in lattice_points_in_box(lat, radius):
        t1 = 2 * H - abs(k1)
        t2 = 2 * H - abs(k2)
        if t1 > 0 and t2 > 0:
            total += t1 * t2
    return total


def ramanujan_smoothed_sum(q: SquarefreeIdeal, w, H: float) -> float:
    """S_q(H): the Ramanujan-sum weighted lattice sum, via Moebius inversion.

    Computed as sum over factorizations a*b = q of mu(a) * N(b) * (smoothed
    count over b), which avoids evaluating c_q pointwise.
    """
    total = 0.0
    all_factors = set(q.factors)
    for b in q.divisors():
        rest = all_factors - set(b.factors)
        mu_a = -1 if len(rest) % 2 else 1
        total += mu_a * b.norm * ideal_smoothed_count(b, w, H)
    return total


def ramanujan_smoothed_sum_scaled(q: SquarefreeIdeal, H: int) -> int:
    """Integer-exact H^2-scaled S_q(H) for the square autocorrelation."""
    total = 0
    all_factors = set(q.factors)
    for b in q.divisors():
        rest = all_factors - set(b.factors)
        mu_a = -1 if len(rest) % 2 else 1
        total += mu_a * b.norm * ideal_smoothed_count_scaled(b, H)
    return total
