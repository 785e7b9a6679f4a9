"""Exact arithmetic in real and imaginary quadratic fields Q(sqrt(D)).

Elements are stored in integral-basis coordinates (k1, k2), either over the
basis {1, sqrt(D)} or, when D = 1 (mod 4), over {1, (1+sqrt(D))/2} so that the
coordinates always span the full ring of integers.  All arithmetic is exact
(Python integers), so products, norms and exact divisions never overflow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import FieldSpecError


class BasisKind(enum.Enum):
    SQRT_D = "sqrt"       # basis {1, sqrt(D)}
    HALF = "half"         # basis {1, (1+sqrt(D))/2}, requires D = 1 (mod 4)


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return True


@dataclass(frozen=True, slots=True)
class FieldSpec:
    """A quadratic field Q(sqrt(D)) with a fixed integral basis.

    D must be squarefree and different from 0 and 1.  The basis is HALF
    exactly when D = 1 (mod 4), so the coordinate lattice is always the full
    ring of integers and the discriminant is the field discriminant
    (D when D = 1 mod 4, else 4D).
    """

    D: int
    basis: BasisKind

    def __post_init__(self):
        if self.D in (0, 1) or not _is_squarefree(self.D):
            raise FieldSpecError(f"D={self.D} must be squarefree and not 0 or 1")
        if self.basis is BasisKind.HALF and self.D % 4 != 1:
            raise FieldSpecError(
                f"half-integer basis requires D = 1 (mod 4), got D={self.D}"
            )
        if self.basis is BasisKind.SQRT_D and self.D % 4 == 1:
            raise FieldSpecError(
                f"D={self.D} = 1 (mod 4): use the half-integer basis so that "
                "coordinates span the full ring of integers"
            )

    @property
    def discriminant(self) -> int:
        return self.D if self.basis is BasisKind.HALF else 4 * self.D

    @property
    def degree(self) -> int:
        return 2

    def minpoly_omega(self) -> tuple[int, int]:
        """(b, c) with the non-trivial basis element a root of x^2 + b x + c."""
        if self.basis is BasisKind.HALF:
            return (-1, (1 - self.D) // 4)
        return (0, -self.D)

    def element(self, k1: int, k2: int) -> "QuadInt":
        return QuadInt(self, k1, k2)

    def one(self) -> "QuadInt":
        return QuadInt(self, 1, 0)

    def zero(self) -> "QuadInt":
        return QuadInt(self, 0, 0)

    def spec_string(self) -> str:
        # canonical, comma-free (the half basis is implied by D = 1 mod 4)
        return f"D={self.D}"

    def __str__(self):
        return self.spec_string()


def make_field(D: int) -> FieldSpec:
    """Field for a squarefree D, choosing the maximal-order basis."""
    if D % 4 == 1:
        return FieldSpec(D, BasisKind.HALF)
    return FieldSpec(D, BasisKind.SQRT_D)


def parse_field_spec(text: str) -> FieldSpec:
    """Parse a CLI field string like ``D=-1`` or ``D=5,half``."""
    parts = [p.strip() for p in text.split(",")]
    if not parts or not parts[0].startswith("D="):
        raise FieldSpecError(f"field spec must look like 'D=<int>[,half]': {text!r}")
    try:
        D = int(parts[0][2:])
    except ValueError:
        raise FieldSpecError(f"bad integer in field spec: {text!r}") from None
    if len(parts) == 1:
        return make_field(D)
    if len(parts) == 2 and parts[1] == "half":
        if D % 4 != 1:
            raise FieldSpecError(f"'half' requires D = 1 (mod 4), got D={D}")
        return FieldSpec(D, BasisKind.HALF)
    raise FieldSpecError(f"unrecognized field spec: {text!r}")


@dataclass(frozen=True, slots=True)
class QuadInt:
    """An algebraic integer k1 + k2*omega in integral-basis coordinates."""

    field: FieldSpec
    k1: int
    k2: int

    def coords(self) -> tuple[int, int]:
        return (self.k1, self.k2)

    def norm(self) -> int:
        D = self.field.D
        if self.field.basis is BasisKind.HALF:
            return self.k1 * self.k1 + self.k1 * self.k2 + self.k2 * self.k2 * (1 - D) // 4
        return self.k1 * self.k1 - D * self.k2 * self.k2

    def sup_norm(self) -> int:
        return max(abs(self.k1), abs(self.k2))

    def conjugate(self) -> "QuadInt":
        if self.field.basis is BasisKind.HALF:
            return QuadInt(self.field, self.k1 + self.k2, -self.k2)
        return QuadInt(self.field, self.k1, -self.k2)

    def is_unit(self) -> bool:
        return self.norm() in (1, -1)

    def is_zero(self) -> bool:
        return self.k1 == 0 and self.k2 == 0

    def _check_same_field(self, other: "QuadInt"):
        if self.field != other.field:
            raise ValueError("operands belong to different fields")

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._check_same_field(other)
        return QuadInt(self.field, self.k1 + other.k1, self.k2 + other.k2)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._check_same_field(other)
        return QuadInt(self.field, self.k1 - other.k1, self.k2 - other.k2)

    def __neg__(self) -> "QuadInt":
        return QuadInt(self.field, -self.k1, -self.k2)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        self._check_same_field(other)
        a1, a2, b1, b2 = self.k1, self.k2, other.k1, other.k2
        D = self.field.D
        if self.field.basis is BasisKind.HALF:
            # omega^2 = omega + (D-1)/4
            c = (D - 1) // 4
            return QuadInt(self.field, a1 * b1 + a2 * b2 * c, a1 * b2 + a2 * b1 + a2 * b2)
        return QuadInt(self.field, a1 * b1 + D * a2 * b2, a1 * b2 + a2 * b1)


def divide_exact(beta: QuadInt, alpha: QuadInt) -> Optional[QuadInt]:
    """beta/alpha when it is an algebraic integer, else None.

    Uses beta * conj(alpha) / N(alpha); both coordinates must divide evenly.
    """
    if alpha.is_zero():
        raise ZeroDivisionError("division by the zero element")
    beta._check_same_field(alpha)
    n = alpha.norm()
    gamma = beta * alpha.conjugate()
    if gamma.k1 % n or gamma.k2 % n:
        return None
    return QuadInt(beta.field, gamma.k1 // n, gamma.k2 // n)
