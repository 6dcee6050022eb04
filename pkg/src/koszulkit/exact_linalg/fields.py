"""Coefficient fields: GF(p) for a machine-sized prime p, and the rationals.

GF(p) scalars are canonical ints in [0, p); rational scalars are
`fractions.Fraction`.  Everything downstream is exact; floats only ever hold
small integers inside the elimination drivers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import FieldError

# One elimination update is bounded by p^2 plus slack; keeping p below 2^23
# leaves float64 headroom for blocked accumulation.
MAX_PRIME = 1 << 23


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either ``FieldSpec("prime-field", p)`` or ``FieldSpec("rationals")``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime-field":
            if self.p is None or not _is_prime(self.p):
                raise FieldError(f"modulus {self.p!r} is not prime")
            if self.p >= MAX_PRIME:
                raise FieldError(f"modulus {self.p} too large (need p < 2^23)")
        elif self.kind == "rationals":
            if self.p is not None:
                raise FieldError("rationals take no modulus")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    # -- construction -----------------------------------------------------

    @staticmethod
    def gf(p: int) -> "FieldSpec":
        return FieldSpec("prime-field", p)

    @staticmethod
    def qq() -> "FieldSpec":
        return FieldSpec("rationals")

    @staticmethod
    def parse(text: str) -> "FieldSpec":
        """Parse ``"gf:101"`` or ``"qq"``."""
        if text == "qq":
            return FieldSpec.qq()
        if text.startswith("gf:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise FieldError(f"bad field spec {text!r}") from None
            return FieldSpec.gf(p)
        raise FieldError(f"bad field spec {text!r}")

    # -- scalar helpers ----------------------------------------------------

    @property
    def is_modular(self) -> bool:
        return self.kind == "prime-field"

    def describe(self) -> str:
        return f"gf:{self.p}" if self.is_modular else "qq"

    def zero(self):
        return 0 if self.is_modular else Fraction(0)

    def one(self):
        return 1 if self.is_modular else Fraction(1)

    def normalize(self, value):
        """Coerce an int/Fraction/string into a canonical scalar."""
        if self.is_modular:
            if isinstance(value, str):
                value = Fraction(value)
            if isinstance(value, Fraction):
                den = value.denominator % self.p
                if den == 0:
                    raise FieldError(f"denominator of {value} vanishes mod {self.p}")
                return value.numerator * pow(den, -1, self.p) % self.p
            return int(value) % self.p
        if isinstance(value, float):
            raise FieldError("refusing float input for exact rational scalar")
        return Fraction(value)

    def add(self, a, b):
        return (a + b) % self.p if self.is_modular else a + b

    def mul(self, a, b):
        return (a * b) % self.p if self.is_modular else a * b

    def neg(self, a):
        return (-a) % self.p if self.is_modular else -a

    def inv(self, a):
        if self.is_modular:
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a
