"""Coefficient rings: Z, Q, Z/m and the p-local integers Z_(p).

A ``CoeffRing`` is a small value object that knows how to normalize,
combine and serialize coefficients.  Integer-like rings use Python ints,
rational-like rings use ``fractions.Fraction``; Z_(p) is represented as
rationals together with a p-integrality predicate rather than a distinct
numeric type, which keeps a single rational kernel.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import MixedCoefficientRings, NotDivisible, UsageError

INTEGER = "Z"
RATIONAL = "Q"
MODULAR = "Z/"
LOCALIZED = "Z_("


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class CoeffRing:
    """One of Z, Q, Z/m (m >= 2) or Z_(p) (p prime)."""

    __slots__ = ("kind", "modulus", "prime")

    def __init__(self, kind: str, modulus: int | None = None, prime: int | None = None):
        self.kind = kind
        self.modulus = modulus
        self.prime = prime
        if kind == MODULAR:
            if modulus is None or modulus < 2:
                raise UsageError("modular ring needs modulus >= 2")
        elif kind == LOCALIZED:
            if prime is None or not _is_prime(prime):
                raise UsageError("localized integers need a prime")
        elif kind not in (INTEGER, RATIONAL):
            raise UsageError(f"unknown coefficient ring kind: {kind!r}")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def integers() -> "CoeffRing":
        return CoeffRing(INTEGER)

    @staticmethod
    def rationals() -> "CoeffRing":
        return CoeffRing(RATIONAL)

    @staticmethod
    def modular(m: int) -> "CoeffRing":
        return CoeffRing(MODULAR, modulus=m)

    @staticmethod
    def localized(p: int) -> "CoeffRing":
        return CoeffRing(LOCALIZED, prime=p)

    # -- value protocol --------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoeffRing)
            and self.kind == other.kind
            and self.modulus == other.modulus
            and self.prime == other.prime
        )

    def __hash__(self):
        return hash((self.kind, self.modulus, self.prime))

    def __repr__(self):
        if self.kind == MODULAR:
            return f"Z/{self.modulus}"
        if self.kind == LOCALIZED:
            return f"Z_({self.prime})"
        return self.kind

    def require_same(self, other: "CoeffRing"):
        if self != other:
            raise MixedCoefficientRings(f"{self} vs {other}")

    # -- coefficient arithmetic ------------------------------------------

    def normalize(self, c):
        """Coerce ``c`` into canonical coefficient form for this ring."""
        if self.kind == INTEGER:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise NotDivisible(c, f"{c} is not an integer")
                return int(c)
            return int(c)
        if self.kind == MODULAR:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    c = self._mod_div(int(c.numerator), int(c.denominator))
                else:
                    c = int(c)
            return int(c) % self.modulus
        c = Fraction(c)
        if self.kind == LOCALIZED and c.denominator % self.prime == 0:
            raise NotDivisible(c, f"{c} has denominator divisible by {self.prime}")
        return c

    def is_zero(self, c) -> bool:
        return c == 0

    def add(self, a, b):
        return self.normalize(a + b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    def from_int(self, n: int):
        return self.normalize(n)

    def _mod_div(self, a: int, n: int) -> int:
        # only division by units is well-defined in Z/m
        m = self.modulus
        if gcd(n % m, m) != 1:
            raise NotDivisible(a, f"{n} is not a unit in Z/{m}")
        return (a * pow(n, -1, m)) % m

    def div_int(self, c, n: int):
        """Exact division of a coefficient by a nonzero integer."""
        if n == 0:
            raise ZeroDivisionError("division by zero")
        if self.kind == INTEGER:
            q, r = divmod(c, n)
            if r:
                raise NotDivisible(c, f"{c} not divisible by {n}")
            return q
        if self.kind == MODULAR:
            return self._mod_div(c % self.modulus, n)
        q = Fraction(c, n)
        if self.kind == LOCALIZED and q.denominator % self.prime == 0:
            raise NotDivisible(c, f"{c}/{n} leaves Z_({self.prime})")
        return q

    # -- serialization ----------------------------------------------------

    def coeff_str(self, c) -> str:
        if isinstance(c, Fraction) and c.denominator != 1:
            return f"{c.numerator}/{c.denominator}"
        return str(int(c))

    def coeff_from_str(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return self.normalize(Fraction(int(num), int(den)))
        return self.normalize(int(s))

    def to_json(self) -> dict:
        if self.kind == INTEGER:
            return {"kind": "Z"}
        if self.kind == RATIONAL:
            return {"kind": "Q"}
        if self.kind == MODULAR:
            return {"kind": "Z/n", "n": self.modulus}
        return {"kind": "Z_(p)", "p": self.prime}

    @staticmethod
    def from_json(obj: dict) -> "CoeffRing":
        kind = obj.get("kind")
        if kind == "Z":
            return CoeffRing.integers()
        if kind == "Q":
            return CoeffRing.rationals()
        if kind == "Z/n":
            return CoeffRing.modular(int(obj["n"]))
        if kind == "Z_(p)":
            return CoeffRing.localized(int(obj["p"]))
        raise UsageError(f"unknown ring kind in JSON: {kind!r}")


ZZ = CoeffRing.integers()
QQ = CoeffRing.rationals()
