"""Truncated power series 1 + c_1 t + ... + c_N t^N with exact coefficients.

Coefficients are ``MultiPoly`` values over a shared ring, so the same type
covers numeric series and the symbolic series used to model Witt vectors
inside 1 + tA[[t]].  Arithmetic on two series of precisions N1, N2 yields
precision min(N1, N2).
"""

from __future__ import annotations

from .errors import MixedCoefficientRings, NonUnitConstantTerm, UsageError
from .poly import MultiPoly
from .rings import CoeffRing


class TruncSeries:
    __slots__ = ("ring", "coeffs", "precision")

    def __init__(self, ring: CoeffRing, coeffs):
        if not coeffs:
            raise UsageError("a truncated series needs at least the t^0 coefficient")
        self.ring = ring
        self.coeffs = tuple(self._lift(c) for c in coeffs)
        self.precision = len(self.coeffs) - 1

    def _lift(self, c):
        if isinstance(c, MultiPoly):
            self.ring.require_same(c.ring)
            return c
        return MultiPoly.const(self.ring, c)

    @staticmethod
    def one(ring: CoeffRing, precision: int) -> "TruncSeries":
        coeffs = [MultiPoly.one(ring)] + [MultiPoly.zero(ring)] * precision
        return TruncSeries(ring, coeffs)

    def __getitem__(self, n: int) -> MultiPoly:
        return self.coeffs[n]

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __str__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            body = str(c)
            if n == 0:
                parts.append(body)
            else:
                tn = "t" if n == 1 else f"t^{n}"
                if body == "1":
                    parts.append(tn)
                elif body == "-1":
                    parts.append(f"-{tn}")
                elif "+" in body or (body.count("-") - body.startswith("-")) > 0:
                    parts.append(f"({body})*{tn}")
                else:
                    parts.append(f"{body}*{tn}")
        joined = ""
        for part in parts:
            if not joined:
                joined = part
            elif part.startswith("-"):
                joined += " - " + part[1:]
            else:
                joined += " + " + part
        return f"{joined or '0'} + O(t^{self.precision + 1})"

    __repr__ = __str__

    def truncate(self, precision: int) -> "TruncSeries":
        if precision >= self.precision:
            return self
        return TruncSeries(self.ring, self.coeffs[: precision + 1])

    def _common(self, other: "TruncSeries"):
        if not isinstance(other, TruncSeries):
            raise UsageError("expected a TruncSeries")
        if self.ring != other.ring:
            raise MixedCoefficientRings(f"{self.ring} vs {other.ring}")
        n = min(self.precision, other.precision)
        return n

    def __add__(self, other):
        n = self._common(other)
        return TruncSeries(self.ring, [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __sub__(self, other):
        n = self._common(other)
        return TruncSeries(self.ring, [self.coeffs[i] - other.coeffs[i] for i in range(n + 1)])

    def __mul__(self, other):
        n = self._common(other)
        zero = MultiPoly.zero(self.ring)
        out = [zero] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(self.ring, out)

    def _require_unit(self):
        if self.coeffs[0] != MultiPoly.one(self.ring):
            raise NonUnitConstantTerm(f"constant term is {self.coeffs[0]}, expected 1")

    def reciprocal(self) -> "TruncSeries":
        """Inverse of a series with constant term 1, up to the precision."""
        self._require_unit()
        zero = MultiPoly.zero(self.ring)
        inv = [MultiPoly.one(self.ring)] + [zero] * self.precision
        for n in range(1, self.precision + 1):
            acc = zero
            for k in range(1, n + 1):
                if not self.coeffs[k].is_zero():
                    acc = acc + self.coeffs[k] * inv[n - k]
            inv[n] = -acc
        return TruncSeries(self.ring, inv)

    def log_derivative(self) -> "TruncSeries":
        """-t f'(t) / f(t); for f = prod (1 - a_n t^n) this reads off ghosts."""
        self._require_unit()
        zero = MultiPoly.zero(self.ring)
        minus_t_fprime = [zero] + [
            -(self.coeffs[n] * n) for n in range(1, self.precision + 1)
        ]
        return TruncSeries(self.ring, minus_t_fprime) * self.reciprocal()


def series_ops(op: str, f: TruncSeries, g: TruncSeries | None = None) -> TruncSeries:
    """Functional entry point: op in {mul, reciprocal, log_derivative}."""
    if op == "mul":
        if g is None:
            raise UsageError("series mul needs two operands")
        return f * g
    if op == "reciprocal":
        return f.reciprocal()
    if op == "log_derivative":
        return f.log_derivative()
    raise UsageError(f"unknown series operation {op!r}")


def geometric(ring: CoeffRing, a: MultiPoly, n: int, precision: int) -> TruncSeries:
    """1 / (1 - a t^n) as a truncated series."""
    zero = MultiPoly.zero(ring)
    coeffs = [zero] * (precision + 1)
    power = MultiPoly.one(ring)
    k = 0
    while n * k <= precision:
        coeffs[n * k] = power
        power = power * a
        k += 1
    return TruncSeries(ring, coeffs)
