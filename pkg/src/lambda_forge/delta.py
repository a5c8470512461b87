"""p-typical delta-rings on torsion-free polynomial presentations.

A presentation fixes a prime p, named generators and a delta-value for
each generator; the Frobenius lift phi(g) = g^p + p*delta(g) extends to
the whole ring by substitution, and delta extends to arbitrary elements
as (phi(e) - e^p)/p, which is exact because the ambient ring is
torsion-free.  The closed-form sum/product recursion is implemented as an
independent second route and the two are cross-checked in the tests.
"""

from __future__ import annotations

from .errors import DepthExceeded, NotAFrobeniusLift, NotARingMap, NotDivisible, UsageError
from .poly import MultiPoly, poly_sum
from .rings import ZZ
from .witt import TruncationSet, WittVec, witt_arith


def _binomial(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


class DeltaPresentation:
    """Prime p, generator names, and delta on each generator."""

    __slots__ = ("p", "gens", "delta_on_gens")

    def __init__(self, p: int, gens, delta_on_gens: dict):
        if p < 2:
            raise UsageError("delta-rings need a prime p")
        self.p = p
        self.gens = tuple(gens)
        fixed = {}
        for g, val in delta_on_gens.items():
            if g not in self.gens:
                raise UsageError(f"delta assigned to unknown generator {g}")
            if not isinstance(val, MultiPoly):
                val = MultiPoly.const(ZZ, val)
            if not set(val.vars) <= set(self.gens):
                raise UsageError(f"delta({g}) leaves the presentation ring")
            fixed[g] = val
        self.delta_on_gens = fixed

    def var(self, name: str) -> MultiPoly:
        if name not in self.gens:
            raise UsageError(f"unknown generator {name}")
        return MultiPoly.var(ZZ, name)

    def __repr__(self):
        inner = ", ".join(f"{g}: {v}" for g, v in sorted(self.delta_on_gens.items()))
        return f"DeltaPresentation(p={self.p}, Z[{', '.join(self.gens)}], delta={{{inner}}})"

    def phi_on_gens(self) -> dict:
        """The substitution g -> g^p + p*delta(g), defined where delta is."""
        out = {}
        for g in self.gens:
            if g in self.delta_on_gens:
                out[g] = MultiPoly.var(ZZ, g) ** self.p + self.delta_on_gens[g] * self.p
        return out

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "gens": list(self.gens),
            "delta": {g: self.delta_on_gens[g].to_json() for g in sorted(self.delta_on_gens)},
        }

    @staticmethod
    def from_json(obj: dict) -> "DeltaPresentation":
        delta = {g: MultiPoly.from_json(v) for g, v in obj["delta"].items()}
        return DeltaPresentation(int(obj["p"]), obj["gens"], delta)

    def _check_in_domain(self, e: MultiPoly):
        missing = sorted(set(e.vars) - set(self.delta_on_gens))
        if missing:
            raise DepthExceeded(
                f"delta({missing[0]}) is not assigned (truncation depth exceeded)"
            )

    def phi(self, e: MultiPoly) -> MultiPoly:
        self._check_in_domain(e)
        return e.substitute(self.phi_on_gens())

    def delta(self, e: MultiPoly) -> MultiPoly:
        """delta(e) = (phi(e) - e^p) / p, exact on the torsion-free base."""
        if not isinstance(e, MultiPoly):
            e = MultiPoly.const(ZZ, e)
        self._check_in_domain(e)
        diff = self.phi(e) - e ** self.p
        try:
            return diff.div_int(self.p)
        except NotDivisible as exc:
            # impossible for torsion-free presentations; surfaced as a bug
            raise NotDivisible(exc.witness, f"internal consistency failure: {exc}") from None


def phi_from_delta(pres: DeltaPresentation) -> dict:
    """The derived Frobenius lift as a substitution map on generators."""
    return pres.phi_on_gens()


def delta_extend(pres: DeltaPresentation, e: MultiPoly) -> MultiPoly:
    return pres.delta(e)


def delta_extend_recursive(pres: DeltaPresentation, e: MultiPoly) -> MultiPoly:
    """Independent route: extend delta by the sum and product rules.

    delta(a + b) = delta(a) + delta(b) - (1/p) * sum_{0<i<p} C(p,i) a^i b^(p-i)
    delta(a * b) = a^p delta(b) + b^p delta(a) + p delta(a) delta(b)
    delta(c)     = (c - c^p) / p  for integer constants
    delta(g)     = the assigned value on a generator
    """
    if not isinstance(e, MultiPoly):
        e = MultiPoly.const(ZZ, e)
    pres._check_in_domain(e)
    p = pres.p

    def of_const(c: int) -> MultiPoly:
        return MultiPoly.const(ZZ, (c - c ** p) // p)

    def of_product(a, da, b, db):
        return a ** p * db + b ** p * da + da * db * p

    def of_monomial(coeff: int, mono: dict):
        # peel one generator power at a time via the product rule
        value = MultiPoly.const(ZZ, coeff)
        dvalue = of_const(coeff)
        for g in sorted(mono):
            dg = pres.delta_on_gens[g]
            gp = MultiPoly.var(ZZ, g)
            for _ in range(mono[g]):
                dvalue = of_product(value, dvalue, gp, dg)
                value = value * gp
        return value, dvalue

    def of_sum(a, da, b, db):
        cross = poly_sum(
            ZZ,
            [
                a ** i * b ** (p - i) * (_binomial(p, i) // p)
                for i in range(1, p)
            ],
        )
        return da + db - cross

    total = None
    dtotal = None
    for mono, coeff in e.monomials():
        value, dvalue = of_monomial(int(coeff), mono)
        if total is None:
            total, dtotal = value, dvalue
        else:
            dtotal = of_sum(total, dtotal, value, dvalue)
            total = total + value
    if total is None:
        return MultiPoly.zero(ZZ)
    return dtotal


def delta_from_phi(p: int, gens, phi_on_gens: dict) -> DeltaPresentation:
    """Recover delta from a Frobenius lift; the inverse of ``phi_from_delta``.

    Raises ``NotAFrobeniusLift`` with the first witness term when some
    phi(g) - g^p is not divisible by p.
    """
    delta = {}
    for g in gens:
        image = phi_on_gens.get(g)
        if image is None:
            raise UsageError(f"phi not given on generator {g}")
        if not isinstance(image, MultiPoly):
            image = MultiPoly.const(ZZ, image)
        diff = image - MultiPoly.var(ZZ, g) ** p
        try:
            delta[g] = diff.div_int(p)
        except NotDivisible as exc:
            raise NotAFrobeniusLift(g, exc.witness) from None
    return DeltaPresentation(p, gens, delta)


def delta_on_integers(p: int, n: int) -> int:
    """The unique delta-structure on Z: delta(n) = (n - n^p) / p."""
    return (n - n ** p) // p


def free_delta_ring(p: int, depth: int) -> DeltaPresentation:
    """Z[x_0..x_depth] with delta(x_n) = x_(n+1); phi(x_n) = x_n^p + p x_(n+1).

    delta of the last generator leaves the truncation and raises
    ``DepthExceeded``.
    """
    if depth < 1:
        raise UsageError("free delta-rings need depth >= 1")
    gens = [f"x{i}" for i in range(depth + 1)]
    delta = {f"x{i}": MultiPoly.var(ZZ, f"x{i + 1}") for i in range(depth)}
    return DeltaPresentation(p, gens, delta)


class Witt2Section:
    """The section s(e) = (e, delta(e)) of w_0: W_2(A) -> A."""

    __slots__ = ("pres", "trunc")

    def __init__(self, pres: DeltaPresentation):
        self.pres = pres
        self.trunc = TruncationSet.p_typical(pres.p, 2)

    def __call__(self, e: MultiPoly) -> WittVec:
        if not isinstance(e, MultiPoly):
            e = MultiPoly.const(ZZ, e)
        return WittVec(self.trunc, ZZ, {1: e, self.pres.p: self.pres.delta(e)})

    def check_ring_map(self, a: MultiPoly, b: MultiPoly) -> dict:
        """Compare s(a op b) against Witt arithmetic on s(a), s(b)."""
        add_ok = self(a + b) == witt_arith("add", self(a), self(b))
        mul_ok = self(a * b) == witt_arith("mul", self(a), self(b))
        return {"add": add_ok, "mul": mul_ok}


def witt2_section(pres: DeltaPresentation) -> Witt2Section:
    return Witt2Section(pres)


def section_to_delta(p: int, gens, second_components: dict) -> DeltaPresentation:
    """Read delta back off the second Witt coordinate of a section."""
    return DeltaPresentation(p, gens, second_components)


def verify_integer_section(p: int, second, lo: int, hi: int):
    """Check a candidate n -> (n, second(n)) is a ring map into W_2(Z).

    On Z the only section is n -> (n, (n - n^p)/p); any other candidate
    fails additivity or multiplicativity and raises ``NotARingMap`` with
    the witness pair.
    """
    S = TruncationSet.p_typical(p, 2)

    def lift(n: int) -> WittVec:
        return WittVec(S, ZZ, {1: n, p: second(n)})

    for a in range(lo, hi + 1):
        for b in range(lo, hi + 1):
            if lift(a + b) != lift(a) + lift(b):
                raise NotARingMap((a, b), f"s({a}+{b}) != s({a}) + s({b})")
            if lift(a * b) != lift(a) * lift(b):
                raise NotARingMap((a, b), f"s({a}*{b}) != s({a}) * s({b})")
    return True
