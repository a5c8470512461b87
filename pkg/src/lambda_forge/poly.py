"""Sparse multivariate polynomials over an exact coefficient ring.

Representation: an ordered tuple of variable names (sorted, and pruned to
the variables that actually occur) plus a map from exponent vectors to
nonzero coefficients.  Every operation canonicalizes its result, so
polynomial identity is plain structural equality.  Term order is graded
lexicographic, largest first; "the first offending term" in error
certificates refers to this order.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotDivisible, UsageError
from .rings import CoeffRing


def _grlex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("ring", "vars", "terms")

    def __init__(self, ring: CoeffRing, vars: tuple, terms: dict):
        self.ring = ring
        self.vars, self.terms = _canonical(ring, tuple(vars), terms)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(ring: CoeffRing, c) -> "MultiPoly":
        return MultiPoly(ring, (), {(): c})

    @staticmethod
    def zero(ring: CoeffRing) -> "MultiPoly":
        return MultiPoly(ring, (), {})

    @staticmethod
    def one(ring: CoeffRing) -> "MultiPoly":
        return MultiPoly.const(ring, 1)

    @staticmethod
    def var(ring: CoeffRing, name: str) -> "MultiPoly":
        return MultiPoly(ring, (name,), {(1,): 1})

    # -- predicates and accessors ----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self):
        if self.vars:
            raise UsageError(f"{self} is not constant")
        return self.terms.get((), self.ring.from_int(0))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading_term(self):
        """(exponent vector, coefficient) of the graded-lex largest term."""
        exps = next(iter(self.terms))
        return exps, self.terms[exps]

    def coefficient_of(self, monomial: dict):
        """Coefficient of the monomial given as {var: exponent}."""
        want = {v: e for v, e in monomial.items() if e}
        for exps, c in self.terms.items():
            found = {v: e for v, e in zip(self.vars, exps) if e}
            if found == want:
                return c
        return self.ring.from_int(0)

    def monomials(self):
        """Iterate (as {var: exp} dicts, coefficient) in canonical order."""
        for exps, c in self.terms.items():
            yield {v: e for v, e in zip(self.vars, exps) if e}, c

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self.ring.require_same(other.ring)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vars, left, right = _merge(self, other)
        terms = dict(left)
        for e, c in right.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.ring, vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vars, left, right = _merge(self, other)
        terms: dict = {}
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, 0) + c1 * c2
        return MultiPoly(self.ring, vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise UsageError("polynomial powers take nonnegative integer exponents")
        result = MultiPoly.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = MultiPoly.const(self.ring, other)
            except NotDivisible:
                return False
        return (
            isinstance(other, MultiPoly)
            and self.ring == other.ring
            and self.vars == other.vars
            and self.terms == other.terms
        )

    __hash__ = None

    # -- the operations everything else is built on ------------------------

    def div_int(self, d: int) -> "MultiPoly":
        """Exact division by a nonzero integer.

        Raises ``NotDivisible`` with the first offending term: this is the
        failure certificate behind every "is phi a Frobenius lift" check.
        """
        terms = {}
        for exps, c in self.terms.items():
            try:
                terms[exps] = self.ring.div_int(c, d)
            except NotDivisible:
                raise NotDivisible(self._term_str(exps, c)) from None
        return MultiPoly(self.ring, self.vars, terms)

    def substitute(self, assignment: dict) -> "MultiPoly":
        """Simultaneous substitution; unassigned variables map to themselves."""
        values = []
        for v in self.vars:
            val = assignment.get(v)
            if val is None:
                val = MultiPoly.var(self.ring, v)
            elif isinstance(val, (int, Fraction)):
                val = MultiPoly.const(self.ring, val)
            else:
                self.ring.require_same(val.ring)
            values.append(val)
        powers = [{0: MultiPoly.one(self.ring)} for _ in self.vars]
        parts = []
        for exps, c in self.terms.items():
            part = MultiPoly.const(self.ring, c)
            for i, e in enumerate(exps):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = values[i] ** e
                    part = part * cache[e]
            parts.append(part)
        return poly_sum(self.ring, parts)

    def evaluate(self, env: dict):
        """Evaluate at coefficient values; returns a ring coefficient."""
        ring = self.ring
        values = []
        for v in self.vars:
            if v not in env:
                raise UsageError(f"no value for variable {v}")
            values.append(ring.normalize(env[v]))
        total = ring.from_int(0)
        powers = [{} for _ in self.vars]
        for exps, c in self.terms.items():
            acc = c
            for i, e in enumerate(exps):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = values[i] ** e
                    acc = acc * cache[e]
            total = total + acc
        return ring.normalize(total)

    def convert_ring(self, ring: CoeffRing) -> "MultiPoly":
        """Push coefficients through ``ring.normalize`` (e.g. Z -> Z/m)."""
        if ring == self.ring:
            return self
        return MultiPoly(ring, self.vars, dict(self.terms))

    def rename_vars(self, mapping: dict) -> "MultiPoly":
        new_vars = tuple(mapping.get(v, v) for v in self.vars)
        if len(set(new_vars)) != len(new_vars):
            return self.substitute({v: MultiPoly.var(self.ring, mapping[v]) for v in self.vars if v in mapping})
        return MultiPoly(self.ring, new_vars, dict(self.terms))

    # -- formatting ---------------------------------------------------------

    def _term_str(self, exps, c) -> str:
        factors = [f"{v}^{e}" if e > 1 else v for v, e in zip(self.vars, exps) if e]
        coeff = self.ring.coeff_str(c)
        if not factors:
            return coeff
        if coeff == "1":
            return "*".join(factors)
        if coeff == "-1":
            return "-" + "*".join(factors)
        return coeff + "*" + "*".join(factors)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for exps, c in self.terms.items():
            t = self._term_str(exps, c)
            if not out:
                out.append(t)
            elif t.startswith("-"):
                out.append(" - " + t[1:])
            else:
                out.append(" + " + t)
        return "".join(out)

    def __repr__(self):
        return f"MultiPoly({self.ring!r}: {self})"

    # -- JSON schema ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "ring": self.ring.to_json(),
            "terms": [
                {"coef": self.ring.coeff_str(c), "exps": list(e)}
                for e, c in self.terms.items()
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "MultiPoly":
        ring = CoeffRing.from_json(obj["ring"])
        vars = tuple(obj["vars"])
        terms = {}
        for t in obj["terms"]:
            exps = tuple(int(e) for e in t["exps"])
            if len(exps) != len(vars):
                raise UsageError("exponent vector length does not match vars")
            terms[exps] = terms.get(exps, 0) + ring.coeff_from_str(t["coef"])
        return MultiPoly(ring, vars, terms)


def _canonical(ring, vars, terms):
    clean = {}
    for exps, c in terms.items():
        c = ring.normalize(c)
        if not ring.is_zero(c):
            if len(exps) != len(vars):
                raise UsageError("exponent vector length does not match vars")
            clean[tuple(exps)] = c
    if not clean:
        return (), {}
    used = [i for i in range(len(vars)) if any(e[i] for e in clean)]
    order = sorted(range(len(used)), key=lambda j: vars[used[j]])
    keep = [used[j] for j in order]
    new_vars = tuple(vars[i] for i in keep)
    remapped = {tuple(e[i] for i in keep): c for e, c in clean.items()}
    ordered = {}
    for exps in sorted(remapped, key=_grlex_key, reverse=True):
        ordered[exps] = remapped[exps]
    return new_vars, ordered


def _merge(a: MultiPoly, b: MultiPoly):
    """Common variable space for two canonical polynomials."""
    if a.vars == b.vars:
        return a.vars, a.terms, b.terms
    vars = tuple(sorted(set(a.vars) | set(b.vars)))
    index = {v: i for i, v in enumerate(vars)}

    def remap(p):
        pos = [index[v] for v in p.vars]
        out = {}
        for exps, c in p.terms.items():
            key = [0] * len(vars)
            for i, e in zip(pos, exps):
                key[i] = e
            out[tuple(key)] = c
        return out

    return vars, remap(a), remap(b)


def poly_sum(ring: CoeffRing, parts) -> MultiPoly:
    """Sum a list of polynomials with a single merge pass."""
    parts = [p for p in parts if not p.is_zero()]
    if not parts:
        return MultiPoly.zero(ring)
    vars = tuple(sorted(set().union(*(p.vars for p in parts))))
    index = {v: i for i, v in enumerate(vars)}
    terms: dict = {}
    for p in parts:
        ring.require_same(p.ring)
        pos = [index[v] for v in p.vars]
        for exps, c in p.terms.items():
            key = [0] * len(vars)
            for i, e in zip(pos, exps):
                key[i] = e
            key = tuple(key)
            terms[key] = terms.get(key, 0) + c
    return MultiPoly(ring, vars, terms)


def poly_arith(op: str, a: MultiPoly, b=None) -> MultiPoly:
    """Functional entry point: op in {add, sub, mul, neg, pow}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "pow":
        return a ** b
    raise UsageError(f"unknown polynomial operation {op!r}")


def exact_div_int(a: MultiPoly, d: int) -> MultiPoly:
    """Spec surface for exact division by an integer (see ``div_int``)."""
    return a.div_int(d)


def substitute(target: MultiPoly, assignment: dict) -> MultiPoly:
    return target.substitute(assignment)


def evaluate_generic(poly: MultiPoly, env: dict, zero, one):
    """Evaluate an integer polynomial in an arbitrary commutative ring.

    ``env`` maps variable names to ring elements supporting ``+``, ``*``
    and ``** int``; integer coefficients act by repeated addition, so the
    target ring needs no scalar interface.  Used to evaluate universal
    Witt polynomials inside rings of Witt vectors.
    """
    total = zero
    for exps, c in poly.terms.items():
        acc = one
        for v, e in zip(poly.vars, exps):
            if e:
                acc = acc * (env[v] ** e)
        total = total + _int_times(int(c), acc, zero)
    return total


def _int_times(c: int, value, zero):
    if c == 0:
        return zero
    negate = c < 0
    c = abs(c)
    acc = None
    base = value
    while c:
        if c & 1:
            acc = base if acc is None else acc + base
        c >>= 1
        if c:
            base = base + base
    return -acc if negate else acc


def random_poly(rng, ring: CoeffRing, vars, max_terms=4, max_exp=3, coeff_bound=9) -> MultiPoly:
    """Small random polynomial, deterministic under a seeded ``rng``."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_exp) for _ in vars)
        c = rng.randint(-coeff_bound, coeff_bound)
        terms[exps] = terms.get(exps, 0) + c
    return MultiPoly(ring, tuple(vars), terms)
