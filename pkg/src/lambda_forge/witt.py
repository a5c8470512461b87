"""Truncated big and p-typical Witt vectors.

Everything is indexed by a finite division-stable truncation set S; the
p-typical theory is the special case S = {1, p, ..., p^(k-1)} and shares
one code path with big Witt vectors.  Ring structure comes from universal
integer polynomials obtained by triangular inversion of the ghost map
w_n = sum_{d | n} d * a_d^(n/d); their integrality is a theorem, so a
division failure during generation is a bug and raises
``IntegralityViolation`` rather than being swallowed.

The universal polynomial memo is the single shared cache in the system:
concurrent reads are free, inserts hold a lock, duplicate computation of
the same entry is harmless.  Setting LAMBDA_FORGE_CACHE_DIR persists the
memo as JSON files keyed by (operation, truncation).
"""

from __future__ import annotations

import json
import os
import threading

from .errors import (
    IntegralityViolation,
    NonUnitConstantTerm,
    NotASubset,
    NotDivisible,
    TorsionDetected,
    TruncationMismatch,
    UsageError,
)
from .poly import MultiPoly, evaluate_generic, poly_sum
from .rings import MODULAR, CoeffRing, ZZ
from .series import TruncSeries, geometric


def _divisors(n: int):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


class TruncationSet:
    """Finite division-stable set of positive integers."""

    __slots__ = ("elems",)

    def __init__(self, elems):
        elems = tuple(sorted(set(int(n) for n in elems)))
        for n in elems:
            if n < 1:
                raise UsageError("truncation sets contain positive integers")
            for d in _divisors(n):
                if d not in elems:
                    raise UsageError(f"not division-stable: {n} in set but divisor {d} missing")
        self.elems = elems

    @staticmethod
    def big(n: int) -> "TruncationSet":
        return TruncationSet(range(1, n + 1))

    @staticmethod
    def p_typical(p: int, k: int) -> "TruncationSet":
        return TruncationSet(p ** i for i in range(k))

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __contains__(self, n):
        return n in self.elems

    def __eq__(self, other):
        return isinstance(other, TruncationSet) and self.elems == other.elems

    def __hash__(self):
        return hash(self.elems)

    def __repr__(self):
        return f"TruncationSet{self.elems}"

    def issubset(self, other: "TruncationSet") -> bool:
        return set(self.elems) <= set(other.elems)

    def divide(self, n: int) -> "TruncationSet":
        """S/n = {d : n*d in S}."""
        return TruncationSet(d for d in range(1, max(self.elems, default=0) + 1) if n * d in self.elems)

    def product(self, other: "TruncationSet") -> "TruncationSet":
        return TruncationSet(s * t for s in self.elems for t in other.elems)

    def _big_n(self):
        n = len(self.elems)
        return n if self.elems == tuple(range(1, n + 1)) else None

    def _p_typical(self):
        if not self.elems or self.elems[0] != 1 or len(self.elems) < 2:
            return None
        p = self.elems[1]
        if p < 2:
            return None
        k = len(self.elems)
        return (p, k) if self.elems == tuple(p ** i for i in range(k)) else None

    def label(self) -> str:
        if not self.elems:
            return "empty"
        n = self._big_n()
        if n is not None:
            return f"big{n}"
        pt = self._p_typical()
        if pt is not None:
            return f"p{pt[0]}l{pt[1]}"
        return "s" + "-".join(str(n) for n in self.elems)

    def to_json(self) -> dict:
        n = self._big_n()
        if n is not None:
            return {"kind": "big", "n": n}
        pt = self._p_typical()
        if pt is not None:
            return {"kind": "p", "p": pt[0], "len": pt[1]}
        return {"kind": "set", "elems": list(self.elems)}

    @staticmethod
    def from_json(obj: dict) -> "TruncationSet":
        kind = obj.get("kind")
        if kind == "big":
            return TruncationSet.big(int(obj["n"]))
        if kind == "p":
            return TruncationSet.p_typical(int(obj["p"]), int(obj["len"]))
        if kind == "set":
            return TruncationSet(obj["elems"])
        raise UsageError(f"unknown truncation kind {kind!r}")


# ---------------------------------------------------------------------------
# universal polynomial generation and the shared memo


_MEMO: dict = {}
_LOCK = threading.Lock()


def _cache_path(key) -> str | None:
    root = os.environ.get("LAMBDA_FORGE_CACHE_DIR")
    if not root:
        return None
    return os.path.join(root, "_".join(str(part) for part in key) + ".json")


def _poly_map_to_json(polys: dict) -> dict:
    return {",".join(str(i) for i in (k if isinstance(k, tuple) else (k,))): p.to_json() for k, p in polys.items()}


def _poly_map_from_json(obj: dict, tuple_keys: bool) -> dict:
    out = {}
    for k, v in obj.items():
        parts = tuple(int(x) for x in k.split(","))
        out[parts if tuple_keys else parts[0]] = MultiPoly.from_json(v)
    return out


def _memoized_polys(key, compute, tuple_keys=False) -> dict:
    with _LOCK:
        if key in _MEMO:
            return _MEMO[key]
    path = _cache_path(key)
    polys = None
    if path and os.path.exists(path):
        try:
            with open(path) as fh:
                polys = _poly_map_from_json(json.load(fh)["polys"], tuple_keys)
        except (OSError, ValueError, KeyError):
            polys = None
    fresh = polys is None
    if fresh:
        polys = compute()
    with _LOCK:
        polys = _MEMO.setdefault(key, polys)
    if fresh and path:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump({"polys": _poly_map_to_json(polys)}, fh, sort_keys=True)
        os.replace(tmp, path)
    return polys


def clear_memo():
    with _LOCK:
        _MEMO.clear()


def _sym_vec(prefix: str, S: TruncationSet) -> "WittVec":
    comps = {n: MultiPoly.var(ZZ, f"{prefix}{n}") for n in S}
    return WittVec(S, ZZ, comps)


def _sym_ghost(prefix: str, S: TruncationSet) -> dict:
    """Symbolic ghost components w_n = sum_{d|n} d * prefix_d^(n/d)."""
    out = {}
    for n in S:
        parts = [
            MultiPoly.var(ZZ, f"{prefix}{d}") ** (n // d) * d
            for d in _divisors(n)
        ]
        out[n] = poly_sum(ZZ, parts)
    return out


def _triangular_solve(S: TruncationSet, targets: dict) -> dict:
    """Solve w_n(x) = targets[n] for integer polynomials x_n, bottom up."""
    solved: dict = {}
    for n in S:
        acc = targets[n]
        for d in _divisors(n):
            if d != n and d in solved:
                acc = acc - solved[d] ** (n // d) * d
        try:
            solved[n] = acc.div_int(n)
        except NotDivisible as exc:
            raise IntegralityViolation(n, f"index {n}: {exc}") from exc
    return solved


def structure_poly_map(op: str, S: TruncationSet) -> dict:
    """Universal polynomials for add, mul or neg over S, memoized."""
    if op not in ("add", "mul", "neg"):
        raise UsageError(f"no structure polynomials for op {op!r}")

    def compute():
        ga = _sym_ghost("a", S)
        if op == "neg":
            targets = {n: -ga[n] for n in S}
        else:
            gb = _sym_ghost("b", S)
            if op == "add":
                targets = {n: ga[n] + gb[n] for n in S}
            else:
                targets = {n: ga[n] * gb[n] for n in S}
        return _triangular_solve(S, targets)

    return _memoized_polys(("structure", op, S.label()), compute)


class StructurePolys:
    """Certified structure polynomials for one op over one truncation set."""

    __slots__ = ("op", "trunc", "polys")

    def __init__(self, op: str, trunc: TruncationSet, polys: dict):
        self.op = op
        self.trunc = trunc
        self.polys = polys


def structure_polys(op: str, S: TruncationSet) -> StructurePolys:
    return StructurePolys(op, S, structure_poly_map(op, S))


def frobenius_poly_map(n: int, S: TruncationSet) -> dict:
    """Universal polynomials for F_n: W_S -> W_{S/n}, memoized."""
    target = S.divide(n)

    def compute():
        ga = _sym_ghost("a", S)
        return _triangular_solve(target, {d: ga[n * d] for d in target})

    return _memoized_polys(("frobenius", n, S.label()), compute)


def comult_poly_map(S: TruncationSet, T: TruncationSet) -> dict:
    """Universal comultiplication polynomials, keyed by (s, t).

    The comultiplication W_{S*T} -> W_S(W_T) is pinned down by the ghost
    characterization w_s(comult(a)) = F_s(a) restricted to T.  Writing
    b(t) for the image of comult(a) under the inner ghost w_t, the vector
    b(t) has S-ghost (w_{s*t}(a))_s; a second triangular inversion over T
    then recovers the components themselves.
    """
    U = S.product(T)

    def compute():
        ga = _sym_ghost("a", U)
        inner = {t: _triangular_solve(S, {s: ga[s * t] for s in S}) for t in T}
        out = {}
        for s in S:
            col = _triangular_solve(T, {t: inner[t][s] for t in T})
            for t in T:
                out[(s, t)] = col[t]
        return out

    return _memoized_polys(("comult", S.label(), T.label()), compute, tuple_keys=True)


# ---------------------------------------------------------------------------
# Witt vectors


class WittVec:
    """Witt vector over a truncation set; components indexed by S.

    Components are polynomials over a shared coefficient ring, or (for
    the comonad) Witt vectors themselves.
    """

    __slots__ = ("trunc", "ring", "comps")

    def __init__(self, trunc: TruncationSet, ring: CoeffRing, comps: dict):
        if set(comps) != set(trunc.elems):
            raise TruncationMismatch(
                f"components {sorted(comps)} do not match truncation {list(trunc.elems)}"
            )
        fixed = {}
        nested = 0
        for n in trunc:
            c = comps[n]
            if not isinstance(c, (MultiPoly, WittVec)):
                c = MultiPoly.const(ring, c)
            if isinstance(c, MultiPoly):
                ring.require_same(c.ring)
            else:
                nested += 1
            fixed[n] = c
        if nested and nested != len(fixed):
            raise UsageError("components must be all polynomials or all Witt vectors")
        self.trunc = trunc
        self.ring = ring
        self.comps = fixed

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(trunc: TruncationSet, ring: CoeffRing) -> "WittVec":
        return WittVec(trunc, ring, {n: MultiPoly.zero(ring) for n in trunc})

    @staticmethod
    def from_list(trunc: TruncationSet, ring: CoeffRing, values) -> "WittVec":
        values = list(values)
        if len(values) != len(trunc):
            raise TruncationMismatch(
                f"{len(values)} components for a truncation set of size {len(trunc)}"
            )
        return WittVec(trunc, ring, dict(zip(trunc.elems, values)))

    def as_list(self):
        return [self.comps[n] for n in self.trunc]

    # -- equality and display ----------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, WittVec)
            and self.trunc == other.trunc
            and self.ring == other.ring
            and self.comps == other.comps
        )

    __hash__ = None

    def __repr__(self):
        inside = ", ".join(f"{n}: {self.comps[n]}" for n in self.trunc)
        return f"WittVec({inside})"

    # -- helpers for nested components ---------------------------------------

    def _zero_comp(self):
        for c in self.comps.values():
            if isinstance(c, WittVec):
                return WittVec.zero(c.trunc, self.ring)
            break
        return MultiPoly.zero(self.ring)

    def _one_comp(self):
        for c in self.comps.values():
            if isinstance(c, WittVec):
                return teichmuller(MultiPoly.one(self.ring), c.trunc, self.ring)
            break
        return MultiPoly.one(self.ring)

    def _all_poly(self) -> bool:
        return all(isinstance(c, MultiPoly) for c in self.comps.values())

    def _all_const(self) -> bool:
        return all(isinstance(c, MultiPoly) and c.is_constant() for c in self.comps.values())

    # -- arithmetic -----------------------------------------------------------

    def _binary(self, op: str, other: "WittVec") -> "WittVec":
        if not isinstance(other, WittVec):
            raise UsageError("Witt arithmetic needs two Witt vectors")
        if self.trunc != other.trunc:
            raise TruncationMismatch(f"{self.trunc} vs {other.trunc}")
        if self.ring != other.ring:
            from .errors import MixedCoefficientRings

            raise MixedCoefficientRings(f"{self.ring} vs {other.ring}")
        polys = structure_poly_map(op, self.trunc)
        env = {f"a{n}": self.comps[n] for n in self.trunc}
        env.update({f"b{n}": other.comps[n] for n in self.trunc})
        return self._apply_polys(polys, env, self.trunc)

    def _apply_polys(self, polys: dict, env: dict, out_trunc: TruncationSet) -> "WittVec":
        if all(isinstance(v, MultiPoly) for v in env.values()):
            if all(v.is_constant() for v in env.values()):
                scalars = {k: v.constant_value() for k, v in env.items()}
                comps = {
                    n: MultiPoly.const(self.ring, _converted(p, self.ring).evaluate(scalars))
                    for n, p in polys.items()
                }
            else:
                comps = {
                    n: _converted(p, self.ring).substitute(env) for n, p in polys.items()
                }
        else:
            zero, one = self._zero_comp(), self._one_comp()
            comps = {n: evaluate_generic(p, env, zero, one) for n, p in polys.items()}
        return WittVec(out_trunc, self.ring, comps)

    def __add__(self, other):
        return self._binary("add", other)

    def __mul__(self, other):
        return self._binary("mul", other)

    def __neg__(self):
        polys = structure_poly_map("neg", self.trunc)
        env = {f"a{n}": self.comps[n] for n in self.trunc}
        return self._apply_polys(polys, env, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise UsageError("Witt powers take nonnegative integer exponents")
        result = teichmuller(MultiPoly.one(self.ring), self.trunc, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- JSON -------------------------------------------------------------------

    def to_json(self) -> dict:
        if not self._all_poly():
            raise UsageError("nested Witt vectors have no JSON form")
        return {
            "trunc": self.trunc.to_json(),
            "comps": {str(n): self.comps[n].to_json() for n in self.trunc},
        }

    @staticmethod
    def from_json(obj: dict) -> "WittVec":
        trunc = TruncationSet.from_json(obj["trunc"])
        comps = {int(k): MultiPoly.from_json(v) for k, v in obj["comps"].items()}
        rings = {c.ring for c in comps.values()}
        if len(rings) > 1:
            from .errors import MixedCoefficientRings

            raise MixedCoefficientRings("components carry different rings")
        ring = rings.pop() if rings else ZZ
        return WittVec(trunc, ring, comps)


_CONVERTED: dict = {}


def _converted(poly: MultiPoly, ring: CoeffRing) -> MultiPoly:
    # keyed by identity; holding the source in the value keeps ids stable
    if ring == poly.ring:
        return poly
    key = (id(poly), ring)
    hit = _CONVERTED.get(key)
    if hit is None or hit[0] is not poly:
        hit = (poly, poly.convert_ring(ring))
        _CONVERTED[key] = hit
    return hit[1]


class GhostVec:
    """Ghost components, same index set as the Witt vector they came from."""

    __slots__ = ("trunc", "ring", "comps")

    def __init__(self, trunc: TruncationSet, ring: CoeffRing, comps: dict):
        if set(comps) != set(trunc.elems):
            raise TruncationMismatch("ghost components do not match truncation")
        self.trunc = trunc
        self.ring = ring
        self.comps = {n: comps[n] for n in trunc}

    def as_list(self):
        return [self.comps[n] for n in self.trunc]

    def __eq__(self, other):
        return (
            isinstance(other, GhostVec)
            and self.trunc == other.trunc
            and self.comps == other.comps
        )

    __hash__ = None

    def __repr__(self):
        inside = ", ".join(f"{n}: {self.comps[n]}" for n in self.trunc)
        return f"GhostVec({inside})"

    def to_json(self) -> dict:
        return {
            "trunc": self.trunc.to_json(),
            "comps": {str(n): self.comps[n].to_json() for n in self.trunc},
        }

    @staticmethod
    def from_json(obj: dict) -> "GhostVec":
        trunc = TruncationSet.from_json(obj["trunc"])
        comps = {int(k): MultiPoly.from_json(v) for k, v in obj["comps"].items()}
        rings = {c.ring for c in comps.values()}
        ring = rings.pop() if rings else ZZ
        return GhostVec(trunc, ring, comps)


# ---------------------------------------------------------------------------
# operations


def ghost_map(a: WittVec) -> GhostVec:
    """w_n = sum over divisors d of n of d * a_d^(n/d)."""
    comps = {}
    for n in a.trunc:
        parts = [a.comps[d] ** (n // d) * d for d in _divisors(n)]
        comps[n] = poly_sum(a.ring, parts)
    return GhostVec(a.trunc, a.ring, comps)


def ghost_inverse(g: GhostVec) -> WittVec:
    """Triangular inverse of the ghost map.

    Raises ``NotDivisible(n)`` when component n fails to exist in the
    coefficient ring: the certificate that g is not in the ghost image.
    """
    solved = {}
    for n in g.trunc:
        acc = g.comps[n]
        for d in _divisors(n):
            if d != n:
                acc = acc - solved[d] ** (n // d) * d
        try:
            solved[n] = acc.div_int(n)
        except NotDivisible as exc:
            raise NotDivisible(n, f"component a_{n} is not in the coefficient ring: {exc}") from None
    return WittVec(g.trunc, g.ring, solved)


def witt_arith(op: str, a: WittVec, b: WittVec | None = None) -> WittVec:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "sub":
        return a - b
    raise UsageError(f"unknown Witt operation {op!r}")


def teichmuller(r, S: TruncationSet, ring: CoeffRing | None = None) -> WittVec:
    """Multiplicative lift r -> (r, 0, 0, ...)."""
    if not isinstance(r, MultiPoly):
        if ring is None:
            ring = ZZ
        r = MultiPoly.const(ring, r)
    ring = r.ring
    comps = {n: MultiPoly.zero(ring) for n in S}
    if 1 in comps:
        comps[1] = r
    return WittVec(S, ring, comps)


def frobenius(n: int, a: WittVec) -> WittVec:
    """F_n: W_S -> W_{S/n}, characterized by w_d(F_n a) = w_{nd}(a)."""
    if n < 1:
        raise UsageError("Frobenius index must be positive")
    target = a.trunc.divide(n)
    polys = frobenius_poly_map(n, a.trunc)
    env = {f"a{m}": a.comps[m] for m in a.trunc}
    return a._apply_polys(polys, env, target)


def verschiebung(n: int, a: WittVec, S: TruncationSet) -> WittVec:
    """V_n: W_{S/n} -> W_S, (V_n a)_m = a_{m/n} when n | m, else 0."""
    if n < 1:
        raise UsageError("Verschiebung index must be positive")
    if a.trunc != S.divide(n):
        raise TruncationMismatch(f"source truncation {a.trunc} is not {S}/{n}")
    comps = {}
    for m in S:
        if m % n == 0 and m // n in a.trunc:
            comps[m] = a.comps[m // n]
        else:
            comps[m] = MultiPoly.zero(a.ring)
    return WittVec(S, a.ring, comps)


def restrict(a: WittVec, T: TruncationSet) -> WittVec:
    if not T.issubset(a.trunc):
        raise NotASubset(f"{T} is not contained in {a.trunc}")
    return WittVec(T, a.ring, {n: a.comps[n] for n in T})


def to_series(a: WittVec) -> TruncSeries:
    """prod over n in S of (1 - a_n t^n), truncated at t^N for S = Big(N)."""
    N = a.trunc._big_n()
    if N is None:
        raise UsageError("the power series model needs a big truncation set")
    out = TruncSeries.one(a.ring, N)
    for n in a.trunc:
        coeffs = [MultiPoly.zero(a.ring)] * (N + 1)
        coeffs[0] = MultiPoly.one(a.ring)
        if n <= N:
            coeffs[n] = -a.comps[n]
        out = out * TruncSeries(a.ring, coeffs)
    return out


def from_series(f: TruncSeries, N: int) -> WittVec:
    """Read Witt coordinates off a series with constant term 1."""
    if f.coeffs[0] != MultiPoly.one(f.ring):
        raise NonUnitConstantTerm(f"constant term is {f.coeffs[0]}")
    if f.precision < N:
        raise UsageError(f"series precision {f.precision} below requested length {N}")
    S = TruncationSet.big(N)
    g = f.truncate(N)
    comps = {}
    for n in range(1, N + 1):
        comps[n] = -g.coeffs[n]
        # strip the factor (1 - a_n t^n) by multiplying with its inverse
        g = g * geometric(f.ring, comps[n], n, N)
    return WittVec(S, f.ring, comps)


def counit(a: WittVec):
    """The coalgebra counit: the first component (= first ghost)."""
    if 1 not in a.trunc:
        raise TruncationMismatch("counit needs 1 in the truncation set")
    return a.comps[1]


def comult(a: WittVec, S: TruncationSet, T: TruncationSet) -> WittVec:
    """Comultiplication W_{S*T}(A) -> W_S(W_T(A)).

    The outer ghost components satisfy w_s(comult(a)) = F_s(a)|_T.
    """
    U = S.product(T)
    if a.trunc != U:
        raise TruncationMismatch(
            f"comultiplication needs the product truncation {U}, got {a.trunc}"
        )
    polys = comult_poly_map(S, T)
    env = {f"a{u}": a.comps[u] for u in a.trunc}
    rows = {}
    for s in S:
        col_polys = {t: polys[(s, t)] for t in T}
        rows[s] = a._apply_polys(col_polys, env, T)
    return WittVec(S, a.ring, rows)


def witt_int(c: int, S: TruncationSet, ring: CoeffRing) -> WittVec:
    """The image of the integer c in W_S (c-fold sum of the unit)."""
    unit = teichmuller(MultiPoly.one(ring), S, ring)
    acc = WittVec.zero(S, ring)
    negate = c < 0
    c = abs(c)
    base = unit
    while c:
        if c & 1:
            acc = acc + base
        c >>= 1
        if c:
            base = base + base
    return -acc if negate else acc


# ---------------------------------------------------------------------------
# the W2 pullback of length-2 p-typical Witt vectors


def w2_congruence_witness(p: int) -> dict:
    """Symbolic check that w_1 = w_0^p holds mod p on W_2."""
    S = TruncationSet.p_typical(p, 2)
    a = _sym_vec("a", S)
    g = ghost_map(a)
    diff = g.comps[p] - g.comps[1] ** p
    quotient = diff.div_int(p)  # exact by construction: w_1 - w_0^p = p * a_p
    modp = diff.convert_ring(CoeffRing.modular(p))
    return {
        "p": p,
        "difference": str(diff),
        "quotient_by_p": str(quotient),
        "vanishes_mod_p": modp.is_zero(),
    }


def w2_pullback_check(ring: CoeffRing, p: int, bound: int, gens=()) -> dict:
    """Verify W_2(A) -> {(u, v) : v = u^p mod p} is a bijection on a box.

    For p-torsion-free A the derived reduction is A/p and the inverse is
    (u, v) -> (u, (v - u^p) / p).  Integer boxes are checked exhaustively;
    a polynomial ring is checked on symbolic generators.
    """
    if ring.kind == MODULAR and ring.modulus % p == 0:
        raise TorsionDetected(f"Z/{ring.modulus} has {p}-torsion")
    if ring.kind not in ("Z",) and not gens:
        raise UsageError("the pullback box check runs over Z or a polynomial ring over Z")
    S = TruncationSet.p_typical(p, 2)
    report = {"p": p, "bound": bound, "congruence": w2_congruence_witness(p)}
    if gens:
        # symbolic spot check: (u, v) = (g, g^p + p h) round-trips
        u = MultiPoly.var(ZZ, gens[0])
        h = MultiPoly.var(ZZ, gens[-1] + "_h")
        v = u ** p + h * p
        vec = WittVec(S, ZZ, {1: u, p: (v - u ** p).div_int(p)})
        g = ghost_map(vec)
        report["symbolic_roundtrip"] = g.comps[1] == u and g.comps[p] == v
        report["status"] = "pass" if report["symbolic_roundtrip"] else "fail"
        return report
    accepted = 0
    rejected = 0
    seen = {}
    for u in range(-bound, bound + 1):
        for v in range(-bound, bound + 1):
            if (v - u ** p) % p:
                rejected += 1
                continue
            a1 = u
            ap = (v - u ** p) // p
            vec = WittVec(S, ring, {1: a1, p: ap})
            g = ghost_map(vec)
            got = (g.comps[1].constant_value(), g.comps[p].constant_value())
            if got != (u, v):
                return {"status": "fail", "witness": {"u": u, "v": v, "ghost": [str(x) for x in got]}}
            if got in seen:
                return {"status": "fail", "witness": {"collision": [u, v]}}
            seen[got] = (a1, ap)
            accepted += 1
    report.update({
        "status": "pass",
        "points_in_fibered_product": accepted,
        "points_rejected": rejected,
    })
    return report
