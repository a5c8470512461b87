"""Textual input grammar for the CLI.

Polynomials: integer coefficients, `^` powers, `*` products, parentheses,
variable names matching [A-Za-z][A-Za-z0-9_]*, and `X(2,3)` sugar for
lambda-basis generators (the empty sequence is `X()` or `X0`).  Witt
vectors are bracketed, comma-separated component lists.  Truncation sets
are `big:N` or `p:P,K`.
"""

from __future__ import annotations

import re

from .errors import UsageError
from .poly import MultiPoly
from .rings import CoeffRing, ZZ
from .witt import TruncationSet

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z][A-Za-z0-9_]*|\*\*|[-+*^(),])")


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UsageError(f"cannot tokenize {text[pos:]!r}")
        tok = m.group(1)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


def sigma_var_name(parts) -> str:
    parts = tuple(int(p) for p in parts)
    if not parts:
        return "X0"
    return "X" + "_".join(str(p) for p in parts)


class _Parser:
    def __init__(self, tokens, ring: CoeffRing):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise UsageError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise UsageError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def parse(self) -> MultiPoly:
        value = self.expr()
        if self.peek() is not None:
            raise UsageError(f"trailing input at {self.peek()!r}")
        return value

    def expr(self) -> MultiPoly:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> MultiPoly:
        value = self.factor()
        while self.peek() == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self) -> MultiPoly:
        value = self.atom()
        while self.peek() == "^":
            self.take()
            exp = self.take()
            if not exp.isdigit():
                raise UsageError(f"exponent must be a nonnegative integer, found {exp!r}")
            value = value ** int(exp)
        return value

    def atom(self) -> MultiPoly:
        tok = self.peek()
        if tok == "-":
            self.take()
            return -self.atom()
        if tok == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        tok = self.take()
        if tok.isdigit():
            return MultiPoly.const(self.ring, int(tok))
        if re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok):
            if tok == "X" and self.peek() == "(":
                self.take()
                parts = []
                while self.peek() != ")":
                    num = self.take()
                    if not num.isdigit():
                        raise UsageError(f"X(...) takes primes, found {num!r}")
                    parts.append(int(num))
                    if self.peek() == ",":
                        self.take()
                self.take(")")
                return MultiPoly.var(self.ring, sigma_var_name(parts))
            return MultiPoly.var(self.ring, tok)
        raise UsageError(f"unexpected token {tok!r}")


def parse_poly(text: str, ring: CoeffRing = ZZ) -> MultiPoly:
    return _Parser(_tokenize(text), ring).parse()


def parse_vector(text: str, ring: CoeffRing = ZZ) -> list:
    """A bracketed, comma-separated list of polynomial expressions."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise UsageError("vectors are written [c1, c2, ...]")
    inner = text[1:-1].strip()
    if not inner:
        return []
    depth = 0
    parts = []
    current = []
    for ch in inner:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [parse_poly(p, ring) for p in parts]


def parse_trunc(spec: str) -> TruncationSet:
    """Grammar: big:N | p:P,K."""
    spec = spec.strip()
    if spec.startswith("big:"):
        n = int(spec[4:])
        if n < 0:
            raise UsageError("big:N needs N >= 0")
        return TruncationSet.big(n)
    if spec.startswith("p:"):
        body = spec[2:]
        try:
            p, k = (int(x) for x in body.split(","))
        except ValueError:
            raise UsageError("p-typical truncations are written p:P,K") from None
        return TruncationSet.p_typical(p, k)
    raise UsageError(f"cannot parse truncation {spec!r} (use big:N or p:P,K)")


def parse_ring_spec(spec: str):
    """'Z' or 'Z[u,v]' -> (CoeffRing, generator names)."""
    spec = spec.replace(" ", "")
    if spec == "Z":
        return ZZ, ()
    m = re.fullmatch(r"Z\[([A-Za-z][A-Za-z0-9_]*(?:,[A-Za-z][A-Za-z0-9_]*)*)\]", spec)
    if not m:
        raise UsageError(f"cannot parse ring {spec!r} (use Z or Z[u,v])")
    return ZZ, tuple(m.group(1).split(","))


def parse_phi_spec(spec: str, gens) -> dict:
    """'id' or 'u->u^2;v->v^3' -> substitution on the generators."""
    spec = spec.strip()
    if spec == "id":
        return {g: MultiPoly.var(ZZ, g) for g in gens}
    out = {}
    for part in spec.split(";"):
        if "->" not in part:
            raise UsageError(f"phi clauses are written gen->expr, found {part!r}")
        name, body = part.split("->", 1)
        name = name.strip()
        if name not in gens:
            raise UsageError(f"{name!r} is not a generator of the ring")
        out[name] = parse_poly(body, ZZ)
    missing = [g for g in gens if g not in out]
    if missing:
        raise UsageError(f"phi not specified on generator {missing[0]!r}")
    return out


def parse_primes(spec: str):
    try:
        return tuple(sorted({int(p) for p in spec.split(",")}))
    except ValueError:
        raise UsageError(f"cannot parse prime list {spec!r}") from None
