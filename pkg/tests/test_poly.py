import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambda_forge.errors import MixedCoefficientRings, NotDivisible
from lambda_forge.poly import MultiPoly, exact_div_int, poly_arith, poly_sum, random_poly
from lambda_forge.rings import QQ, ZZ, CoeffRing

MOD2 = CoeffRing.modular(2)
RINGS = [ZZ, QQ, CoeffRing.modular(4), CoeffRing.localized(3)]


def v(name, ring=ZZ):
    return MultiPoly.var(ring, name)


class TestSpecExamples:
    def test_additive_inverse(self):
        x = v("x")
        assert poly_arith("add", x, poly_arith("neg", x)) == MultiPoly.zero(ZZ)

    def test_difference_of_squares(self):
        x, y = v("x"), v("y")
        assert poly_arith("mul", x + y, x - y) == x ** 2 - y ** 2

    def test_freshman_dream_mod_2(self):
        x, y = v("x", MOD2), v("y", MOD2)
        assert poly_arith("pow", x + y, 2) == x ** 2 + y ** 2

    def test_exact_div_even(self):
        x = v("x")
        assert exact_div_int(x ** 2 * 2 + 4, 2) == x ** 2 + 2

    def test_exact_div_witness_is_leading_term(self):
        x = v("x")
        with pytest.raises(NotDivisible) as exc:
            exact_div_int(x ** 2 + x, 2)
        assert str(exc.value.witness) == "x^2"

    def test_exact_div_cube_correction(self):
        x, y = v("x"), v("y")
        assert exact_div_int((x + y) ** 3 - x ** 3 - y ** 3, 3) == x ** 2 * y + x * y ** 2

    def test_substitute_shift(self):
        x = v("x")
        assert (x ** 2).substitute({"x": x + 1}) == x ** 2 + x * 2 + 1

    def test_substitute_doubling_action(self):
        x1 = v("x1")
        assert x1.substitute({"x1": v("x2")}) == v("x2")

    def test_substitute_swap_symmetric(self):
        x, y = v("x"), v("y")
        assert (x + y).substitute({"x": y, "y": x}) == x + y


class TestCanonicalForm:
    def test_zero_terms_dropped(self):
        p = MultiPoly(ZZ, ("x",), {(1,): 1, (0,): 0})
        assert p == v("x")

    def test_unused_vars_pruned(self):
        p = MultiPoly(ZZ, ("x", "y"), {(1, 0): 1})
        assert p.vars == ("x",)

    def test_construction_order_irrelevant(self):
        a = v("x") + v("y") + 1
        b = 1 + v("y") + v("x")
        assert a == b and a.vars == b.vars and list(a.terms) == list(b.terms)

    def test_grlex_leading_term(self):
        p = v("x") * v("y") + v("x") ** 2 + v("y") ** 3
        exps, _ = p.leading_term()
        assert dict(zip(p.vars, exps)) == {"x": 0, "y": 3}

    def test_mixed_rings_rejected(self):
        with pytest.raises(MixedCoefficientRings):
            v("x") + v("x", QQ)

    def test_localized_denominator_guard(self):
        ring = CoeffRing.localized(3)
        MultiPoly.const(ring, Fraction(1, 2))  # fine: 2 is a unit in Z_(3)
        with pytest.raises(NotDivisible):
            MultiPoly.const(ring, Fraction(1, 3))


class TestRingAxioms:
    def test_two_hundred_random_triples_per_ring(self):
        rng = random.Random(20260810)
        for ring in RINGS:
            for _ in range(200):
                a = random_poly(rng, ring, ("x", "y"), 3, 2, 6)
                b = random_poly(rng, ring, ("x", "y"), 3, 2, 6)
                c = random_poly(rng, ring, ("x", "y"), 3, 2, 6)
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c
                assert a + b == b + a
                assert a * b == b * a

    def test_exact_div_roundtrip_hundred(self):
        rng = random.Random(42)
        for _ in range(100):
            q = random_poly(rng, ZZ, ("x", "y", "z"), 4, 3, 9)
            d = rng.choice([1, 2, 3, 5, 7, -4])
            assert exact_div_int(q * d, d) == q

    def test_substitute_is_homomorphism_hundred(self):
        rng = random.Random(7)
        for _ in range(100):
            a = random_poly(rng, ZZ, ("x", "y"), 3, 2, 5)
            b = random_poly(rng, ZZ, ("x", "y"), 3, 2, 5)
            c = random_poly(rng, ZZ, ("x", "y"), 3, 2, 5)
            image = {
                "x": random_poly(rng, ZZ, ("x", "y"), 2, 2, 3),
                "y": random_poly(rng, ZZ, ("x", "y"), 2, 2, 3),
            }
            lhs = (a * b + c).substitute(image)
            rhs = a.substitute(image) * b.substitute(image) + c.substitute(image)
            assert lhs == rhs


@st.composite
def small_polys(draw):
    n_terms = draw(st.integers(1, 4))
    terms = {}
    for _ in range(n_terms):
        exps = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        terms[exps] = terms.get(exps, 0) + draw(st.integers(-8, 8))
    return MultiPoly(ZZ, ("x", "y"), terms)


class TestHypothesisProperties:
    @settings(max_examples=60, deadline=None)
    @given(a=small_polys(), b=small_polys(), c=small_polys())
    def test_distributivity(self, a, b, c):
        assert a * (b + c) == a * b + a * c == (b + c) * a

    @settings(max_examples=60, deadline=None)
    @given(a=small_polys(), b=small_polys())
    def test_evaluation_respects_product(self, a, b):
        env = {"x": 3, "y": -2}
        assert (a * b).evaluate(env) == a.evaluate(env) * b.evaluate(env)


class TestJsonSchema:
    def test_documented_example(self):
        obj = {
            "vars": ["a0", "a1"],
            "ring": {"kind": "Z"},
            "terms": [{"coef": "-1", "exps": [1, 1]}],
        }
        p = MultiPoly.from_json(obj)
        assert p == -(v("a0") * v("a1"))

    def test_bit_exact_roundtrip(self):
        rng = random.Random(3)
        for ring in RINGS:
            for _ in range(25):
                p = random_poly(rng, ring, ("a0", "a1", "b0"), 4, 3, 99)
                blob = json.dumps(p.to_json(), sort_keys=True)
                again = MultiPoly.from_json(json.loads(blob))
                assert again == p
                assert json.dumps(again.to_json(), sort_keys=True) == blob

    def test_rational_coefficients_roundtrip(self):
        p = v("x", QQ) * Fraction(-7, 3) + Fraction(1, 2)
        assert MultiPoly.from_json(p.to_json()) == p


def test_poly_sum_matches_fold():
    rng = random.Random(11)
    parts = [random_poly(rng, ZZ, ("x", "y"), 3, 2, 4) for _ in range(6)]
    folded = MultiPoly.zero(ZZ)
    for part in parts:
        folded = folded + part
    assert poly_sum(ZZ, parts) == folded
