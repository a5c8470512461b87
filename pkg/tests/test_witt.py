import json
import random

import pytest

from lambda_forge.errors import (
    NotASubset,
    NotDivisible,
    TorsionDetected,
    TruncationMismatch,
    UsageError,
)
from lambda_forge.poly import MultiPoly, random_poly
from lambda_forge.rings import ZZ, CoeffRing
from lambda_forge.series import TruncSeries, series_ops
from lambda_forge.witt import (
    GhostVec,
    TruncationSet,
    WittVec,
    clear_memo,
    comult,
    counit,
    frobenius,
    from_series,
    ghost_inverse,
    ghost_map,
    restrict,
    structure_poly_map,
    structure_polys,
    teichmuller,
    to_series,
    verschiebung,
    w2_congruence_witness,
    w2_pullback_check,
    witt_int,
)


def var(name):
    return MultiPoly.var(ZZ, name)


def sym(trunc, prefix="a"):
    return WittVec(trunc, ZZ, {n: var(f"{prefix}{n}") for n in trunc})


BIG2 = TruncationSet.big(2)
P22 = TruncationSet.p_typical(2, 2)


class TestTruncationSet:
    def test_big_and_p_typical(self):
        assert TruncationSet.big(4).elems == (1, 2, 3, 4)
        assert TruncationSet.p_typical(3, 3).elems == (1, 3, 9)

    def test_division_stability_enforced(self):
        with pytest.raises(UsageError):
            TruncationSet((1, 4))

    def test_divide(self):
        assert TruncationSet.big(6).divide(2).elems == (1, 2, 3)
        assert TruncationSet.big(2).divide(3).elems == ()

    def test_product(self):
        assert BIG2.product(BIG2).elems == (1, 2, 4)

    def test_empty_is_allowed(self):
        empty = TruncationSet(())
        assert WittVec.zero(empty, ZZ).as_list() == []

    def test_json_roundtrip(self):
        for trunc in (TruncationSet.big(4), TruncationSet.p_typical(2, 3), TruncationSet((1, 2, 3, 6))):
            assert TruncationSet.from_json(trunc.to_json()) == trunc


class TestStructurePolys:
    def test_addition_length_two(self):
        polys = structure_polys("add", P22).polys
        assert str(polys[1]) == "a1 + b1"
        assert polys[2] == var("a2") + var("b2") - var("a1") * var("b1")

    def test_multiplication_length_two(self):
        polys = structure_polys("mul", P22).polys
        assert polys[1] == var("a1") * var("b1")
        assert polys[2] == var("a1") ** 2 * var("b2") + var("b1") ** 2 * var("a2") + var("a2") * var("b2") * 2

    def test_addition_p_three(self):
        polys = structure_polys("add", TruncationSet.p_typical(3, 2)).polys
        expected = var("a3") + var("b3") - var("a1") ** 2 * var("b1") - var("a1") * var("b1") ** 2
        assert polys[3] == expected

    def test_ghost_compatibility_invariant(self):
        S = TruncationSet.big(4)
        a, b = sym(S, "a"), sym(S, "b")
        for op in ("add", "mul"):
            combined = a + b if op == "add" else a * b
            ga, gb = ghost_map(a), ghost_map(b)
            for n in S:
                expect = ga.comps[n] + gb.comps[n] if op == "add" else ga.comps[n] * gb.comps[n]
                assert ghost_map(combined).comps[n] == expect


class TestGhost:
    def test_big_divisor_sum(self):
        S = TruncationSet((1, 2, 3, 6))
        g = ghost_map(sym(S))
        assert g.comps[6] == var("a1") ** 6 + var("a2") ** 3 * 2 + var("a3") ** 2 * 3 + var("a6") * 6

    def test_p_typical_specialization(self):
        g = ghost_map(sym(P22))
        assert g.comps[1] == var("a1")
        assert g.comps[2] == var("a1") ** 2 + var("a2") * 2

    def test_teichmuller_ghost(self):
        t = teichmuller(var("a"), TruncationSet.big(4))
        assert [str(c) for c in ghost_map(t).as_list()] == ["a", "a^2", "a^3", "a^4"]

    def test_ghost_inverse_example(self):
        g = GhostVec(P22, ZZ, {1: MultiPoly.const(ZZ, 2), 2: MultiPoly.const(ZZ, 2)})
        assert ghost_inverse(g) == WittVec.from_list(P22, ZZ, [2, -1])

    def test_ghost_inverse_zero(self):
        S = TruncationSet.big(3)
        g = GhostVec(S, ZZ, {n: MultiPoly.zero(ZZ) for n in S})
        assert ghost_inverse(g) == WittVec.zero(S, ZZ)

    def test_ghost_inverse_failure_certificate(self):
        g = GhostVec(BIG2, ZZ, {1: MultiPoly.const(ZZ, 1), 2: MultiPoly.const(ZZ, 2)})
        with pytest.raises(NotDivisible) as exc:
            ghost_inverse(g)
        assert exc.value.witness == 2

    def test_roundtrip(self):
        S = TruncationSet.big(4)
        a = sym(S)
        assert ghost_inverse(ghost_map(a)) == a


class TestArithmetic:
    def test_one_plus_one(self):
        one = WittVec.from_list(P22, ZZ, [1, 0])
        assert (one + one).as_list() == [MultiPoly.const(ZZ, 2), MultiPoly.const(ZZ, -1)]

    def test_additive_identity(self):
        S = TruncationSet.big(3)
        a = sym(S)
        assert a + WittVec.zero(S, ZZ) == a

    def test_teichmuller_sum_big2(self):
        ta = teichmuller(var("a"), BIG2)
        tb = teichmuller(var("b"), BIG2)
        assert (ta + tb).as_list() == [var("a") + var("b"), -(var("a") * var("b"))]

    def test_neg_certified_by_ghost(self):
        S = TruncationSet.big(4)
        a = sym(S)
        g = ghost_map(-a)
        ga = ghost_map(a)
        assert all(g.comps[n] == -ga.comps[n] for n in S)

    def test_truncation_mismatch(self):
        with pytest.raises(TruncationMismatch):
            sym(BIG2) + sym(TruncationSet.big(3))

    def test_integer_embedding(self):
        assert witt_int(3, P22, ZZ) == witt_int(1, P22, ZZ) + witt_int(2, P22, ZZ)
        assert witt_int(-2, P22, ZZ) + witt_int(2, P22, ZZ) == WittVec.zero(P22, ZZ)


class TestTeichmuller:
    def test_unit(self):
        S = TruncationSet.big(3)
        one = teichmuller(MultiPoly.one(ZZ), S)
        a = sym(S)
        assert one * a == a

    def test_multiplicative_on_big3(self):
        S = TruncationSet.big(3)
        ta, tb = teichmuller(var("a"), S), teichmuller(var("b"), S)
        assert ta * tb == teichmuller(var("a") * var("b"), S)


class TestFrobenius:
    def test_length_two_collapse(self):
        a = sym(P22)
        fa = frobenius(2, a)
        assert fa.trunc.elems == (1,)
        assert fa.comps[1] == var("a1") ** 2 + var("a2") * 2

    def test_on_teichmuller(self):
        S = TruncationSet.big(6)
        t = teichmuller(var("a"), S)
        for n in (2, 3):
            assert frobenius(n, t) == teichmuller(var("a") ** n, S.divide(n))

    def test_identity(self):
        a = sym(TruncationSet.big(4))
        assert frobenius(1, a) == a

    def test_empty_quotient_truncation(self):
        fa = frobenius(5, sym(BIG2))
        assert fa.trunc.elems == () and fa.as_list() == []

    def test_ring_homomorphism_big4(self):
        S = TruncationSet.big(4)
        a, b = sym(S, "a"), sym(S, "b")
        for n in (2, 3):
            assert frobenius(n, a + b) == frobenius(n, a) + frobenius(n, b)
            assert frobenius(n, a * b) == frobenius(n, a) * frobenius(n, b)

    def test_ghost_characterization(self):
        S = TruncationSet.big(6)
        a = sym(S)
        ga = ghost_map(a)
        for n in (2, 3):
            gf = ghost_map(frobenius(n, a))
            assert all(gf.comps[d] == ga.comps[n * d] for d in S.divide(n))


class TestVerschiebung:
    def test_shift(self):
        S = TruncationSet.p_typical(2, 3)
        a = sym(TruncationSet.p_typical(2, 2))
        assert verschiebung(2, a, S).as_list() == [MultiPoly.zero(ZZ), var("a1"), var("a2")]

    def test_zero(self):
        S = TruncationSet.big(4)
        z = WittVec.zero(S.divide(2), ZZ)
        assert verschiebung(2, z, S) == WittVec.zero(S, ZZ)

    def test_additive_big4(self):
        S = TruncationSet.big(4)
        a, b = sym(S.divide(2), "a"), sym(S.divide(2), "b")
        assert verschiebung(2, a + b, S) == verschiebung(2, a, S) + verschiebung(2, b, S)

    def test_fv_is_multiplication_by_n_big2(self):
        for n in (2, 3):
            S = TruncationSet.big(2)
            source = S.divide(n)
            a = sym(source)
            composite = frobenius(n, verschiebung(n, a, S))
            n_fold = WittVec.zero(source, ZZ)
            for _ in range(n):
                n_fold = n_fold + a
            assert composite == n_fold

    def test_projection_formula_big2(self):
        S = TruncationSet.big(2)
        a = sym(S, "a")
        b = sym(S.divide(2), "b")
        lhs = a * verschiebung(2, b, S)
        rhs = verschiebung(2, frobenius(2, a) * b, S)
        assert lhs == rhs

    def test_source_mismatch(self):
        with pytest.raises(TruncationMismatch):
            verschiebung(2, sym(BIG2), TruncationSet.big(3))

    def test_composition_laws(self):
        S = TruncationSet.big(8)
        a = sym(S)
        assert frobenius(2, frobenius(2, a)) == frobenius(4, a)
        b = sym(S.divide(4))
        assert verschiebung(2, verschiebung(2, b, S.divide(2)), S) == verschiebung(4, b, S)

    def test_coprime_frobenius_verschiebung_commute(self):
        S = TruncationSet.big(6)
        b = sym(S.divide(3))
        lhs = frobenius(2, verschiebung(3, b, S))
        rhs = verschiebung(3, frobenius(2, b), S.divide(2))
        assert lhs == rhs


class TestRestrict:
    def test_drop_components(self):
        a = sym(TruncationSet.big(3))
        assert restrict(a, BIG2).as_list() == [var("a1"), var("a2")]

    def test_commutes_with_addition(self):
        S, T = TruncationSet.big(3), BIG2
        a, b = sym(S, "a"), sym(S, "b")
        assert restrict(a + b, T) == restrict(a, T) + restrict(b, T)

    def test_restriction_to_length_one_is_first_component(self):
        a = sym(TruncationSet.big(3))
        assert restrict(a, TruncationSet.big(1)).as_list() == [var("a1")]

    def test_functoriality(self):
        a = sym(TruncationSet.big(4))
        direct = restrict(a, BIG2)
        staged = restrict(restrict(a, TruncationSet.big(3)), BIG2)
        assert direct == staged

    def test_not_a_subset(self):
        with pytest.raises(NotASubset):
            restrict(sym(BIG2), TruncationSet.big(3))


class TestSeriesModel:
    def test_teichmuller_series(self):
        t = teichmuller(var("a"), TruncationSet.big(3))
        f = to_series(t)
        assert f == TruncSeries(ZZ, [MultiPoly.one(ZZ), -var("a"), MultiPoly.zero(ZZ), MultiPoly.zero(ZZ)])

    def test_from_series_product_of_factors(self):
        a, b = var("a"), var("b")
        f = TruncSeries(ZZ, [MultiPoly.one(ZZ), -(a + b), a * b])
        assert from_series(f, 2).as_list() == [a + b, -(a * b)]

    def test_zero_maps_to_one(self):
        z = WittVec.zero(TruncationSet.big(3), ZZ)
        assert to_series(z) == TruncSeries.one(ZZ, 3)

    def test_roundtrip_precision_four(self):
        S = TruncationSet.big(4)
        a = sym(S)
        assert from_series(to_series(a), 4) == a

    def test_addition_is_series_multiplication(self):
        S = TruncationSet.big(4)
        a, b = sym(S, "a"), sym(S, "b")
        assert to_series(a + b) == to_series(a) * to_series(b)

    def test_log_derivative_reads_ghosts(self):
        S = TruncationSet.big(4)
        a = sym(S)
        g = ghost_map(a)
        logd = series_ops("log_derivative", to_series(a))
        expected = TruncSeries(ZZ, [MultiPoly.zero(ZZ)] + [g.comps[n] for n in S])
        assert logd == expected


class TestComonad:
    def test_counit_of_teichmuller(self):
        assert counit(teichmuller(var("a"), TruncationSet.big(3))) == var("a")

    def test_comult_of_teichmuller_is_nested_teichmuller(self):
        S = T = BIG2
        t = teichmuller(var("a"), S.product(T))
        d = comult(t, S, T)
        assert d.comps[1] == teichmuller(var("a"), T)
        assert d.comps[2] == WittVec.zero(T, ZZ)

    def test_counit_laws(self):
        S = T = BIG2
        a = sym(S.product(T))
        d = comult(a, S, T)
        assert counit(d) == restrict(a, T)
        inner = WittVec(S, ZZ, {s: counit(d.comps[s]) for s in S})
        assert inner == restrict(a, S)

    def test_ghost_characterization(self):
        S = T = BIG2
        a = sym(S.product(T))
        d = comult(a, S, T)
        assert d.comps[1] == restrict(frobenius(1, a), T)
        two = witt_int(2, T, ZZ)
        w2 = d.comps[1] * d.comps[1] + two * d.comps[2]
        assert w2 == restrict(frobenius(2, a), T)

    def test_coassociativity(self):
        S = T = V = BIG2
        a = sym(TruncationSet((1, 2, 4, 8)))
        route1 = comult(comult(a, S.product(T), V), S, T)
        mid = comult(a, S, T.product(V))
        route2 = WittVec(S, ZZ, {s: comult(mid.comps[s], T, V) for s in S})
        assert route1 == route2

    def test_requires_product_truncation(self):
        with pytest.raises(TruncationMismatch):
            comult(sym(TruncationSet.big(3)), BIG2, BIG2)


class TestW2Pullback:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_symbolic_congruence(self, p):
        wit = w2_congruence_witness(p)
        assert wit["vanishes_mod_p"]

    def test_box_bijection(self):
        report = w2_pullback_check(ZZ, 2, 5)
        assert report["status"] == "pass"
        assert report["points_in_fibered_product"] + report["points_rejected"] == 11 * 11

    def test_inverse_formula_example(self):
        g = GhostVec(P22, ZZ, {1: MultiPoly.const(ZZ, 3), 2: MultiPoly.const(ZZ, 1)})
        assert ghost_inverse(g) == WittVec.from_list(P22, ZZ, [3, -4])

    def test_noncongruent_pair_rejected(self):
        g = GhostVec(P22, ZZ, {1: MultiPoly.const(ZZ, 0), 2: MultiPoly.const(ZZ, 1)})
        with pytest.raises(NotDivisible):
            ghost_inverse(g)

    def test_torsion_detected(self):
        with pytest.raises(TorsionDetected):
            w2_pullback_check(CoeffRing.modular(4), 2, 3)

    def test_symbolic_ring_mode(self):
        report = w2_pullback_check(ZZ, 3, 0, gens=("u",))
        assert report["status"] == "pass"


def test_naturality_under_substitution():
    rng = random.Random(5)
    S = TruncationSet.big(4)
    for _ in range(10):
        comps = {n: random_poly(rng, ZZ, ("s", "t"), 3, 2, 5) for n in S}
        vec = WittVec(S, ZZ, comps)
        image = {"s": random_poly(rng, ZZ, ("s", "t"), 2, 2, 3)}
        mapped = WittVec(S, ZZ, {n: comps[n].substitute(image) for n in S})
        lhs = ghost_map(mapped)
        rhs = GhostVec(S, ZZ, {n: ghost_map(vec).comps[n].substitute(image) for n in S})
        assert lhs == rhs


def test_wittvec_json_roundtrip():
    a = sym(TruncationSet.p_typical(2, 3))
    blob = json.dumps(a.to_json(), sort_keys=True)
    again = WittVec.from_json(json.loads(blob))
    assert again == a
    assert json.dumps(again.to_json(), sort_keys=True) == blob


def test_disk_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("LAMBDA_FORGE_CACHE_DIR", str(tmp_path))
    clear_memo()
    first = structure_poly_map("mul", TruncationSet.big(3))
    files = list(tmp_path.iterdir())
    assert any("structure_mul" in f.name for f in files)
    clear_memo()
    second = structure_poly_map("mul", TruncationSet.big(3))
    assert first == second
    clear_memo()


def test_memo_used_without_cache_dir(monkeypatch):
    monkeypatch.delenv("LAMBDA_FORGE_CACHE_DIR", raising=False)
    clear_memo()
    a = structure_poly_map("add", TruncationSet.big(2))
    b = structure_poly_map("add", TruncationSet.big(2))
    assert a is b


def test_memo_concurrent_reads_single_insert(monkeypatch):
    # duplicate computation is permitted but every caller must see one entry
    import threading

    monkeypatch.delenv("LAMBDA_FORGE_CACHE_DIR", raising=False)
    clear_memo()
    S = TruncationSet.big(5)
    results = []

    def worker():
        results.append(structure_poly_map("mul", S))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r is results[0] for r in results)


def test_ghostvec_json_roundtrip():
    g = ghost_map(sym(TruncationSet.big(3)))
    assert GhostVec.from_json(json.loads(json.dumps(g.to_json()))) == g


def test_ghost_is_ring_map_on_random_integer_vectors():
    rng = random.Random(17)
    S = TruncationSet.big(6)
    for _ in range(40):
        a = WittVec.from_list(S, ZZ, [rng.randint(-9, 9) for _ in S])
        b = WittVec.from_list(S, ZZ, [rng.randint(-9, 9) for _ in S])
        ga, gb = ghost_map(a), ghost_map(b)
        gsum = ghost_map(a + b)
        gprod = ghost_map(a * b)
        for n in S:
            assert gsum.comps[n] == ga.comps[n] + gb.comps[n]
            assert gprod.comps[n] == ga.comps[n] * gb.comps[n]


def test_structure_polys_scale_smoke():
    # the sparse kernel must survive the combinatorial growth of deep sets
    polys = structure_poly_map("add", TruncationSet.p_typical(2, 5))
    assert max(len(p.terms) for p in polys.values()) > 300
    polys = structure_poly_map("mul", TruncationSet.big(12))
    assert len(polys) == 12
