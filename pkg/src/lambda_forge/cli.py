"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 domain error (NotDivisible,
NotAFrobeniusLift, ...), 3 verification failure.  Output is deterministic
for a fixed argv and seed: JSON is emitted with sorted keys and text
renderings iterate canonical orders only.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abelian import parse_group
from .delta import (
    Witt2Section,
    delta_extend,
    delta_from_phi,
    delta_on_integers,
    free_delta_ring,
)
from .errors import DomainError, UsageError
from .lambdaring import (
    AdamsModel,
    coaction,
    free_lambda_ring,
    newton_psi_to_lambda,
    wilkerson_lambda,
)
from .poly import MultiPoly
from .rings import QQ, ZZ
from .textparse import (
    parse_phi_spec,
    parse_poly,
    parse_primes,
    parse_ring_spec,
    parse_trunc,
    parse_vector,
)
from .verify import SUITES, run_suite
from .witt import (
    TruncationSet,
    WittVec,
    comult,
    counit,
    frobenius,
    from_series,
    ghost_inverse,
    ghost_map,
    GhostVec,
    restrict,
    structure_poly_map,
    to_series,
    verschiebung,
    w2_pullback_check,
    witt_arith,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None)
    top = _Parser(prog="lambda-forge", description=__doc__, parents=[common])
    sub = top.add_subparsers(dest="command", required=True)

    def add(parent, name):
        return parent.add_parser(name, parents=[common])

    witt = sub.add_parser("witt", help="Witt vector computations")
    wsub = witt.add_subparsers(dest="subcommand", required=True)

    def trunc_flags(p, input_flag=True):
        p.add_argument("--trunc", help="truncation set, big:N or p:P,K")
        p.add_argument("--p", type=int, help="p-typical prime")
        p.add_argument("--len", type=int, dest="length", help="p-typical length")
        if input_flag:
            p.add_argument("--input", help="component list, e.g. '[a,0,0,0]'")

    w_ghost = add(wsub, "ghost")
    trunc_flags(w_ghost)
    w_ginv = add(wsub, "ghost-inv")
    trunc_flags(w_ginv)
    w_struct = add(wsub, "structure")
    trunc_flags(w_struct, input_flag=False)
    w_struct.add_argument("--op", choices=("add", "mul", "neg"), required=True)
    for name in ("add", "mul"):
        w_bin = add(wsub, name)
        trunc_flags(w_bin, input_flag=False)
        w_bin.add_argument("--a", required=True)
        w_bin.add_argument("--b", required=True)
    w_frob = add(wsub, "frobenius")
    trunc_flags(w_frob)
    w_frob.add_argument("--n", type=int, required=True)
    w_ver = add(wsub, "verschiebung")
    trunc_flags(w_ver)
    w_ver.add_argument("--n", type=int, required=True)
    w_res = add(wsub, "restrict")
    trunc_flags(w_res)
    w_res.add_argument("--to", required=True, help="target truncation")
    w_ser = add(wsub, "series")
    trunc_flags(w_ser)
    w_ser.add_argument("--dir", choices=("to", "from"), default="to")
    w_ser.add_argument("--coeffs", help="series coefficients for --dir from, e.g. '[1,-a,0]'")
    w_com = add(wsub, "comonad")
    w_com.add_argument("--op", choices=("counit", "comult"), required=True)
    w_com.add_argument("--outer", help="outer truncation for comult")
    w_com.add_argument("--inner", help="inner truncation for comult")
    trunc_flags(w_com)
    w_w2 = add(wsub, "w2-check")
    w_w2.add_argument("--p", type=int, required=True)
    w_w2.add_argument("--bound", type=int, default=5)
    w_w2.add_argument("--ring", default="Z")

    delta = sub.add_parser("delta", help="delta-ring computations")
    dsub = delta.add_subparsers(dest="subcommand", required=True)
    d_ext = add(dsub, "extend")
    d_ext.add_argument("--p", type=int, required=True)
    d_ext.add_argument("--depth", type=int, default=3)
    d_ext.add_argument("--expr", required=True)
    d_phi = add(dsub, "phi")
    d_phi.add_argument("--p", type=int, required=True)
    d_phi.add_argument("--depth", type=int, default=3)
    d_phi.add_argument("--expr", required=True)
    d_from = add(dsub, "from-phi")
    d_from.add_argument("--p", type=int, required=True)
    d_from.add_argument("--ring", required=True)
    d_from.add_argument("--phi", required=True)
    d_from.add_argument("--eval", dest="eval_at", type=int)
    d_free = add(dsub, "free")
    d_free.add_argument("--p", type=int, required=True)
    d_free.add_argument("--depth", type=int, required=True)
    d_free.add_argument("--show", choices=("phi", "delta"), default="phi")
    d_sec = add(dsub, "section")
    d_sec.add_argument("--p", type=int, required=True)
    d_sec.add_argument("--ring", default="Z")
    d_sec.add_argument("--eval", dest="eval_at", type=int)
    d_sec.add_argument("--expr")
    d_sec.add_argument("--depth", type=int, default=3)

    lam = sub.add_parser("lambda", help="lambda-ring computations")
    lsub = lam.add_subparsers(dest="subcommand", required=True)
    l_free = add(lsub, "free")
    l_free.add_argument("--primes", required=True)
    l_free.add_argument("--depth", type=int, required=True)
    l_free.add_argument("--show", help="basis element, e.g. 'X(2)' (default: all)")
    l_adams = add(lsub, "adams")
    l_adams.add_argument("--N", type=int, default=12)
    l_adams.add_argument("--m", type=int, required=True)
    l_adams.add_argument("--expr", required=True)
    l_newton = add(lsub, "newton")
    l_newton.add_argument("--psi", default="id")
    l_newton.add_argument("--K", type=int, required=True)
    l_newton.add_argument("--eval", dest="eval_at", type=int, required=True)
    l_wilk = add(lsub, "wilkerson")
    l_wilk.add_argument("--ring", required=True)
    l_wilk.add_argument("--phi", action="append", default=[], help="'p:gen->expr;...' per prime")
    l_wilk.add_argument("--K", type=int, default=2)
    l_wilk.add_argument("--eval-gen", help="generator to expand lambda on")
    l_wilk.add_argument("--eval", dest="eval_at", type=int)
    l_tox = add(lsub, "to-x-basis")
    l_tox.add_argument("--primes", required=True)
    l_tox.add_argument("--depth", type=int, required=True)
    l_tox.add_argument("--expr", required=True)
    l_coa = add(lsub, "coaction")
    l_coa.add_argument("--ring", default="Z")
    l_coa.add_argument("--psi", default="id")
    l_coa.add_argument("--trunc", required=True)
    l_coa.add_argument("--eval", dest="eval_at", type=int, required=True)

    ver = sub.add_parser("verify", help="verification suites", parents=[common])
    ver.add_argument("suite", choices=SUITES + ("all",))
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--primes")
    ver.add_argument("--depth", type=int)
    ver.add_argument("--group")
    ver.add_argument(
        "--corrupt",
        action="store_true",
        help="feed joyal-rezk a corrupted Adams family (expected to fail)",
    )
    return top


def _get_trunc(args) -> TruncationSet:
    if args.trunc:
        return parse_trunc(args.trunc)
    if args.p is not None and args.length is not None:
        return TruncationSet.p_typical(args.p, args.length)
    raise UsageError("give --trunc big:N|p:P,K or --p P --len K")


def _vec(args, trunc: TruncationSet) -> WittVec:
    if not getattr(args, "input", None):
        raise UsageError("--input is required")
    comps = parse_vector(args.input, ZZ)
    if len(comps) != len(trunc):
        raise UsageError(
            f"--input has {len(comps)} components, the truncation set has {len(trunc)}"
        )
    return WittVec.from_list(trunc, ZZ, comps)


def _poly_list(values) -> list:
    return [str(v) for v in values]


def _run_witt(args):
    sc = args.subcommand
    if sc == "w2-check":
        ring, gens = parse_ring_spec(args.ring)
        return w2_pullback_check(ring, args.p, args.bound, gens)
    if sc == "structure":
        trunc = _get_trunc(args)
        polys = structure_poly_map(args.op, trunc)
        return {
            "op": args.op,
            "trunc": trunc.to_json(),
            "polys": {str(n): str(polys[n]) for n in trunc},
            "polys_json": {str(n): polys[n].to_json() for n in trunc},
        }
    if sc == "comonad":
        if args.op == "counit":
            trunc = _get_trunc(args)
            return {"counit": str(counit(_vec(args, trunc)))}
        if not args.outer or not args.inner:
            raise UsageError("comult needs --outer and --inner truncations")
        S = parse_trunc(args.outer)
        T = parse_trunc(args.inner)
        U = S.product(T)
        vec = _vec(args, U)
        result = comult(vec, S, T)
        return {
            "outer": S.to_json(),
            "inner": T.to_json(),
            "components": {
                str(s): _poly_list(result.comps[s].as_list()) for s in S
            },
        }
    trunc = _get_trunc(args)
    if sc == "ghost":
        g = ghost_map(_vec(args, trunc))
        return {"ghost": _poly_list(g.as_list()), "ghost_json": g.to_json()}
    if sc == "ghost-inv":
        if not args.input:
            raise UsageError("--input is required")
        values = parse_vector(args.input, ZZ)
        if len(values) != len(trunc):
            raise UsageError(
                f"{len(values)} ghost components for a truncation set of size {len(trunc)}"
            )
        g = GhostVec(trunc, ZZ, dict(zip(trunc.elems, values)))
        vec = ghost_inverse(g)
        return {"witt": _poly_list(vec.as_list()), "witt_json": vec.to_json()}
    if sc in ("add", "mul"):
        a = WittVec.from_list(trunc, ZZ, parse_vector(args.a, ZZ))
        b = WittVec.from_list(trunc, ZZ, parse_vector(args.b, ZZ))
        vec = witt_arith(sc, a, b)
        return {sc: _poly_list(vec.as_list()), "witt_json": vec.to_json()}
    if sc == "frobenius":
        result = frobenius(args.n, _vec(args, trunc))
        return {
            "trunc": result.trunc.to_json(),
            "frobenius": _poly_list(result.as_list()),
            "witt_json": result.to_json(),
        }
    if sc == "verschiebung":
        source = trunc.divide(args.n)
        vec = WittVec.from_list(source, ZZ, parse_vector(args.input, ZZ))
        return {"verschiebung": _poly_list(verschiebung(args.n, vec, trunc).as_list())}
    if sc == "restrict":
        target = parse_trunc(args.to)
        return {"restrict": _poly_list(restrict(_vec(args, trunc), target).as_list())}
    if sc == "series":
        if args.dir == "to":
            return {"series": str(to_series(_vec(args, trunc)))}
        if not args.coeffs:
            raise UsageError("--dir from needs --coeffs '[1, c1, ...]'")
        coeffs = parse_vector(args.coeffs, ZZ)
        from .series import TruncSeries

        n = trunc._big_n()
        if n is None:
            raise UsageError("the series model needs a big truncation")
        f = TruncSeries(ZZ, coeffs)
        return {"witt": _poly_list(from_series(f, n).as_list())}
    raise UsageError(f"unknown witt subcommand {sc!r}")


def _run_delta(args):
    sc = args.subcommand
    if sc in ("extend", "phi"):
        pres = free_delta_ring(args.p, args.depth)
        e = parse_poly(args.expr, ZZ)
        if sc == "extend":
            return {"delta": str(delta_extend(pres, e))}
        return {"phi": str(pres.phi(e))}
    if sc == "from-phi":
        ring, gens = parse_ring_spec(args.ring)
        phi = parse_phi_spec(args.phi, gens)
        pres = delta_from_phi(args.p, gens, phi)
        out = {"delta_on_gens": {g: str(v) for g, v in sorted(pres.delta_on_gens.items())}}
        if args.eval_at is not None:
            out["value"] = str(delta_on_integers(args.p, args.eval_at))
        return out
    if sc == "free":
        pres = free_delta_ring(args.p, args.depth)
        if args.show == "phi":
            return {"phi": {g: str(v) for g, v in sorted(pres.phi_on_gens().items())}}
        return {"delta": {g: str(v) for g, v in sorted(pres.delta_on_gens.items())}}
    if sc == "section":
        parse_ring_spec(args.ring)
        if args.expr is not None:
            # expression in the free delta-ring generators x0..x<depth>
            section = Witt2Section(free_delta_ring(args.p, args.depth))
            vec = section(parse_poly(args.expr, ZZ))
        elif args.eval_at is not None:
            n = args.eval_at
            trunc = TruncationSet.p_typical(args.p, 2)
            vec = WittVec.from_list(trunc, ZZ, [n, delta_on_integers(args.p, n)])
        else:
            raise UsageError("section needs --eval N (over Z) or --expr (free delta-ring)")
        return {"section": _poly_list(vec.as_list())}
    raise UsageError(f"unknown delta subcommand {sc!r}")


def _run_lambda(args):
    sc = args.subcommand
    if sc == "free":
        basis = free_lambda_ring(parse_primes(args.primes), args.depth)
        if args.show:
            e = parse_poly(args.show, QQ)
            if not (len(e.vars) == 1 and len(e.terms) == 1):
                raise UsageError("--show takes a single basis element like 'X(2)'")
            name = e.vars[0]
            match = [s for s, nm in basis.names.items() if nm == name]
            if not match:
                raise UsageError(f"{args.show!r} is not in the basis")
            return {"element": name, "embedding": str(basis.embed[match[0]])}
        return {
            "basis": {
                basis.names[s]: str(basis.embed[s]) for s in basis.sigmas
            }
        }
    if sc == "adams":
        model = AdamsModel(args.N)
        return {"result": str(model.psi(args.m, parse_poly(args.expr, QQ)))}
    if sc == "newton":
        if args.psi != "id":
            raise UsageError("newton --psi currently supports 'id'")
        psis = [MultiPoly.const(ZZ, args.eval_at)] * args.K
        lams = newton_psi_to_lambda(psis)
        return {"lambda": [str(v.constant_value()) for v in lams]}
    if sc == "wilkerson":
        ring, gens = parse_ring_spec(args.ring)
        family = {}
        for clause in args.phi:
            if ":" not in clause:
                raise UsageError("--phi clauses look like '2:u->u^2'")
            p, body = clause.split(":", 1)
            family[int(p)] = parse_phi_spec(body, gens)
        ops = (
            wilkerson_lambda(gens, "identity", args.K)
            if not family
            else wilkerson_lambda(gens, family, args.K)
        )
        if args.eval_gen:
            values = ops.lambda_values(MultiPoly.var(ZZ, args.eval_gen))
            return {"lambda": _poly_list(values)}
        if args.eval_at is not None:
            values = ops.lambda_values(MultiPoly.const(ZZ, args.eval_at))
            return {"lambda": [str(v.constant_value()) for v in values]}
        return {"lambda_on_gens": {g: _poly_list(v) for g, v in ops.lambda_on_gens.items()}}
    if sc == "to-x-basis":
        basis = free_lambda_ring(parse_primes(args.primes), args.depth)
        xp, integral = basis.to_x_basis(parse_poly(args.expr, QQ))
        return {"x_basis": str(xp), "integral": integral}
    if sc == "coaction":
        if args.psi != "id":
            raise UsageError("coaction --psi currently supports 'id'")
        ring, gens = parse_ring_spec(args.ring)
        trunc = parse_trunc(args.trunc)
        e = MultiPoly.const(ZZ, args.eval_at)
        vec = coaction(lambda n, x: x, e, trunc, ZZ)
        return {"coaction": _poly_list(vec.as_list()), "witt_json": vec.to_json()}
    raise UsageError(f"unknown lambda subcommand {sc!r}")


def _run_verify(args):
    if args.seed < 0:
        raise UsageError("--seed must be nonnegative")
    if args.suite == "joyal-rezk" and args.corrupt:
        from .lambdaring import verify_joyal_rezk
        from .poly import MultiPoly as _P

        basis = free_lambda_ring((2, 3), 1, N=30)
        corrupted = {
            3: {f"x{n}": _P.var(QQ, f"x{3 * n}") + _P.var(QQ, f"x{n}") for n in range(1, 11)}
        }
        reports = [verify_joyal_rezk(basis, 1, psi_overrides=corrupted)]
    elif args.suite == "joyal-rezk" and args.primes:
        from .verify import joyal_rezk_suite

        reports = [joyal_rezk_suite(args.seed, parse_primes(args.primes), args.depth or 2)]
    elif args.suite == "fracture" and args.group:
        from .abelian import fracture_check

        reports = [fracture_check(parse_group(args.group))]
    else:
        reports = run_suite(args.suite, args.seed)
    status = all(r.get("status") == "pass" for r in reports)
    return {"seed": args.seed, "reports": reports, "status": "pass" if status else "fail"}, status


def _render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=1)
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in value:
                if k.endswith("_json"):
                    continue
                walk(f"{prefix}{k}.", value[k])
        elif isinstance(value, list):
            rendered = ", ".join(str(v) for v in value) if all(
                not isinstance(v, (dict, list)) for v in value
            ) else None
            if rendered is not None:
                lines.append(f"{prefix[:-1]}: [{rendered}]")
            else:
                for i, v in enumerate(value):
                    walk(f"{prefix}{i}.", v)
        else:
            lines.append(f"{prefix[:-1]}: {value}")

    walk("", payload)
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    parser = _build_parser()
    fmt = "text"
    try:
        args = parser.parse_args(argv)
        fmt = args.format or "text"
        if args.command == "witt":
            payload = _run_witt(args)
        elif args.command == "delta":
            payload = _run_delta(args)
        elif args.command == "lambda":
            payload = _run_lambda(args)
        elif args.command == "verify":
            payload, ok = _run_verify(args)
            print(_render(payload, fmt))
            return 0 if ok else 3
        else:
            raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(_render(exc.payload(), fmt))
        return 2
    print(_render(payload, fmt))
    return 0


if __name__ == "__main__":
    sys.exit(main())
