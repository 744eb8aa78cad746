"""Command-line interface.

Exit codes: 0 for a completed run (including NotEquivalent and improper
verdicts), 1 for an Unknown decision, 2 for input/parse errors, 3 for
constraint violations, 4 for verification failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import gallery
from .autgroup import IndefUnitary
from .criterion import (EQUIVALENT, NOT_EQUIVALENT, UNKNOWN, WitnessPair,
                        check_pair, decide_polynomial_equivalence,
                        hyperplane_disjoint)
from .degree2 import CASE_I, CASE_II, NormalFormParams, polynomialize
from .expressions import ParseError, scalar_parse
from .hermitian import check_proper
from .mapfile import (MapFile, Report, digest_of, make_report, matrix_to_obj,
                      witness_to_obj)
from .projective import BALL, Hyperplane
from .ratmap import (AT_INFINITY, GLOBAL_SAMPLED, base_locus,
                     cayley_transport, projectivize)
from .scalars import FLOAT_CONTEXT

EXIT_OK = 0
EXIT_UNKNOWN = 1
EXIT_PARSE = 2
EXIT_CONSTRAINT = 3
EXIT_VERIFY = 4


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ballmaps",
        description="Decide and construct polynomial equivalence of proper "
                    "rational maps between unit balls.")
    ap.add_argument("--backend", choices=["exact", "float"], default=None,
                    help="force the arithmetic backend for map files")
    ap.add_argument("--precision", type=int, default=None,
                    help="float backend mantissa bits (default 128)")
    ap.add_argument("--tolerance", type=float, default=None,
                    help="float backend zero tolerance (default 1e-25)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true",
                    help="emit a JSON report on stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-proper", help="properness verdict for a map")
    p.add_argument("mapfile")
    p.add_argument("--samples", type=int, default=400)

    p = sub.add_parser("degree", help="degree of a map")
    p.add_argument("mapfile")

    p = sub.add_parser("projectivize", help="print homogeneous components")
    p.add_argument("mapfile")

    p = sub.add_parser("base-locus", help="indeterminacy points")
    p.add_argument("mapfile")
    p.add_argument("--scope", choices=["at-infinity", "global"],
                   default="at-infinity")

    p = sub.add_parser("check-pair", help="verify a hyperplane pair")
    p.add_argument("mapfile")
    p.add_argument("--H", required=True,
                   help="source covector, comma-separated expressions "
                        "(length n+1, t-coefficient last)")
    p.add_argument("--Hp", required=True,
                   help="target covector (length N+1)")

    p = sub.add_parser("decide", help="decide polynomial equivalence")
    p.add_argument("mapfile")
    p.add_argument("--budget", type=int, default=2000)

    p = sub.add_parser("polynomialize-deg2",
                       help="run the degree-2 constructive pipeline")
    p.add_argument("--case", choices=[CASE_I, CASE_II], required=True)
    p.add_argument("--c1", required=True, help="coefficient expression")
    p.add_argument("--e1", help="coefficient expression (case II)")
    p.add_argument("--out", help="directory for output map/matrix files")

    p = sub.add_parser("verify-example", help="replay a named example")
    p.add_argument("id")
    p.add_argument("--a", help="parameter a (where applicable)")
    p.add_argument("--n", type=int, help="source dimension (ex42)")
    p.add_argument("--c1", help="parameter c1 (case1)")
    return ap


def _load_map(path: str, args):
    mf = MapFile.load(path)
    if args.backend:
        mf.backend = args.backend
    return mf, mf.to_rational_map(seed=args.seed)


def _covector(text: str):
    return [scalar_parse(part) for part in text.split(",")]


def _emit(args, report: Report, lines: list[str]) -> None:
    if args.json:
        print(report.to_json())
    else:
        for line in lines:
            print(line)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.precision is not None or args.tolerance is not None:
        FLOAT_CONTEXT.set(prec=args.precision, eps=args.tolerance)
    t0 = time.perf_counter()
    try:
        return _dispatch(args, t0)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"constraint violation: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except ArithmeticError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


def _dispatch(args, t0: float) -> int:
    ms = lambda: 1000.0 * (time.perf_counter() - t0)

    if args.command == "check-proper":
        mf, f = _load_map(args.mapfile, args)
        ball = f if f.model == BALL else cayley_transport(f)
        rep = check_proper(ball, samples=args.samples, seed=args.seed)
        report = make_report("check-proper", mf.digest(), rep.status,
                             args.seed, ms(), backend=mf.backend,
                             details={"note": rep.note,
                                      "witness_point": repr(rep.witness)
                                      if rep.witness else None})
        _emit(args, report, [f"verdict: {rep.status}", rep.note])
        return EXIT_OK

    if args.command == "degree":
        mf, f = _load_map(args.mapfile, args)
        k = f.degree()
        report = make_report("degree", mf.digest(), str(k), args.seed, ms(),
                             backend=mf.backend)
        _emit(args, report, [str(k)])
        return EXIT_OK

    if args.command == "projectivize":
        mf, f = _load_map(args.mapfile, args)
        fh = projectivize(f)
        names = mf.variables + ["t"]
        comps = [p.to_expr(names) for p in fh.components]
        report = make_report("projectivize", mf.digest(), "ok", args.seed,
                             ms(), backend=mf.backend,
                             details={"degree": fh.degree,
                                      "components": comps})
        _emit(args, report,
              [f"degree {fh.degree}"] + [f"[{i}] {c}"
                                         for i, c in enumerate(comps)])
        return EXIT_OK

    if args.command == "base-locus":
        mf, f = _load_map(args.mapfile, args)
        scope = AT_INFINITY if args.scope == "at-infinity" else GLOBAL_SAMPLED
        bl = base_locus(projectivize(f), scope=scope, seed=args.seed)
        pts = [repr(p) for p in bl.points]
        report = make_report("base-locus", mf.digest(),
                             f"{len(pts)} point(s)", args.seed, ms(),
                             backend=mf.backend,
                             details={"points": pts, "complete": bl.complete,
                                      "note": bl.note})
        _emit(args, report, [f"points: {pts}",
                             f"complete: {bl.complete} ({bl.note})"])
        return EXIT_OK

    if args.command == "check-pair":
        mf, f = _load_map(args.mapfile, args)
        fh = projectivize(f)
        src = Hyperplane.from_covector(_covector(args.H), f.model)
        tgt = Hyperplane.from_covector(_covector(args.Hp), f.model)
        src_dis = hyperplane_disjoint(src)
        tgt_dis = hyperplane_disjoint(tgt)
        ok = False
        if src_dis and tgt_dis:
            ok = check_pair(fh, WitnessPair(src, tgt))
        verdict = "pair_valid" if ok else "pair_invalid"
        report = make_report("check-pair", mf.digest(), verdict, args.seed,
                             ms(), backend=mf.backend,
                             details={"source_disjoint": src_dis,
                                      "target_disjoint": tgt_dis,
                                      "identity_holds": ok})
        _emit(args, report, [f"source disjoint: {src_dis}",
                             f"target disjoint: {tgt_dis}",
                             f"pair valid: {ok}"])
        return EXIT_OK

    if args.command == "decide":
        mf, f = _load_map(args.mapfile, args)
        decision = decide_polynomial_equivalence(f, budget=args.budget,
                                                 seed=args.seed)
        witness = witness_to_obj(decision.witness) if decision.witness \
            else None
        cert = decision.certificate.to_json_obj() if decision.certificate \
            else None
        details = {"report": decision.report, "exact": decision.exact}
        if decision.polynomial_map is not None:
            pm = MapFile.from_rational_map(decision.polynomial_map,
                                           mf.variables)
            details["polynomial_map"] = pm.to_obj()
        report = make_report("decide", mf.digest(), decision.verdict,
                             args.seed, ms(), witness=witness,
                             certificate=cert, details=details,
                             backend=mf.backend)
        lines = [f"verdict: {decision.verdict}", decision.report]
        if cert:
            lines += [f"  [{s['kind']}] {s['monomial']}: {s['conclusion']}"
                      for s in cert]
        _emit(args, report, lines)
        return EXIT_UNKNOWN if decision.verdict == UNKNOWN else EXIT_OK

    if args.command == "polynomialize-deg2":
        c1 = scalar_parse(args.c1)
        e1 = scalar_parse(args.e1) if args.e1 else None
        if args.case == CASE_II and e1 is None:
            raise ValueError("case II requires --e1")
        params = NormalFormParams(args.case, c1, e1)
        res = polynomialize(params)
        names = ["z", "w"]
        gmap = MapFile.from_rational_map(res.polynomial_map, names,
                                         {"pipeline": "degree2"})
        payload = {
            "y0": res.y0.to_expr() if res.y0 is not None else None,
            "witness": witness_to_obj(res.witness),
            "witness_ball": witness_to_obj(res.witness_ball),
            "normal_form": MapFile.from_rational_map(
                res.normal_form, names).to_obj(),
            "polynomial_map": gmap.to_obj(),
            "sigma1": matrix_to_obj(res.sigma1.matrix),
            "sigma2": matrix_to_obj(res.sigma2.matrix),
            "exact": res.exact,
        }
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            gmap.save(os.path.join(args.out, "polynomial_map.map.json"))
            for name in ("sigma1", "sigma2"):
                with open(os.path.join(args.out, f"{name}.matrix.json"),
                          "w", encoding="utf-8") as fh:
                    json.dump(payload[name], fh, indent=2, sort_keys=True)
                    fh.write("\n")
        digest = digest_of({"case": args.case, "c1": args.c1, "e1": args.e1})
        report = make_report("polynomialize-deg2", digest, "ok", args.seed,
                             ms(), witness=payload["witness"],
                             details=payload,
                             backend="exact" if res.exact else "float")
        _emit(args, report, [
            f"y0: {payload['y0']}",
            f"exact: {res.exact}",
            f"polynomial map denominator: "
            f"{res.polynomial_map.denominator.to_expr(names)}",
        ] + ([f"files written to {args.out}"] if args.out else []))
        return EXIT_OK

    if args.command == "verify-example":
        kw = {}
        if args.a is not None:
            kw["a"] = Fraction(args.a)
        if args.n is not None:
            kw["n"] = args.n
        if args.c1 is not None:
            kw["c1"] = scalar_parse(args.c1)
        try:
            rep = gallery.verify_example(args.id, **kw)
        except gallery.UnknownFixture:
            print(f"unknown example id: {args.id}", file=sys.stderr)
            return EXIT_PARSE
        report = make_report("verify-example",
                             digest_of({"id": args.id, **{k: str(v) for k, v
                                                          in kw.items()}}),
                             "pass" if rep["pass"] else "fail", args.seed,
                             ms(), details=rep["details"])
        _emit(args, report, [f"{args.id}: "
                             f"{'pass' if rep['pass'] else 'fail'}"]
              + [f"  {k}: {v}" for k, v in rep["details"].items()])
        return EXIT_OK if rep["pass"] else EXIT_VERIFY

    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
