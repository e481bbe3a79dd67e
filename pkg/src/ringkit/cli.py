"""Command-line front end.  Exit codes: 0 verified, 1 refuted/inconclusive/not found, 2 usage or input error."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .chainring import (GeneratingFamily, NotFoundError, OverlapPatternError, PreconditionError,
                        StructureError, Word, certify_F_pair, expand_ring, p1, replay, shrink_into,
                        stabilize)
from .foundation import FormatError, format_rational, parse_rational
from .plmap import NotHomeomorphismError, PLMap, compose
from .treepair import NotInGroupError, TreePair, from_plmap, generator, to_plmap
from . import tnring

FORMAT = "ringkit/1"
DEFAULT_BUDGET = 64


class UsageError(ValueError):
    pass


def _emit(obj) -> None:
    if isinstance(obj, dict) and "format" not in obj:
        obj = {"format": FORMAT, **obj}
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def _load_map_doc(doc) -> PLMap:
    if isinstance(doc, dict) and doc.get("format", FORMAT) != FORMAT:
        raise FormatError(f"unsupported format {doc['format']!r}")
    if isinstance(doc, dict) and "domain" in doc:
        return to_plmap(TreePair.from_json(doc))
    return PLMap.from_json(doc)


def load_map(path: str) -> PLMap:
    return _load_map_doc(_read_json(path))


def load_family(path: str) -> GeneratingFamily:
    doc = _read_json(path)
    if isinstance(doc, dict):
        doc = doc.get("generators", doc.get("family"))
    if not isinstance(doc, list):
        raise FormatError(f"{path}: expected a list of generators or an object with 'generators'")
    return GeneratingFamily([_load_map_doc(g) for g in doc])


def family_json(gens) -> dict:
    return {"format": FORMAT, "generators": [g.to_json() for g in gens]}


def _pair_arg(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise FormatError(f"expected 'p/q,p/q', got {text!r}")
    return parse_rational(parts[0].strip()), parse_rational(parts[1].strip())


def _budget(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("RINGKIT_BUDGET")
    if env is None:
        return DEFAULT_BUDGET
    try:
        b = int(env)
    except ValueError as exc:
        raise UsageError(f"RINGKIT_BUDGET must be an integer, got {env!r}") from exc
    if b < 0:
        raise UsageError("RINGKIT_BUDGET must be non-negative")
    return b


# -- subcommands -----------------------------------------------------------


def cmd_gen(args) -> int:
    n, group = args.n, args.group
    if n < 2:
        raise UsageError("n must be at least 2")
    if args.name is None or args.name == "f" and args.i is None:
        if n < 3:
            raise UsageError("the f-family needs n >= 3")
        gens = tnring.build_family(n).generators
        if group == "Fn":
            gens = gens[:n]
        if args.format == "treepair":
            _emit({"format": FORMAT, "generators": [from_plmap(g, n).to_json() for g in gens]})
        else:
            _emit(family_json(gens))
        return 0
    if args.name == "f":
        gens = tnring.build_family(n).generators
        limit = n if group == "Fn" else n + 1
        if not 1 <= args.i <= limit:
            raise UsageError(f"f index must be in 1..{limit} for {group}")
        f = gens[args.i - 1]
    else:
        if args.name == "y" and group == "Fn":
            raise UsageError("y_n is not an element of F_n")
        if args.name == "x" and args.i is None:
            raise UsageError("x needs --i")
        f = to_plmap(generator(args.name, n, args.i))
    _emit(from_plmap(f, n).to_json() if args.format == "treepair" else f.to_json())
    return 0


def cmd_verify_ring(args) -> int:
    report = tnring.verify(args.n)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.ring_cert.to_json(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    _emit(report.to_json())
    if not report.valid:
        print(f"verify-ring: first failing item {report.first_failure}", file=sys.stderr)
    return 0 if report.valid else 1


def cmd_expand(args) -> int:
    fam = load_family(args.family)
    nmax = _budget(args.max_exponent)
    certs, steps = [], []
    try:
        while fam.m < args.target_m:
            N, cert = expand_ring(fam, nmax)
            certs.append(cert.to_json())
            steps.append({"m": fam.m + 1, "N": N})
            fam = cert.new_family
    except NotFoundError as exc:
        _emit({"certificates": certs, "steps": steps, "error": str(exc)})
        return 1
    _emit({"format": FORMAT, "certificates": certs, "steps": steps, "family": family_json(fam.generators)})
    return 0


def cmd_stabilize(args) -> int:
    fam = load_family(args.family)
    try:
        N, cert = stabilize(fam, _budget(args.max_exponent))
    except NotFoundError as exc:
        _emit({"error": str(exc), "largest_tried": exc.best})
        return 1
    _emit({"N": N, "certificate": cert.to_json()})
    return 0


def cmd_certify_f(args) -> int:
    cert = certify_F_pair(load_map(args.f), load_map(args.g))
    _emit(cert.to_json())
    return 0 if cert.certified else 1


def cmd_shrink(args) -> int:
    fam = load_family(args.family)
    t = parse_rational(args.point) if args.point else None
    try:
        cert = shrink_into(fam, _pair_arg(args.interval), _pair_arg(args.target), t, _budget(args.budget))
    except NotFoundError as exc:
        best = exc.best
        _emit({"error": str(exc), "best": None if best is None else [format_rational(x) for x in best]})
        return 1
    _emit(cert.to_json())
    return 0 if cert.valid else 1


def cmd_eval(args) -> int:
    f = load_map(args.map)
    t = parse_rational(args.point)
    _emit(format_rational(f(t) if f.kind == "interval" else f.evaluate(t)))
    return 0


def cmd_compose(args) -> int:
    maps = [load_map(p) for p in args.maps]
    result = PLMap.identity()
    for f in maps:
        result = compose(result, f)
    _emit(result.to_json())
    return 0


def cmd_support(args) -> int:
    s = load_map(args.map).support()
    _emit({"full": s.full, "arcs": [[format_rational(a), format_rational(b)]
                                    for a, b in (arc.as_pair() for arc in s.arcs)]})
    return 0


def cmd_p1(args) -> int:
    fam = load_family(args.family)
    w = Word.parse(args.word)
    if w.max_index() > fam.m:
        raise UsageError(f"word uses a generator beyond f{fam.m}")
    _emit(format_rational(p1(fam, w)))
    return 0


def cmd_replay(args) -> int:
    doc = _read_json(args.cert)
    fam = load_family(args.family) if args.family else None
    docs = doc["certificates"] if isinstance(doc, dict) and "certificates" in doc else [doc]
    results = []
    for d in docs:
        try:
            results.append(replay(d, fam).to_json())
        except FormatError:
            raise
        except ValueError as exc:
            # well-formed but mathematically invalid data, e.g. a mutated node breaking monotonicity
            results.append({"ok": False, "reproduced": False, "error": str(exc)})
        # in an expansion bundle each step must start from the previous step's new family
        new = d.get("data", {}).get("new_family") if isinstance(d, dict) else None
        try:
            fam = GeneratingFamily([PLMap.from_json(g) for g in new]) if new else None
        except ValueError:
            fam = None
    ok = all(r["ok"] for r in results)
    _emit(results[0] if len(results) == 1 else {"ok": ok, "results": results})
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ringkit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a named generator or the f-family")
    p.add_argument("--group", choices=["Fn", "Tn"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--name", choices=["x", "y", "g1", "g2", "f"])
    p.add_argument("--i", type=int)
    p.add_argument("--format", choices=["plmap", "treepair"], default="plmap")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify-ring", help="verify that T_n is an (n+1)-ring group")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_ring)

    p = sub.add_parser("expand", help="expand an m-ring family up to target size")
    p.add_argument("--family", required=True)
    p.add_argument("--target-m", type=int, required=True)
    p.add_argument("--max-exponent", type=int)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("stabilize", help="smallest power making a prechain a certified chain")
    p.add_argument("--family", required=True)
    p.add_argument("--max-exponent", type=int)
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser("certify-f", help="F-criterion for a pair of maps")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(func=cmd_certify_f)

    p = sub.add_parser("shrink", help="commutator word shrinking an interval into a target")
    p.add_argument("--family", required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--point")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_shrink)

    p = sub.add_parser("eval", help="evaluate a map at a point")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compose", help="product of maps, the last applied first")
    p.add_argument("--maps", nargs="+", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("support", help="support of a map")
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("p1", help="exponent sum of f1 in a word")
    p.add_argument("--family", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_p1)

    p = sub.add_parser("replay", help="recompute a certificate and compare")
    p.add_argument("--cert", required=True)
    p.add_argument("--family")
    p.set_defaults(func=cmd_replay)
    return ap


_INPUT_ERRORS = (FormatError, UsageError, NotHomeomorphismError, StructureError, NotInGroupError,
                 PreconditionError, OverlapPatternError, OSError)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        print(f"ringkit {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
