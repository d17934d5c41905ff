"""Command-line entry point.

Exit codes: 0 the checked property holds, 1 it fails, 2 usage error,
3 a search ran out of budget.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Sequence

from .certificates import Certificate, CertificateError, load_and_verify, weights_out
from .constructions import (
    ConstructionError,
    ConstructionRecord,
    axes_product,
    gyok3_set,
    lines_construction,
    mrose,
    parabola,
    random_saturating,
    singer,
)
from .field import VectorSpace, as_vector_space, is_prime, make_field, order_of_minus_two
from .groups import Group, PointSet, WeightFamily, as_coefficient, single
from .groupspec import format_group_spec, parse_group_spec
from .predicates import (
    Kind,
    Predicate,
    avoiding,
    complete,
    saturating,
    three_ap_free,
    three_ap_saturating,
    complete_three_ap,
    verify,
)
from .search import BoundKind, audit_chain, lower_bound, min_complete_avoiding, min_saturating

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

PRED_NAMES = ["3ap-free", "3ap-sat", "3ap-complete", "avoid", "sat", "complete", "sidon", "cap", "line-sat"]


class UsageError(ValueError):
    pass


# -- argument parsing helpers -------------------------------------------------


def parse_weights(items: Sequence[str] | None) -> WeightFamily | None:
    if not items:
        return None
    pairs = []
    for item in items:
        parts = item.split(",")
        if len(parts) != 2:
            raise UsageError(f"a weight pair is written l1,l2; got {item!r}")
        try:
            pairs.append(tuple(as_coefficient(p) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad coefficient in {item!r}: {exc}") from exc
    if len(pairs) == 1:
        return single(*pairs[0])
    return WeightFamily(tuple(pairs))


def make_predicate(name: str, W: WeightFamily | None) -> Predicate:
    if name == "3ap-free":
        return three_ap_free()
    if name == "3ap-sat":
        return three_ap_saturating()
    if name == "3ap-complete":
        return complete_three_ap()
    if name in ("avoid", "sat", "complete"):
        fn = {"avoid": avoiding, "sat": saturating, "complete": complete}[name]
        return fn(W) if W is not None else fn(three_ap_free().weights)
    return Predicate({"sidon": Kind.SIDON, "cap": Kind.CAP, "line-sat": Kind.LINE_SATURATING}[name])


_TUPLE = re.compile(r"\(([^()]*)\)")


def parse_set(G: Group, text: str) -> PointSet:
    text = text.strip()
    if not text:
        return PointSet(G, [])
    if "(" in text:
        points = []
        for m in _TUPLE.finditer(text):
            coords = tuple(int(c) for c in m.group(1).split(","))
            points.append(G.point(coords) if isinstance(G, VectorSpace) else G.encode(coords))
        return PointSet(G, points)
    values = [int(v) for v in text.split(",") if v.strip()]
    bad = [v for v in values if not 0 <= v < G.order]
    if bad:
        raise UsageError(f"elements {bad} are outside [0, {G.order})")
    return PointSet(G, values)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("APSAT_SEED", "0") or 0)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field_of(G: Group, dim: int | None = None):
    V = as_vector_space(G)
    if dim is not None and V.dim != dim:
        raise UsageError(f"this construction lives in dimension {dim}, got {format_group_spec(G)}")
    return V.field


# -- subcommands --------------------------------------------------------------


def build(args) -> ConstructionRecord:
    name = args.name
    if name in ("parabola", "lines", "lines-star"):
        F = _field_of(parse_group_spec(args.group), 2)
        if name == "parabola":
            return parabola(F)
        return lines_construction(F, star=name == "lines-star")
    if name in ("axes", "axes-star"):
        if not (args.a and args.b):
            raise UsageError("axes constructions need --a and --b")
        return axes_product(parse_group_spec(args.a), parse_group_spec(args.b), star=name == "axes-star")
    if name == "singer":
        return singer(args.n)
    if name == "mrose":
        if args.m is None:
            raise UsageError("mrose needs an odd modulus --m")
        return mrose(modulus=args.m)
    if name == "gyok3":
        if args.m is None:
            raise UsageError("gyok3 needs --m")
        return gyok3_set(args.m)
    if name == "random":
        return random_saturating(parse_group_spec(args.group), _seed(args))
    raise UsageError(f"unknown construction {name!r}")


def cmd_construct(args) -> int:
    rec = build(args)
    reports = rec.verify(args.threads)
    size_ok = rec.predicted_size is None or rec.predicted_size == rec.size
    ok = size_ok and all(r.holds for r in reports)
    extra = {
        "claims": [
            {"predicate": r.predicate.kind.value, "weights": weights_out(r.predicate.weights) if r.predicate.kind.needs_weights else None, "result": r.holds}
            for r in reports
        ],
        "size": rec.size,
        "predicted_size": rec.predicted_size,
        "size_matches": size_ok,
    }
    cert = Certificate.from_report(rec.space, rec.points, reports[0], rec.provenance(), extra)
    cert.elapsed = sum(r.elapsed for r in reports)
    _emit(args, cert.dumps())
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.cert:
        with open(args.cert) as fh:
            text = fh.read()
        cert, report, matches = load_and_verify(text, args.threads)
        out = Certificate.from_report(cert.group, cert.points, report, cert.provenance, {"reproduces_stored_result": matches})
        out.extra["witness_text"] = report.witness.describe(cert.group) if report.witness else None
        _emit(args, out.dumps())
        print(f"{report.describe(cert.group)}; stored result {'reproduced' if matches else 'NOT reproduced'}", file=sys.stderr)
        return EXIT_OK if (report.holds and matches) else EXIT_FAIL
    if not (args.group and args.set is not None and args.pred):
        raise UsageError("verify needs --cert, or --group, --set and --pred")
    G = parse_group_spec(args.group)
    S = parse_set(G, args.set)
    pred = make_predicate(args.pred, parse_weights(args.w))
    report = verify(G, S, pred, args.threads)
    text = report.witness.describe(G) if report.witness else None
    cert = Certificate.from_report(G, S, report, None, {"witness_text": text})
    _emit(args, cert.dumps())
    print(report.describe(G), file=sys.stderr)
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_search(args) -> int:
    G = parse_group_spec(args.group)
    pred = make_predicate(args.pred, parse_weights(args.w))
    if pred.kind in (Kind.COMPLETE_THREE_AP, Kind.COMPLETE_W):
        res = min_complete_avoiding(G, pred, args.limit, args.budget, args.threads)
    elif pred.kind in (Kind.THREE_AP_SATURATING, Kind.W_SATURATING, Kind.LINE_SATURATING):
        res = min_saturating(G, pred, args.limit, args.budget, args.threads)
    else:
        raise UsageError("search supports saturating and complete predicates")
    extra = {
        "search": {
            "minimum": res.minimum,
            "none_exists": res.none_exists,
            "exhaustive": res.exhaustive,
            "nodes": res.nodes,
            "start_size": res.start_size,
            "searched_up_to": res.searched_up_to,
        }
    }
    S = res.witness if res.witness is not None else PointSet(G, [])
    cert = Certificate(G, pred, S, res.found, None, None, res.elapsed, extra)
    _emit(args, cert.dumps())
    if res.found:
        print(f"minimum {res.minimum}: {S.to_list()}", file=sys.stderr)
        return EXIT_OK
    if not res.exhaustive:
        print(f"budget exhausted after {res.nodes} nodes (sizes up to {res.searched_up_to} ruled out)", file=sys.stderr)
        return EXIT_BUDGET
    print("none exists", file=sys.stderr)
    return EXIT_FAIL


def cmd_bounds(args) -> int:
    n = parse_group_spec(args.group).order if args.group else args.n
    if n is None:
        raise UsageError("bounds needs --n or --group")
    out = {}
    for kind in BoundKind:
        b = lower_bound(kind, n)
        out[kind.value] = {"value": f"{b.value:.6f}", "ceiling": b.ceiling}
    sys.stdout.write(json.dumps({"n": n, "bounds": out}, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _primes(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def cmd_table(args) -> int:
    rows, ok = [], True
    if args.name in ("lines", "lines-star", "parabola"):
        header = ["p", "o(-2)", "size", "predicted", "verified"]
        for p in _primes(args.lo, args.hi):
            if args.name == "parabola" and p == 2 or args.name != "parabola" and p in (2, 3):
                continue
            F = make_field(p)
            rec = parabola(F) if args.name == "parabola" else lines_construction(F, args.name == "lines-star")
            good = rec.holds(args.threads)
            ok &= good
            rows.append([p, order_of_minus_two(F), rec.size, rec.predicted_size, good])
    elif args.name == "gyok3":
        header = ["m", "case", "size", "sqrt(3m)", "claim", "verified"]
        for m in range(max(args.lo, 2), args.hi + 1):
            rec = gyok3_set(m)
            good = rec.holds(args.threads)
            ok &= good
            rows.append([m, rec.params["case"], rec.size, f"{rec.notes['sqrt_3m']:.3f}", str(rec.claims[0]), good])
    elif args.name == "mrose":
        header = ["m", "t", "size", "sqrt(3.5m)+8", "verified"]
        for m in range(max(args.lo, 1) | 1, args.hi + 1, 2):
            rec = mrose(modulus=m)
            good = rec.holds(args.threads)
            ok &= good
            rows.append([m, rec.params["t"], rec.size, f"{rec.notes['size_bound']:.3f}", good])
    else:
        raise UsageError(f"no table for {args.name!r}")
    if args.format == "csv":
        lines = [",".join(header)] + [",".join(str(c) for c in r) for r in rows]
    else:
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_audit(args) -> int:
    G = parse_group_spec(args.group)
    res = audit_chain(G, args.budget, args.threads)
    out = {
        "group": format_group_spec(G),
        "minima": res.values(),
        "checks": res.checks,
        "exhaustive": res.exhaustive,
        "holds": res.holds,
    }
    _emit(args, json.dumps(out, sort_keys=True, indent=2) + "\n")
    if not res.exhaustive:
        return EXIT_BUDGET
    return EXIT_OK if res.holds else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads (env APSAT_THREADS)")
    common.add_argument("--budget", type=int, default=None, help="search node budget (env APSAT_BUDGET)")
    common.add_argument("--seed", type=int, default=None, help="random seed (env APSAT_SEED)")
    common.add_argument("--out", help="write output to this file instead of stdout")

    ap = argparse.ArgumentParser(prog="apsat", description="3-AP and weighted-equation avoiding/saturating sets")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a set and certify its claims")
    p.add_argument("--name", required=True,
                   choices=["parabola", "lines", "lines-star", "axes", "axes-star", "singer", "mrose", "gyok3", "random"])
    p.add_argument("--group", help="ambient group, e.g. F5^1:2 or Z101")
    p.add_argument("--a", help="first factor for axes constructions")
    p.add_argument("--b", help="second factor for axes constructions")
    p.add_argument("--n", type=int, help="Singer parameter")
    p.add_argument("--m", type=int, help="modulus (mrose, gyok3)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="check a predicate on a set or re-check a certificate")
    p.add_argument("--group")
    p.add_argument("--set", help="comma-separated indices, or coordinate tuples like (0,1),(2,3)")
    p.add_argument("--pred", choices=PRED_NAMES)
    p.add_argument("--w", action="append", help="weight pair l1,l2 (repeatable); default 3-AP")
    p.add_argument("--cert", help="certificate file to re-verify")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="exhaustive minimum-size search")
    p.add_argument("--group", required=True)
    p.add_argument("--pred", required=True, choices=PRED_NAMES)
    p.add_argument("--w", action="append")
    p.add_argument("--limit", type=int, help="largest size to try")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bounds", parents=[common], help="counting lower bounds for a group order")
    p.add_argument("--n", type=int)
    p.add_argument("--group")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table", parents=[common], help="sweep a construction over a parameter range")
    p.add_argument("--name", required=True, choices=["lines", "lines-star", "parabola", "gyok3", "mrose"])
    p.add_argument("--lo", type=int, default=5)
    p.add_argument("--hi", type=int, default=50)
    p.add_argument("--format", choices=["markdown", "csv"], default="markdown")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("audit", parents=[common], help="the four minima of an odd-order group and their ordering")
    p.add_argument("--group", required=True)
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CertificateError, ConstructionError, ValueError) as exc:
        print(f"apsat {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"apsat {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
