"""Command-line front end: ``pretzel-chi <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional, Sequence

from .classifier import ClassifierConfig, Status, classify, crosscheck, enumerate_verdicts
from .d_obstruction import coset_count_pm1
from .lattice_embed import find_embeddings, structural_check
from .plumbing import build_plumbing, describe, intersection_form, is_negative_definite
from .pretzel_core import ParseError, format_params, parse_params, reciprocal_sum
from .two_bridge import TwoBridgeFraction, is_chi_slice_two_bridge

SCHEMA = "pretzel-chi/1"
EXIT_OK, EXIT_PARSE, EXIT_LIMIT = 0, 2, 3
CSV_COLUMNS = ("params", "det", "components", "status", "rule", "family", "elapsed_ms")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2 anyway; keep it explicit
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _emit(obj: dict) -> None:
    print(json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=True))


def _config(args) -> ClassifierConfig:
    return ClassifierConfig(
        embed_cap=args.cap,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
    )


def _oriented(params):
    return params if reciprocal_sum(params) > 0 else tuple(-p for p in params)


def cmd_classify(args) -> int:
    v = classify(args.params, _config(args))
    if args.json:
        _emit({"verdict": v.to_json(timing=not args.no_timing)})
    else:
        print(f"{format_params(v.params)}: {v.status.value} ({v.rule})")
        print(f"  det = {v.det}, components = {v.components}")
        if v.family:
            print(f"  family: {v.family}")
        if hasattr(v.reason, "describe"):
            print("  " + v.reason.describe().replace("\n", "\n  "))
        elif not isinstance(v.reason, str):
            print(f"  {json.dumps(v.reason_json(), sort_keys=True)}")
    if v.status == Status.UNKNOWN and v.reason == "truncated":
        return EXIT_LIMIT
    return EXIT_OK


def cmd_enumerate(args) -> int:
    verdicts = enumerate_verdicts(args.strands, args.max, _config(args), jobs=args.jobs,
                                  positive_only=args.positive, mirror_dedup=not args.no_mirror_dedup)
    timing = not args.no_timing
    rows = [v.to_json(timing=timing) for v in verdicts]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in rows:
                w.writerow([",".join(map(str, r["params"])), r["det"], r["components"], r["status"],
                            r["rule"], r["family"], r.get("elapsed_ms", "")])
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"schema": SCHEMA, "strands": args.strands, "max": args.max, "rows": rows},
                      fh, indent=1, sort_keys=True)
    if not args.csv and not args.json:
        for v in verdicts:
            print(f"{format_params(v.params):28s} det={v.det:<8d} {v.status.value:16s} {v.rule} {v.family}")
    counts: dict = {}
    for v in verdicts:
        counts[v.status.value] = counts.get(v.status.value, 0) + 1
    print(f"{len(verdicts)} classes: " + ", ".join(f"{k}={n}" for k, n in sorted(counts.items())),
          file=sys.stderr)
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    report = crosscheck(args.check_id, args.max, max_strands=args.strands, config=_config(args), jobs=args.jobs)
    print(report.summary())
    return EXIT_OK


def cmd_two_bridge(args) -> int:
    from fractions import Fraction

    if args.q == 0:
        print("q must be nonzero", file=sys.stderr)
        return EXIT_PARSE
    f = TwoBridgeFraction.from_rational(Fraction(args.p, args.q))
    tb = is_chi_slice_two_bridge(f)
    tag = tb.tag.family if tb.tag else None
    if args.json:
        _emit({"p": args.p, "q": args.q, "string": list(tb.string), "dual": list(tb.dual),
               "tag": tag, "chi_slice": tb.chi_slice})
    else:
        print(f"{f}: [{', '.join(map(str, tb.string))}]^-")
        print(f"  dual: [{', '.join(map(str, tb.dual))}]^-")
        print(f"  tag: {tag + ' via ' + tb.tag.transform if tb.tag else 'NONE'}")
        print(f"  chi-slice: {tb.chi_slice}")
    return EXIT_OK


def cmd_plumbing(args) -> int:
    g = build_plumbing(_oriented(args.params))
    Q = intersection_form(g)
    if args.json:
        _emit({"params": list(g.params), "vertices": [{"id": i, "weight": w} for i, w in enumerate(g.weights)],
               "edges": [list(e) for e in g.edges], "central": g.central, "Q": [list(r) for r in Q.Q],
               "negative_definite": is_negative_definite(Q)})
    else:
        print(f"plumbing for {format_params(g.params)}")
        print(describe(g))
        print("Q =")
        for row in Q.Q:
            print("  " + " ".join(f"{v:3d}" for v in row))
        print(f"negative definite: {is_negative_definite(Q)}, det = {Q.det()}")
    return EXIT_OK


def _embed(args):
    g = build_plumbing(_oriented(args.params))
    Q = intersection_form(g)
    search = find_embeddings(Q, cap=args.cap, node_limit=args.node_limit, time_limit=args.time_limit)
    return g, Q, search


def cmd_embed(args) -> int:
    g, Q, search = _embed(args)
    if args.json:
        _emit({"params": list(g.params), "truncated": search.truncated,
               "embeddings": [[list(r) for r in e.At] for e in search]})
    else:
        print(f"{len(search)} embedding class(es) for {format_params(g.params)}"
              + (f" [truncated: {search.reason}]" if search.truncated else ""))
        for i, e in enumerate(search):
            st = structural_check(e, Q, g)
            print(f"class {i}: k={st.k} z={st.z}")
            print("  " + str(e).replace("\n", "\n  "))
    return EXIT_OK


def cmd_dinv(args) -> int:
    g, Q, search = _embed(args)
    reports = [coset_count_pm1(e) for e in search]
    if args.json:
        _emit({"params": list(g.params), "truncated": search.truncated,
               "classes": [{"det_abs": r.det_abs, "count": r.count, "fires": r.fires} for r in reports]})
    else:
        if not reports:
            print("no embeddings" + (" (search truncated)" if search.truncated else ""))
        for i, r in enumerate(reports):
            print(f"class {i}: |det At| = {r.det_abs}, cosets = {r.count}, fires = {r.fires}")
    return EXIT_OK


def _params(text: str):
    try:
        return parse_params(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pretzel-chi", description="Decide chi-sliceness of pretzel links.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def limits(p):
        p.add_argument("--cap", type=int, default=10_000, help="max embedding classes")
        p.add_argument("--node-limit", type=int, default=5_000_000)
        p.add_argument("--time-limit", type=float, default=60.0, help="seconds per embedding search")

    def link(p):
        p.add_argument("params", type=_params, help='e.g. "2,2,-5"')
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify", help="classify one link")
    link(p)
    limits(p)
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", help="classify every class in a parameter box")
    p.add_argument("--strands", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--positive", action="store_true", help="positive parameters only")
    p.add_argument("--no-mirror-dedup", action="store_true")
    p.add_argument("--no-timing", action="store_true", help="omit timing for byte-identical output")
    p.add_argument("--jobs", type=int, default=1)
    limits(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("crosscheck", help="compare a sweep against a published list")
    p.add_argument("check_id", choices=["1.2", "1.4", "1.6", "1.7"])
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--strands", type=int, default=9, help="max strands for the positive sweep")
    p.add_argument("--jobs", type=int, default=1)
    limits(p)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("two-bridge", help="Lisca test for K(p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_two_bridge)

    p = sub.add_parser("plumbing", help="show the plumbing graph and its form")
    link(p)
    p.set_defaults(func=cmd_plumbing)

    for name, func, text in (("embed", cmd_embed, "list lattice embeddings"),
                             ("dinv", cmd_dinv, "coset counts per embedding")):
        p = sub.add_parser(name, help=text)
        link(p)
        limits(p)
        p.set_defaults(func=func)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
