"""Command-line front end: ``regmaps enumerate|graph|count|triples|holes|verify``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from math import gcd
from typing import Optional, Sequence

from . import __version__
from .atlas import DEFAULT_OPS, build_atlas, catalog, export
from .automorphism import compute_aut
from .census import (
    LATTICE_CAP,
    count_triples,
    order_of_O,
    phi_direct,
    phi_involutory,
    phi_moebius,
    psl2_even_closed_form,
    subgroup_lattice,
)
from .field import FieldError
from .groups import ORDER_CAP, TABLE_CAP, CapExceededError, GroupSpecError, build_group
from .maps import HoleError, MapError, hole_length, word_order
from .ops import parse_ops
from .suites import load_suites, run_suite

log = logging.getLogger("regmaps")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
JOBS_ENV = "REGMAPS_JOBS"

DEFAULT_CONFIG = {
    "order_cap": ORDER_CAP,
    "table_cap": TABLE_CAP,
    "aut_cap": 1200,
    "lattice_cap": LATTICE_CAP,
    "ops": DEFAULT_OPS,
    "jobs": 1,
}


class UsageError(Exception):
    pass


def load_config(path: Optional[str]) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if path:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        unknown = set(user) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(user)
    return cfg


def _jobs(args, cfg) -> int:
    if args.jobs is not None:
        n = args.jobs
    elif os.environ.get(JOBS_ENV):
        try:
            n = int(os.environ[JOBS_ENV])
        except ValueError:
            raise UsageError(f"{JOBS_ENV} must be an integer") from None
    else:
        n = int(cfg["jobs"])
    if n < 1:
        raise UsageError("job count must be >= 1")
    return n


def _group(args, cfg):
    return build_group(args.spec, cap=int(cfg["order_cap"]), table_cap=int(cfg["table_cap"]))


def _aut(G, cfg):
    return compute_aut(G, generic_cap=int(cfg["aut_cap"]))


def _write(data: bytes | str, out: Optional[str]) -> None:
    if isinstance(data, str):
        data = data.encode()
    if out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def _map_rows(cat) -> list[dict]:
    rows = []
    for mc in cat:
        inv = mc.invariants
        row = {"id": mc.id, "type": f"{{{inv.p},{inv.q}}}", "r": inv.r, "genus": inv.genus,
               "reflexibility": inv.reflexibility}
        if inv.trace is not None:
            row["trace"], row["cotrace"] = inv.trace, inv.cotrace
        rows.append(row)
    return rows


def cmd_enumerate(args, cfg) -> int:
    G = _group(args, cfg)
    A = _aut(G, cfg)
    cat = catalog(G, A, jobs=_jobs(args, cfg), valency=args.valency, face=args.face)
    rows = _map_rows(cat)
    if args.json:
        doc = {"group": G.spec, "order": G.order, "aut_order": A.order, "maps": rows, "version": __version__}
        _write(json.dumps(doc, indent=2) + "\n", args.json)
    if args.json != "-":
        cols = ["id", "type", "r", "genus", "reflexibility", "trace", "cotrace"]
        if not any("trace" in r for r in rows):
            cols = cols[:5]
        print(f"# O({G.spec}): |G|={G.order} |Aut G|={A.order} maps={len(rows)}")
        print("\t".join(cols))
        for r in rows:
            print("\t".join(str(r.get(c, "")) for c in cols))
    return EXIT_OK


def cmd_graph(args, cfg) -> int:
    G = _group(args, cfg)
    A = _aut(G, cfg)
    try:
        ops = parse_ops(args.ops or cfg["ops"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = build_atlas(G, A, ops, jobs=_jobs(args, cfg))
    _write(export(g, args.format), args.output)
    return EXIT_OK


def cmd_count(args, cfg) -> int:
    G = _group(args, cfg)
    A = _aut(G, cfg)
    jobs = _jobs(args, cfg)
    report: dict = {"group": G.spec, "method": args.method, "aut_order": A.order}
    if args.method == "formula":
        if G.kind not in ("psl2", "sl2") or G.field is None or G.field.p != 2:
            raise UsageError("formula method needs psl2 or sl2 over GF(2^e)")
        o_size = psl2_even_closed_form(G.field.e)
        report.update(phi=o_size * A.order, o_size=o_size)
    else:
        if args.method == "moebius":
            L = subgroup_lattice(G, cap=int(cfg["lattice_cap"]))
            phi = phi_moebius(G, L)
            report["subgroups"] = len(L)
        else:
            phi = phi_direct(G, jobs=jobs)
        report.update(phi=phi, o_size=order_of_O(G, A, phi))
        inv = phi_involutory(G, phi)
        if inv != phi:
            report["o_size_involutory"] = order_of_O(G, A, inv)
            report["note"] = ("cyclic group: phi counts pairs with y = 1; "
                              "o_size_involutory counts maps with y of order 2")
    if args.triples:
        cd = G.classes
        per = []
        for yi, ycls in enumerate(cd.classes):
            if G.orders[ycls[0]] != 2:
                continue
            for xi in range(len(cd)):
                for zi in range(len(cd)):
                    c = count_triples(G, cd, xi, yi, zi, jobs=jobs)
                    if c.total:
                        per.append({"X": c.X, "Y": c.Y, "Z": c.Z, "total": c.total, "generating": c.generating})
        report["per_class_triples"] = per
    report["version"] = __version__
    _write(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_triples(args, cfg) -> int:
    G = _group(args, cfg)
    cd = G.classes
    if args.list or not args.classes:
        print("class\torder\tsize\trepresentative")
        for name, cls in zip(cd.names, cd.classes):
            print(f"{name}\t{int(G.orders[cls[0]])}\t{len(cls)}\t{G.format_element(int(cls[0]))}")
        return EXIT_OK
    if len(args.classes) != 3:
        raise UsageError("give three class labels X Y Z")
    try:
        c = count_triples(G, cd, *args.classes, jobs=_jobs(args, cfg))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"unknown class label: {exc}") from None
    print(json.dumps({"group": G.spec, "X": c.X, "Y": c.Y, "Z": c.Z, "total": c.total, "generating": c.generating}))
    return EXIT_OK


def _parse_words(text: str) -> list[list[int]]:
    try:
        return [[int(v) for v in w.split(",")] for w in text.split(";") if w.strip()]
    except ValueError:
        raise UsageError(f"bad exponent words {text!r}; use e.g. '2,4,4;1,-1'") from None


def cmd_holes(args, cfg) -> int:
    G = _group(args, cfg)
    A = _aut(G, cfg)
    cat = catalog(G, A, jobs=_jobs(args, cfg))
    if not 0 <= args.map < len(cat):
        raise UsageError(f"map id {args.map} out of range 0..{len(cat) - 1}")
    mc = cat[args.map]
    m = mc.triple
    q = m.valency
    holes = {str(j): hole_length(m, j) for j in range(1, q) if gcd(j, q) == 1}
    words = {",".join(map(str, w)): word_order(m, w) for w in _parse_words(args.words)} if args.words else {}
    doc = {"group": G.spec, "map": mc.id, "label": mc.label, "hole_lengths": holes, "isotactic_orders": words}
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    suites = load_suites(args.suites_file)
    if args.list:
        for name, s in suites.items():
            print(f"{name}\t{s.group}\t{len(s.facts)} facts")
        return EXIT_OK
    if args.name == "all":
        chosen = list(suites.values())
    elif args.name in suites:
        chosen = [suites[args.name]]
    else:
        raise UsageError(f"unknown suite {args.name!r}; known: {', '.join(suites)}")
    jobs = _jobs(args, cfg)
    failed = 0
    for s in chosen:
        for r in run_suite(s, jobs=jobs):
            print(r.line())
            failed += not r.passed
    print(f"{'FAIL' if failed else 'PASS'}: {failed} failing fact(s) in {len(chosen)} suite(s)")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regmaps", description="Orientably regular maps with a given automorphism group.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="JSON file with caps and default ops")
    p.add_argument("--jobs", "-j", type=int, help=f"worker threads (default: ${JOBS_ENV} or 1)")
    p.add_argument("--verbose", "-v", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", help="list the maps of O(G)")
    s.add_argument("spec")
    s.add_argument("--json", metavar="FILE", help="also write JSON ('-' for stdout only)")
    s.add_argument("--valency", type=int, help="only maps with this vertex valency")
    s.add_argument("--face", type=int, help="only maps with this face length")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("graph", help="operation graph as DOT or JSON")
    s.add_argument("spec")
    s.add_argument("--ops", help=f"comma-separated operations (default {DEFAULT_OPS})")
    s.add_argument("--format", choices=["dot", "json"], default="json")
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("count", help="count maps without enumeration (JSON report)")
    s.add_argument("spec")
    s.add_argument("--method", choices=["direct", "moebius", "formula"], default="direct")
    s.add_argument("--triples", action="store_true", help="include per-class triple counts")
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("triples", help="class triple counts; without classes, list the classes")
    s.add_argument("spec")
    s.add_argument("classes", nargs="*", metavar="CLASS")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_triples)

    s = sub.add_parser("holes", help="hole lengths and isotactic polygon periods of one map")
    s.add_argument("spec")
    s.add_argument("--map", type=int, required=True, help="map id from 'enumerate'")
    s.add_argument("--words", help="exponent words, e.g. '2,4,4;1,-1'")
    s.set_defaults(func=cmd_holes)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("name", nargs="?", default="all")
    s.add_argument("--list", action="store_true")
    s.add_argument("--suites-file", help="alternative suites JSON")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except CapExceededError as exc:
        print(f"regmaps: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, GroupSpecError, FieldError, HoleError, MapError) as exc:
        print(f"regmaps: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
