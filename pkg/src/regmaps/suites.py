"""Verification suites: expected facts stored as JSON, checked against live computations."""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from typing import Any, Callable, Optional

from .atlas import AtlasGraph, MapCatalog, build_atlas, catalog
from .automorphism import AutGroup, compute_aut, involution_orbits
from .census import (
    count_triples,
    hall_square_criterion,
    order_of_O,
    phi_direct,
    phi_moebius,
    psl2_even_closed_form,
    symmetric_involution_witnesses,
)
from .groups import FiniteGroup, build_group
from .maps import MapTriple, check_relators, hole_length, make_map, matrix_map, word_order
from .ops import apply_word, parse_op

__all__ = ["VerificationSuite", "FactResult", "load_suites", "run_suite", "SuiteContext"]

log = logging.getLogger(__name__)


@dataclass
class VerificationSuite:
    name: str
    group: str
    facts: list[dict]
    description: str = ""


@dataclass
class FactResult:
    suite: str
    fact: str
    passed: bool
    expected: Any
    computed: Any
    seconds: float = 0.0
    error: Optional[str] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.suite}/{self.fact}: computed={self.computed!r} expected={self.expected!r}"
        if self.error:
            text += f" error={self.error}"
        return text


def load_suites(path: Optional[str] = None) -> dict[str, VerificationSuite]:
    """Suites from a JSON file (default: the packaged ``data/suites.json``)."""
    if path is None:
        raw = resources.files("regmaps").joinpath("data/suites.json").read_text()
    else:
        with open(path) as fh:
            raw = fh.read()
    doc = json.loads(raw)
    out = {}
    for s in doc["suites"]:
        out[s["name"]] = VerificationSuite(s["name"], s["group"], s["facts"], s.get("description", ""))
    return out


class SuiteContext:
    """Lazily computed objects shared by the facts of one suite."""

    def __init__(self, group: FiniteGroup, jobs: int = 1):
        self.group = group
        self.jobs = jobs
        self._atlases: dict[str, AtlasGraph] = {}

    @cached_property
    def aut(self) -> AutGroup:
        return compute_aut(self.group)

    @cached_property
    def catalog(self) -> MapCatalog:
        return catalog(self.group, self.aut, jobs=self.jobs)

    def atlas(self, ops: str) -> AtlasGraph:
        if ops not in self._atlases:
            self._atlases[ops] = build_atlas(self.group, self.aut, ops, cat=self.catalog)
        return self._atlases[ops]

    def base_map(self, spec: dict) -> MapTriple:
        G = self.group
        if "matrix" in spec:
            m = matrix_map(G, spec["matrix"]["x"], spec["matrix"]["y"])
        elif "cycles" in spec:
            m = make_map(G, G.from_cycles(spec["cycles"]["x"]), G.from_cycles(spec["cycles"]["y"]))
        elif "map_id" in spec:
            m = self.catalog[spec["map_id"]].triple
        else:
            raise ValueError(f"unknown map spec {spec!r}")
        return apply_word(m, spec.get("word", ""))

    def labels(self) -> list[str]:
        return [mc.label for mc in self.catalog]


def _multiset(xs) -> list:
    return sorted(xs, key=lambda v: (str(type(v)), v))


# each check returns the computed value; the runner compares it to "expected"
_CHECKS: dict[str, Callable[[SuiteContext, dict], Any]] = {}


def _check(name):
    def deco(fn):
        _CHECKS[name] = fn
        return fn

    return deco


@_check("group_order")
def _(ctx, f):
    return ctx.group.order


@_check("aut_order")
def _(ctx, f):
    return ctx.aut.order


@_check("map_count")
def _(ctx, f):
    return len(ctx.catalog)


@_check("extended_types")
def _(ctx, f):
    return _multiset(ctx.labels())


@_check("genera")
def _(ctx, f):
    return _multiset(mc.invariants.genus for mc in ctx.catalog)


@_check("reflexibility")
def _(ctx, f):
    kinds = sorted({mc.invariants.reflexibility for mc in ctx.catalog})
    return kinds[0] if len(kinds) == 1 else kinds


@_check("quotient_genus_is_genus_plus_one")
def _(ctx, f):
    return all(mc.invariants.quotient_genus == mc.invariants.genus + 1 for mc in ctx.catalog)


@_check("petrie_lengths")
def _(ctx, f):
    return sorted({mc.invariants.r for mc in ctx.catalog})


@_check("types")
def _(ctx, f):
    return _multiset(f"{{{mc.invariants.p},{mc.invariants.q}}}" for mc in ctx.catalog)


@_check("component_sizes")
def _(ctx, f):
    return [len(c) for c in ctx.atlas(f["ops"]).components]


@_check("edge_count")
def _(ctx, f):
    return len(ctx.atlas(f["ops"]).edges_with(f["label"]))


@_check("directed_cycle")
def _(ctx, f):
    """Length of the single directed cycle formed by the arcs of one label, else None."""
    g = ctx.atlas(f["ops"])
    arcs = {e.src: e.dst for e in g.edges_with(f["label"])}
    if not arcs or len(arcs) != len(set(arcs.values())):
        return None
    start = next(iter(arcs))
    v, n = arcs[start], 1
    while v != start and v in arcs:
        v, n = arcs[v], n + 1
    return n if v == start and n == len(arcs) else None


@_check("ops_coincide")
def _(ctx, f):
    g = ctx.atlas(f["ops"])
    a, b = f["labels"]
    return {(e.src, e.dst) for e in g.edges_with(a)} == {(e.src, e.dst) for e in g.edges_with(b)}


@_check("op_fixes_all")
def _(ctx, f):
    op = parse_op(f["op"])
    cat = ctx.catalog
    return all(cat.classify(op(mc.triple)) == mc.id for mc in cat if op.applicable(mc.triple))


@_check("op_transposes")
def _(ctx, f):
    """The op swaps the unique maps of two given types."""
    op = parse_op(f["op"])
    cat = ctx.catalog
    ids = []
    for p, q in f["types"]:
        hits = [mc.id for mc in cat if mc.invariants.type == (p, q)]
        if len(hits) != 1:
            return f"type {{{p},{q}}} matches {len(hits)} maps"
        ids.append(hits[0])
    a, b = ids
    return cat.classify(op(cat[a].triple)) == b and cat.classify(op(cat[b].triple)) == a


@_check("components_respect_y_orbits")
def _(ctx, f):
    g = ctx.atlas(f["ops"])
    return all(len({g.vertices[v].y_orbit for v in c}) == 1 for c in g.components)


@_check("involution_orbits")
def _(ctx, f):
    return sum(o.useful for o in involution_orbits(ctx.group, ctx.aut))


@_check("triples")
def _(ctx, f):
    cd = ctx.group.classes
    tot = gen = 0
    for X, Y, Z in f["classes"]:
        c = count_triples(ctx.group, cd, X, Y, Z, jobs=ctx.jobs)
        tot += c.total
        gen += c.generating
    return {"total": tot, "generating": gen}


@_check("phi")
def _(ctx, f):
    method = f.get("method", "direct")
    return phi_moebius(ctx.group) if method == "moebius" else phi_direct(ctx.group, jobs=ctx.jobs)


@_check("order_of_O")
def _(ctx, f):
    method = f.get("method", "direct")
    phi = phi_moebius(ctx.group) if method == "moebius" else phi_direct(ctx.group, jobs=ctx.jobs)
    return order_of_O(ctx.group, ctx.aut, phi)


@_check("closed_form")
def _(ctx, f):
    return {"formula": psl2_even_closed_form(f["e"]), "enumerated": len(ctx.catalog)}


@_check("map_invariants")
def _(ctx, f):
    from .maps import invariants

    m = ctx.base_map(f["map"])
    inv = invariants(m, ctx.aut)
    out = {"label": inv.label(), "genus": inv.genus, "reflexibility": inv.reflexibility}
    if inv.trace is not None:
        out["trace"], out["cotrace"] = inv.trace, inv.cotrace
    return {k: out.get(k) for k in f["expected"]}


@_check("element")
def _(ctx, f):
    m = ctx.base_map(f["map"])
    return ctx.group.format_element(getattr(m, f["letter"]))


@_check("hole_length")
def _(ctx, f):
    return hole_length(ctx.base_map(f["map"]), f["j"])


@_check("word_order")
def _(ctx, f):
    return word_order(ctx.base_map(f["map"]), f["exponents"])


@_check("relators")
def _(ctx, f):
    return check_relators(ctx.base_map(f["map"]), f["relators"])


@_check("orbit_labels")
def _(ctx, f):
    base = ctx.base_map(f["map"])
    cat = ctx.catalog
    ids = [cat.classify(apply_word(base, w)) for w in f["words"]]
    return {"labels": [cat[i].label for i in ids], "distinct": len(set(ids))}


@_check("orbit_equal")
def _(ctx, f):
    base = ctx.base_map(f["map"])
    cat = ctx.catalog
    bad = [[a, b] for a, b in f["pairs"] if cat.classify(apply_word(base, a)) != cat.classify(apply_word(base, b))]
    return bad or True


@_check("dual_equals_mirror")
def _(ctx, f):
    cat = ctx.catalog
    return all(cat.classify(apply_word(mc.triple, "D")) == cat.classify(apply_word(mc.triple, "H-1")) for mc in cat)


@_check("type_census")
def _(ctx, f):
    p, q = f["type"]
    maps = [mc for mc in ctx.catalog if mc.invariants.type == (p, q)]
    return {
        "labels": _multiset(mc.label for mc in maps),
        "inner": sum(mc.invariants.reflexibility == "inner-regular" for mc in maps),
    }


@_check("hall_agrees")
def _(ctx, f):
    form = f.get("form", "commutator")
    out = []
    for mc in ctx.catalog:
        if mc.invariants.type != (3, 7):
            continue
        aut = "inner" if mc.invariants.reflexibility == "inner-regular" else "outer"
        out.append(hall_square_criterion(ctx.group, mc.triple, form=form) == aut)
    return all(out) if out else None


@_check("symmetric_witnesses")
def _(ctx, f):
    return {str(n): len(symmetric_involution_witnesses(n, seed=f.get("seed", 0))) for n in f["degrees"]}


def _compare(expected, computed) -> bool:
    if isinstance(expected, list) and isinstance(computed, list):
        return list(expected) == list(computed)
    return expected == computed


def run_suite(suite: VerificationSuite, *, group: Optional[FiniteGroup] = None, jobs: int = 1) -> list[FactResult]:
    """Check every fact of a suite; errors count as failures with diagnostics.

    ``group`` replaces the group built from the suite spec (used for negative tests).
    """
    results = []
    try:
        ctx = SuiteContext(group if group is not None else build_group(suite.group), jobs=jobs)
    except Exception as exc:  # report, do not crash the whole run
        return [FactResult(suite.name, "build_group", False, suite.group, None, error=f"{type(exc).__name__}: {exc}")]
    for f in suite.facts:
        name = f.get("name", f["check"])
        t0 = time.perf_counter()
        try:
            fn = _CHECKS[f["check"]]
            computed = fn(ctx, f)
            ok = _compare(f["expected"], computed)
            err = None
        except Exception as exc:
            computed, ok, err = None, False, f"{type(exc).__name__}: {exc}"
        res = FactResult(suite.name, name, ok, f["expected"], computed, time.perf_counter() - t0, err)
        log.info(res.line())
        results.append(res)
    return results
