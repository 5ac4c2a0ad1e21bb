"""Enumeration of O(G) and the graph of duality / hole operations on it."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .automorphism import AutGroup, involution_orbits, pair_orbit_canon, standard_involution
from .groups import FiniteGroup, generates
from .maps import MapInvariants, MapTriple, invariants, make_map
from .ops import MapOperation, parse_ops

__all__ = [
    "MapClass",
    "MapCatalog",
    "Edge",
    "AtlasGraph",
    "enumerate_maps",
    "catalog",
    "build_atlas",
    "components",
    "export",
    "load_json",
    "DEFAULT_OPS",
]

log = logging.getLogger(__name__)

DEFAULT_OPS = "D,H2,H3,H-1"


@dataclass(frozen=True)
class MapClass:
    id: int
    canon: tuple[int, int]
    invariants: MapInvariants
    triple: MapTriple
    y_orbit: int

    @property
    def label(self) -> str:
        return self.invariants.label()


class MapCatalog:
    """The maps of O(G) plus a fast lookup from triples to map ids."""

    def __init__(self, group: FiniteGroup, aut: AutGroup, maps: list[MapClass],
                 x_lookup: dict[int, np.ndarray], complete: bool = True):
        self.group = group
        self.aut = aut
        self.maps = maps
        self.complete = complete
        self._x_lookup = x_lookup
        self._by_canon = {m.canon: m.id for m in maps}

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __getitem__(self, i: int) -> MapClass:
        return self.maps[i]

    def classify(self, m: MapTriple) -> int:
        """Id of the map class containing a triple."""
        tab = self._x_lookup.get(m.y)
        if tab is not None and tab[m.x] >= 0:
            return int(tab[m.x])
        c = pair_orbit_canon(self.aut, m.x, m.y)
        try:
            return self._by_canon[c]
        except KeyError:
            raise KeyError(f"triple {m} is not in the catalog") from None

    def classify_canonical(self, m: MapTriple) -> int:
        return self._by_canon[pair_orbit_canon(self.aut, m.x, m.y)]


def _stabilizer_conjugators(A: AutGroup, y: int) -> list[np.ndarray]:
    G = A.group
    n = G.order
    g = np.arange(n)
    return [g[G.conj(np.full(n, int(beta[y])), g) == y] for beta in A.transversal]


def _orbit_of(A: AutGroup, stab: list[np.ndarray], x: int) -> np.ndarray:
    G = A.group
    parts = [G.conj(np.full(len(gs), int(beta[x])), gs) for beta, gs in zip(A.transversal, stab) if len(gs)]
    return np.unique(np.concatenate(parts))


def catalog(
    G: FiniteGroup,
    A: AutGroup,
    *,
    jobs: int = 1,
    valency: Optional[int] = None,
    face: Optional[int] = None,
) -> MapCatalog:
    """One MapClass per Aut(G)-orbit of generating pairs (x, y) with y of order 2.

    For each Aut-orbit of involutions a representative y is fixed (the
    standard involution for matrix groups when possible); x then runs over
    orbits of the stabilizer of y, testing one generation per orbit.
    ``valency`` / ``face`` restrict the sweep to one type.
    """
    y_std = standard_involution(G)
    orbits = involution_orbits(G, A, prefer=y_std)
    found: list[tuple[int, int, int]] = []  # (y-orbit, y, x)
    lookups: dict[int, np.ndarray] = {}
    orbit_members: dict[tuple[int, int], np.ndarray] = {}
    for yi, orb in enumerate(orbits):
        if not orb.useful:
            continue
        y = orb.representative
        stab = _stabilizer_conjugators(A, y)
        cand = np.ones(G.order, dtype=bool)
        if valency is not None:
            cand &= G.orders == valency
        if face is not None:
            z = G.inverse[G.mul(np.arange(G.order), y)]
            cand &= G.orders[z] == face
        visited = ~cand
        reps = []
        for x in np.flatnonzero(cand):
            if visited[x]:
                continue
            orb_x = _orbit_of(A, stab, int(x))
            visited[orb_x] = True
            reps.append((int(orb_x[0]), orb_x))
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                gen = list(pool.map(lambda r: generates(G, [r[0], y]), reps))
        else:
            gen = [generates(G, [r[0], y]) for r in reps]
        for (x0, members), ok in zip(reps, gen):
            if ok:
                found.append((yi, y, x0))
                orbit_members[(y, x0)] = members
    classes = []
    for yi, y, x in found:
        m = make_map(G, x, y, check=False)
        classes.append((pair_orbit_canon(A, x, y), invariants(m, A), m, yi))
    classes.sort(key=lambda c: (c[1].q, c[1].p, c[1].r, c[1].genus, c[0]))
    maps = []
    for i, (canon, inv, m, yi) in enumerate(classes):
        maps.append(MapClass(i, canon, inv, m, yi))
        tab = lookups.setdefault(m.y, np.full(G.order, -1, dtype=np.int64))
        tab[orbit_members[(m.y, m.x)]] = i
    complete = valency is None and face is None
    return MapCatalog(G, A, maps, lookups, complete)


def enumerate_maps(G: FiniteGroup, A: AutGroup, **kw) -> list[MapClass]:
    return catalog(G, A, **kw).maps


@dataclass(frozen=True, order=True)
class Edge:
    src: int
    dst: int
    label: str
    directed: bool


@dataclass
class AtlasGraph:
    group: FiniteGroup
    aut_order: int
    ops: list[str]
    vertices: list[MapClass]
    edges: list[Edge]
    components: list[list[int]] = field(default_factory=list)

    def edges_with(self, label: str) -> list[Edge]:
        return [e for e in self.edges if e.label == label]

    def neighbours(self, v: int, label: str) -> list[int]:
        out = []
        for e in self.edges_with(label):
            if e.src == v:
                out.append(e.dst)
            elif not e.directed and e.dst == v:
                out.append(e.src)
        return out


def build_atlas(
    G: FiniteGroup,
    A: AutGroup,
    ops: Sequence[MapOperation] | str = DEFAULT_OPS,
    *,
    cat: Optional[MapCatalog] = None,
    jobs: int = 1,
) -> AtlasGraph:
    """Vertices are the maps of O(G); one edge per vertex and applicable operation.

    Loops are dropped; D and H_-1 edges are undirected and stored once.
    """
    if isinstance(ops, str):
        ops = parse_ops(ops)
    if not ops:
        raise ValueError("need at least one operation")
    if cat is None:
        cat = catalog(G, A, jobs=jobs)
    edges: set[Edge] = set()
    for mc in cat:
        for op in ops:
            if not op.applicable(mc.triple):
                continue
            dst = cat.classify(op(mc.triple))
            if dst == mc.id:
                continue
            if op.undirected:
                a, b = sorted((mc.id, dst))
                edges.add(Edge(a, b, op.label, False))
            else:
                edges.add(Edge(mc.id, dst, op.label, True))
    g = AtlasGraph(G, A.order, [op.label for op in ops], list(cat.maps), sorted(edges))
    g.components = components(g)
    return g


def components(g: AtlasGraph) -> list[list[int]]:
    """Connected components (edges taken as undirected), largest first."""
    parent = list(range(len(g.vertices)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for e in g.edges:
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(len(g.vertices)):
        groups.setdefault(find(v), []).append(v)
    comps = sorted(groups.values(), key=lambda c: (-len(c), c[0]))
    for c in comps:
        kinds = {g.vertices[v].invariants.reflexibility for v in c}
        yorb = {g.vertices[v].y_orbit for v in c}
        if len(kinds) != 1 or len(yorb) != 1:
            raise RuntimeError(f"component {c} mixes reflexibility {kinds} or y-orbits {yorb}")
    return comps


def component_summary(g: AtlasGraph) -> list[dict]:
    out = []
    for c in g.components:
        v0 = g.vertices[c[0]]
        out.append({"maps": c, "reflexibility": v0.invariants.reflexibility, "y_orbit": v0.y_orbit})
    return out


_DOT_STYLE = {"D": "dashed", "H-1": "dotted"}


def export(g: AtlasGraph, fmt: str = "json") -> bytes:
    """Serialize as ``json`` or ``dot``; byte-stable for a fixed graph."""
    if fmt == "json":
        maps = []
        for mc in g.vertices:
            inv = mc.invariants
            rec = {"id": mc.id, "p": inv.p, "q": inv.q, "r": inv.r, "genus": inv.genus,
                   "reflexibility": inv.reflexibility}
            if inv.trace is not None:
                rec["trace"] = inv.trace
                rec["cotrace"] = inv.cotrace
            rec["x_index"] = mc.triple.x
            rec["y_index"] = mc.triple.y
            maps.append(rec)
        doc = {
            "group": g.group.spec,
            "aut_order": g.aut_order,
            "ops": list(g.ops),
            "maps": maps,
            "edges": [{"src": e.src, "dst": e.dst, "label": e.label, "directed": e.directed} for e in g.edges],
            "components": [list(c) for c in g.components],
            "version": __version__,
        }
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "dot":
        lines = ["digraph atlas {"]
        if g.vertices:
            lines.append(f'  label="O({g.group.spec}) ops={",".join(g.ops)}";')
        for mc in g.vertices:
            lines.append(f'  {mc.id} [label="{mc.label} g={mc.invariants.genus}"];')
        for e in g.edges:
            if e.directed:
                lines.append(f'  {e.src} -> {e.dst} [label="{e.label}"];')
            else:
                style = _DOT_STYLE.get(e.label, "solid")
                lines.append(f'  {e.src} -> {e.dst} [dir=none, style={style}, label="{e.label}"];')
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown export format {fmt!r}")


def load_json(data: bytes | str) -> dict:
    """Parse an exported atlas; vertex and edge records come back as sets of tuples."""
    doc = json.loads(data)
    doc["vertex_set"] = {tuple(sorted(m.items())) for m in doc["maps"]}
    doc["edge_set"] = {(e["src"], e["dst"], e["label"], e["directed"]) for e in doc["edges"]}
    return doc
