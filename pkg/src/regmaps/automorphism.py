"""Automorphism groups as permutations of element indices.

``Aut(G)`` is stored as a transversal of ``Inn(G)``: every automorphism is
``h -> g * beta(h) * g^-1`` for one transversal row ``beta`` and some g.
This keeps orbit sweeps at ``|Out| * |G|`` vectorized lookups instead of
materializing all of ``Aut(G)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .groups import CapExceededError, FiniteGroup, _MatrixBackend, _PermBackend, generates

__all__ = [
    "Automorphism",
    "AutGroup",
    "compute_aut",
    "is_inner",
    "pair_orbit_canon",
    "involution_orbits",
    "InvolutionOrbit",
    "GENERIC_AUT_CAP",
]

log = logging.getLogger(__name__)

GENERIC_AUT_CAP = 1200


@dataclass(frozen=True, eq=False)
class Automorphism:
    perm: np.ndarray
    inner: bool
    witness: Optional[int] = None

    def __call__(self, g):
        return self.perm[g]

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.perm.tobytes())


class AutGroup:
    """Aut(G) = Inn(G) . transversal."""

    def __init__(self, group: FiniteGroup, transversal: np.ndarray, source: str):
        self.group = group
        self.transversal = np.asarray(transversal, dtype=np.int64)
        self.transversal.setflags(write=False)
        self.source = source
        self.center_size = len(group.center)
        self.inner_size = group.order // self.center_size
        self.order = len(self.transversal) * self.inner_size

    def __repr__(self) -> str:
        return f"AutGroup({self.group.spec!r}, order={self.order}, out={len(self.transversal)})"

    def __len__(self) -> int:
        return self.order

    @property
    def outer_order(self) -> int:
        return len(self.transversal)

    def images(self, h: int) -> np.ndarray:
        """alpha(h) for every (transversal row, conjugator) pair; shape (|Out|, |G|)."""
        G = self.group
        g = np.arange(G.order)
        return np.stack([G.conj(np.full(G.order, int(beta[h])), g) for beta in self.transversal])

    def automorphism(self, beta_index: int, g: int) -> Automorphism:
        G = self.group
        beta = self.transversal[beta_index]
        perm = G.conj(beta, np.full(G.order, g))
        inner = beta_index == 0
        return Automorphism(perm, inner, g if inner else None)

    def __iter__(self) -> Iterator[Automorphism]:
        """Distinct automorphisms (conjugators taken modulo the center)."""
        G = self.group
        seen_cosets = np.zeros(G.order, dtype=bool)
        reps = []
        for g in range(G.order):
            if not seen_cosets[g]:
                reps.append(g)
                seen_cosets[G.mul(np.full(len(G.center), g), G.center)] = True
        for b in range(len(self.transversal)):
            for g in reps:
                yield self.automorphism(b, g)

    def generators(self) -> list[Automorphism]:
        G = self.group
        out = [self.automorphism(0, g) for g in G.gens]
        out += [self.automorphism(b, 0) for b in range(1, len(self.transversal))]
        return out


def _is_hom(G: FiniteGroup, perm: np.ndarray) -> bool:
    ar = np.arange(G.order)
    for s in G.gens:
        if not np.array_equal(perm[G.mul(ar, s)], G.mul(perm, perm[s])):
            return False
    return len(np.unique(perm)) == G.order


def _inner_witness(G: FiniteGroup, perm: np.ndarray) -> Optional[int]:
    """Some g with perm(h) = g h g^-1 for all h, or None."""
    ok = np.ones(G.order, dtype=bool)
    for s in G.gens:
        ok &= G.conj_all(s) == perm[s]
        if not ok.any():
            return None
    hits = np.flatnonzero(ok)
    return int(hits[0]) if len(hits) else None


def is_inner(A: AutGroup, alpha: Automorphism | np.ndarray) -> tuple[bool, Optional[int]]:
    """Whether alpha is conjugation by an element, with a witness if so."""
    perm = alpha.perm if isinstance(alpha, Automorphism) else np.asarray(alpha)
    w = _inner_witness(A.group, perm)
    return w is not None, w


def _coset_closure(G: FiniteGroup, outer_gens: list[np.ndarray]) -> np.ndarray:
    """Transversal of Inn(G) in <Inn(G), outer_gens>."""
    ident = np.arange(G.order)
    reps = [ident]
    inv_reps = [ident]
    queue = [ident]
    while queue:
        r = queue.pop(0)
        for s in outer_gens:
            cand = s[r]  # apply r, then s
            if any(_inner_witness(G, cand[ri]) is not None for ri in inv_reps):
                continue
            reps.append(cand)
            inv = np.empty_like(cand)
            inv[cand] = ident
            inv_reps.append(inv)
            queue.append(cand)
    return np.array(reps)


def _perm_from_payload_map(G: FiniteGroup, fn) -> np.ndarray:
    return G.lookup(fn(G.payload.copy()))


def _family_outer_generators(G: FiniteGroup) -> Optional[list[np.ndarray]]:
    kind, prm = G.kind, G.params
    if kind == "sym" and prm["n"] != 6:
        return []
    if kind == "alt" and prm["n"] != 6:
        n = prm["n"]
        if n < 3:
            return []
        tau = list(range(n))
        tau[0], tau[1] = 1, 0
        tau = np.array(tau)
        # conjugation by a transposition: i -> tau(p(tau(i)))
        return [_perm_from_payload_map(G, lambda P: tau[P[:, tau]])]
    if kind in ("psl2", "sl2", "pgl2"):
        F = G.field
        gens = []
        if F.p != 2 and kind != "pgl2":
            w = F.primitive_element()
            winv = int(F.inv[w])

            def diag(P):
                # diag(w,1) A diag(w,1)^-1
                a, b, c, d = P.T
                return np.stack([a, F.mul[b, w], F.mul[c, winv], d], axis=1)

            gens.append(_perm_from_payload_map(G, diag))
        if F.e > 1:
            frob = np.array([F.pow(x, F.p) for x in range(F.q)])
            gens.append(_perm_from_payload_map(G, lambda P: frob[P]))
        return gens
    if kind == "agl1":
        F = G.field
        if F.e == 1:
            return []
        frob = np.array([F.pow(x, F.p) for x in range(F.q)])
        return [_perm_from_payload_map(G, lambda P: frob[P])]
    return None


def _generic_automorphisms(G: FiniteGroup) -> list[np.ndarray]:
    """All automorphisms sending the first generator to a class representative.

    Images of the generators are searched among elements with matching order
    and class size; each assignment is extended along a breadth-first word
    tree and kept if it is a bijective homomorphism.  Every Inn-coset of
    Aut(G) meets the result.
    """
    gens = list(G.gens)
    cd = G.classes
    sizes = np.array(cd.sizes)[cd.class_of]
    sig = G.orders * (G.order + 1) + sizes

    # breadth-first word tree, one level per word length
    n = G.order
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    levels = []
    frontier = np.array([0])
    while len(frontier):
        lv_par, lv_slot, lv_el = [], [], []
        for k, s in enumerate(gens):
            nxt = G.mul(frontier, s)
            fresh = ~seen[nxt]
            nxt_u, first = np.unique(nxt[fresh], return_index=True)
            seen[nxt_u] = True
            lv_el.append(nxt_u)
            lv_par.append(frontier[fresh][first])
            lv_slot.append(np.full(len(nxt_u), k))
        el = np.concatenate(lv_el)
        if not len(el):
            break
        levels.append((el, np.concatenate(lv_par), np.concatenate(lv_slot)))
        frontier = el

    def word_sig(imgs):
        # orders of short words in each pair of generator images
        out = []
        for j in range(len(imgs)):
            for i in range(j):
                a, b = imgs[i], imgs[j]
                out.append(int(G.orders[G.mul(a, b)]))
                out.append(int(G.orders[G.mul(a, G.inverse[b])]))
                out.append(int(G.orders[G.commutator(a, b)]))
        return out

    target = word_sig(gens)
    reps = set(cd.representatives)
    cands = []
    for k, s in enumerate(gens):
        pool = np.flatnonzero(sig == sig[s])
        if k == 0:
            pool = np.array([p for p in pool if int(p) in reps])
        cands.append(pool)

    found = []

    def extend(imgs):
        img = np.full(n, -1)
        img[0] = 0
        gimg = np.array(imgs)
        for el, par, sl in levels:
            img[el] = G.mul(img[par], gimg[sl])
        return img

    def search(prefix):
        k = len(prefix)
        if k == len(gens):
            img = extend(prefix)
            if _is_hom(G, img):
                found.append(img)
            return
        for c in cands[k]:
            trial = prefix + [int(c)]
            sub = word_sig(trial)
            if sub != target[: len(sub)]:
                continue
            search(trial)

    search([])
    return found


def _transversal_from_list(G: FiniteGroup, auts: list[np.ndarray]) -> np.ndarray:
    ident = np.arange(G.order)
    reps = [ident]
    inv_reps = [ident]
    for a in auts:
        if any(_inner_witness(G, a[ri]) is not None for ri in inv_reps):
            continue
        reps.append(a)
        inv = np.empty_like(a)
        inv[a] = ident
        inv_reps.append(inv)
    return np.array(reps)


@lru_cache(maxsize=32)
def _compute_aut_cached(G: FiniteGroup, generic_cap: int) -> AutGroup:
    outer = _family_outer_generators(G)
    if outer is not None:
        return AutGroup(G, _coset_closure(G, outer), "family")
    if G.order > generic_cap:
        raise CapExceededError(f"generic Aut search for {G.spec} (order {G.order}) above cap {generic_cap}")
    auts = _generic_automorphisms(G)
    return AutGroup(G, _transversal_from_list(G, auts), "generic")


def compute_aut(G: FiniteGroup, *, generic_cap: int = GENERIC_AUT_CAP, force_generic: bool = False) -> AutGroup:
    """Full automorphism group of G.

    Symmetric, alternating (degree != 6), PSL2/SL2/PGL2 and AGL1 groups use
    their known outer automorphisms (diagonal and field automorphisms);
    anything else falls back to a brute-force search of generator images.
    """
    if force_generic:
        if G.order > generic_cap:
            raise CapExceededError(f"generic Aut search for {G.spec} above cap {generic_cap}")
        return AutGroup(G, _transversal_from_list(G, _generic_automorphisms(G)), "generic")
    return _compute_aut_cached(G, generic_cap)


def pair_orbit_canon(A: AutGroup, x: int, y: int) -> tuple[int, int]:
    """Lexicographically least (alpha(x), alpha(y)) over Aut(G)."""
    G = A.group
    n = G.order
    g = np.arange(n)
    best = None
    for beta in A.transversal:
        xs = G.conj(np.full(n, int(beta[x])), g)
        ys = G.conj(np.full(n, int(beta[y])), g)
        k = int(np.min(xs.astype(np.int64) * n + ys))
        if best is None or k < best:
            best = k
    return divmod(best, n)


def stabilizer_orbit(A: AutGroup, y: int, x: int) -> np.ndarray:
    """Orbit of x under the stabilizer of y in Aut(G)."""
    G = A.group
    n = G.order
    g = np.arange(n)
    out = []
    for beta in A.transversal:
        ys = G.conj(np.full(n, int(beta[y])), g)
        gs = g[ys == y]
        if len(gs):
            out.append(G.conj(np.full(len(gs), int(beta[x])), gs))
    return np.unique(np.concatenate(out))


@dataclass(frozen=True)
class InvolutionOrbit:
    representative: int
    members: np.ndarray
    useful: bool
    witness: Optional[int]


def _useful_witness(G: FiniteGroup, y: int) -> Optional[int]:
    # try high-order elements first; generating partners tend to have large order
    for x in np.lexsort((np.arange(G.order), -G.orders)):
        if generates(G, [int(x), y]):
            return int(x)
    return None


def involution_orbits(G: FiniteGroup, A: AutGroup, prefer: Optional[int] = None) -> list[InvolutionOrbit]:
    """Aut(G)-orbits on involutions, each flagged useful iff it lies in a generating pair.

    ``prefer`` names an involution to use as representative of its orbit.
    """
    inv = G.involutions
    done = np.zeros(G.order, dtype=bool)
    out = []
    for y in inv:
        if done[y]:
            continue
        members = np.unique(A.images(int(y)).ravel())
        done[members] = True
        rep = int(prefer) if prefer is not None and prefer in set(members.tolist()) else int(members[0])
        w = _useful_witness(G, rep)
        out.append(InvolutionOrbit(rep, members, w is not None, w))
    return out


def standard_involution(G: FiniteGroup) -> Optional[int]:
    """[[0,1],[-1,0]] for matrix groups, else None."""
    if not isinstance(G.backend, _MatrixBackend):
        return None
    F = G.field
    try:
        return G.index([0, 1, int(F.neg[1]), 0])
    except KeyError:
        return None
