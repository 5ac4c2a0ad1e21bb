"""Counting maps without orbit enumeration.

Three independent routes to |O(G)|: direct class-by-class triple counting,
Moebius inversion over the subgroup lattice, and the closed formula for
PSL2(2^e).
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .automorphism import AutGroup
from .groups import CapExceededError, ClassData, FiniteGroup, generates
from .maps import MapTriple

__all__ = [
    "TripleCount",
    "SubgroupLattice",
    "count_triples",
    "subgroup_lattice",
    "sigma",
    "phi_moebius",
    "phi_direct",
    "order_of_O",
    "psl2_even_closed_form",
    "number_moebius",
    "hall_square_criterion",
    "LATTICE_CAP",
]

log = logging.getLogger(__name__)

LATTICE_CAP = 1200


@dataclass(frozen=True)
class TripleCount:
    X: str
    Y: str
    Z: str
    total: int
    generating: int


def _class_id(cd: ClassData, c) -> int:
    return cd.index(c) if isinstance(c, str) else int(c)


def count_triples(G: FiniteGroup, cd: ClassData, X, Y, Z, *, jobs: int = 1) -> TripleCount:
    """Triples x in X, y in Y, z in Z with xyz = 1, and how many generate G.

    The total is a direct sweep over X x Y.  Generation is invariant under
    simultaneous conjugation, so it is tested with x fixed to the class
    representative of X and scaled by |X|.
    """
    xi, yi, zi = (_class_id(cd, c) for c in (X, Y, Z))
    Xs, Ys = cd.classes[xi], cd.classes[yi]
    # outer loop over the smaller class; (xy)^-1 is looked up in Z by class id
    outer, inner, x_outer = (Xs, Ys, True) if len(Xs) <= len(Ys) else (Ys, Xs, False)
    total = 0
    for a in outer:
        prod = G.mul(np.full(len(inner), a), inner) if x_outer else G.mul(inner, np.full(len(inner), a))
        total += int(np.count_nonzero(cd.class_of[G.inverse[prod]] == zi))
    x0 = int(Xs[0])
    z0 = G.inverse[G.mul(np.full(len(Ys), x0), Ys)]
    partners = Ys[cd.class_of[z0] == zi]
    if jobs > 1 and len(partners) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            flags = list(pool.map(lambda y: generates(G, [x0, int(y)]), partners))
    else:
        flags = [generates(G, [x0, int(y)]) for y in partners]
    generating = int(sum(flags)) * len(Xs)
    return TripleCount(cd.names[xi], cd.names[yi], cd.names[zi], total, generating)


# -- subgroup lattice -----------------------------------------------------------


class SubgroupLattice:
    """All subgroups of G, with the Moebius function of the lattice.

    Subgroups are stored as boolean masks, grouped into conjugacy classes;
    ``mu[i]`` is the Moebius value of ``subgroups[i]``.
    """

    def __init__(self, group: FiniteGroup, subgroups: list[np.ndarray], class_id: list[int]):
        self.group = group
        order = sorted(range(len(subgroups)), key=lambda i: (-int(subgroups[i].sum()), subgroups[i].tobytes()))
        self.subgroups = [subgroups[i] for i in order]
        self.class_id = [class_id[i] for i in order]
        self.orders = [int(s.sum()) for s in self.subgroups]
        self._bits = [int.from_bytes(np.packbits(s, bitorder="little").tobytes(), "little") for s in self.subgroups]
        self.mu = self._moebius()

    def __len__(self) -> int:
        return len(self.subgroups)

    def contains(self, i: int, j: int) -> bool:
        """subgroups[j] <= subgroups[i]."""
        return self._bits[i] & self._bits[j] == self._bits[j]

    def _moebius(self) -> list[int]:
        # subgroups are sorted by decreasing order, so supergroups come first;
        # mu is constant on conjugacy classes, compute it once per class
        mu: list[Optional[int]] = [None] * len(self.subgroups)
        by_class: dict[int, int] = {}
        for i in range(len(self.subgroups)):
            cid = self.class_id[i]
            if cid in by_class:
                mu[i] = by_class[cid]
                continue
            if i == 0:
                val = 1
            else:
                bi = self._bits[i]
                val = -sum(mu[k] for k in range(i) if self.orders[k] > self.orders[i] and self._bits[k] & bi == bi)
            by_class[cid] = val
            mu[i] = val
        return [int(v) for v in mu]

    def intersection_closed(self) -> bool:
        known = set(self._bits)
        return all((a & b) in known for a in self._bits for b in self._bits)

    def moebius_identity_holds(self) -> bool:
        """mu(G) = 1 and sum_{K >= H} mu(K) = 0 for every proper H."""
        if self.mu[0] != 1:
            return False
        for i in range(1, len(self)):
            bi = self._bits[i]
            s = sum(self.mu[k] for k in range(len(self)) if self._bits[k] & bi == bi)
            if s != 0:
                return False
        return True


def _conjugates(G: FiniteGroup, mask: np.ndarray) -> list[np.ndarray]:
    els = np.flatnonzero(mask)
    seen = set()
    out = []
    for g in range(G.order):
        conj = G.conj(els, np.full(len(els), g))
        m = np.zeros(G.order, dtype=bool)
        m[conj] = True
        key = m.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def subgroup_lattice(G: FiniteGroup, *, cap: int = LATTICE_CAP) -> SubgroupLattice:
    """All subgroups by joining class representatives with cyclic subgroups.

    Starting from the cyclic subgroups, each new conjugacy class representative
    H is joined with every cyclic subgroup not inside H; new joins bring in
    their whole conjugacy class.  Every subgroup is a chain of such joins, so
    the fixpoint is the full lattice.
    """
    if G.order > cap:
        raise CapExceededError(f"subgroup lattice of {G.spec} (order {G.order}) above cap {cap}")
    n = G.order
    cyclic: dict[bytes, int] = {}
    for g in range(n):
        m = np.zeros(n, dtype=bool)
        m[_powers(G, g)] = True
        cyclic.setdefault(m.tobytes(), g)
    cyc_items = sorted(cyclic.items(), key=lambda kv: int(G.orders[kv[1]]))

    all_subs: dict[bytes, int] = {}
    masks: list[np.ndarray] = []
    class_of: list[int] = []
    gens_of: dict[int, list[int]] = {}
    queue: list[int] = []

    def add_class(mask: np.ndarray, gens: list[int]) -> None:
        cid = len(gens_of)
        gens_of[cid] = gens
        for c in _conjugates(G, mask):
            all_subs[c.tobytes()] = len(masks)
            masks.append(c)
            class_of.append(cid)
        queue.append(cid)

    trivial = np.zeros(n, dtype=bool)
    trivial[0] = True
    add_class(trivial, [])
    for key, g in cyc_items:
        if key not in all_subs:
            add_class(np.frombuffer(key, dtype=bool).copy(), [g])
    rep_mask = {}
    for idx, cid in enumerate(class_of):
        rep_mask.setdefault(cid, masks[idx])
    while queue:
        cid = queue.pop(0)
        H = rep_mask[cid]
        for key, g in cyc_items:
            if H[g]:
                continue
            gens = gens_of[cid] + [g]
            K = G.closure(gens)
            kk = K.tobytes()
            if kk in all_subs:
                continue
            add_class(K, gens)
            rep_mask[len(gens_of) - 1] = K
    log.debug("%s: %d subgroups in %d classes", G.spec, len(masks), len(gens_of))
    return SubgroupLattice(G, masks, class_of)


def _powers(G: FiniteGroup, g: int) -> np.ndarray:
    out = [0]
    h = g
    while h != 0:
        out.append(h)
        h = int(G.mul(h, g))
    return np.array(out)


def sigma(G: FiniteGroup, H: Optional[np.ndarray] = None) -> int:
    """|H| (number of involutions in H + 1); pairs (x, y) in H with y^2 = 1."""
    if H is None:
        H = np.ones(G.order, dtype=bool)
    els = np.flatnonzero(H)
    return len(els) * (int(np.count_nonzero(G.orders[els] == 2)) + 1)


def phi_moebius(G: FiniteGroup, lattice: Optional[SubgroupLattice] = None) -> int:
    """sum over subgroups H of mu(H) sigma(H)."""
    L = lattice if lattice is not None else subgroup_lattice(G)
    return int(sum(mu * sigma(G, H) for mu, H in zip(L.mu, L.subgroups) if mu))


def phi_direct(G: FiniteGroup, *, jobs: int = 1) -> int:
    """Generating pairs (x, y) with y^2 = 1, y = 1 included, by direct sweep.

    Generation is conjugation invariant, so y runs over class representatives
    and each count is scaled by the class size.
    """
    cd = G.classes
    total = 0
    for ci, cls in enumerate(cd.classes):
        y = int(cls[0])
        if G.orders[y] > 2:
            continue
        xs = range(G.order)
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                c = sum(pool.map(lambda x: generates(G, [x, y]), xs))
        else:
            c = sum(generates(G, [x, y]) for x in xs)
        total += int(c) * len(cls)
    return total


def order_of_O(G: FiniteGroup, A: AutGroup, phi: int) -> int:
    """phi / |Aut G|; the division must be exact."""
    if phi % A.order:
        raise ArithmeticError(f"phi={phi} is not divisible by |Aut G|={A.order}")
    return phi // A.order


def phi_involutory(G: FiniteGroup, phi: int) -> int:
    """phi minus the pairs with y = 1 (which generate only when G is cyclic)."""
    cyclic_gens = int(np.count_nonzero(G.orders == G.order))
    return phi - cyclic_gens


def number_moebius(n: int) -> int:
    if n < 1:
        raise ValueError("Moebius function needs n >= 1")
    res, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            res = -res
        k += 1
    if n > 1:
        res = -res
    return res


def psl2_even_closed_form(e: int) -> int:
    """|O(PSL2(2^e))| = (1/e) sum_{f | e} mu(e/f) (2^f - 1)(2^f - 2)."""
    if e < 2:
        raise ValueError("need e >= 2")
    s = sum(number_moebius(e // f) * (2**f - 1) * (2**f - 2) for f in range(1, e + 1) if e % f == 0)
    if s % e:
        raise ArithmeticError(f"closed-form sum {s} not divisible by {e}")  # pragma: no cover
    return s // e


def _lift(G: FiniteGroup, i: int) -> np.ndarray:
    return np.asarray(G.payload[i], dtype=np.int64).reshape(2, 2)


def _matmul(F, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    out = np.empty((2, 2), dtype=np.int64)
    for i in range(2):
        for j in range(2):
            out[i, j] = F.add[F.mul[P[i, 0], Q[0, j]], F.mul[P[i, 1], Q[1, j]]]
    return out


def _adjugate(F, P: np.ndarray) -> np.ndarray:
    # inverse of a determinant-one matrix
    return np.array([[P[1, 1], F.neg[P[0, 1]]], [F.neg[P[1, 0]], P[0, 0]]], dtype=np.int64)


def order7_lift_trace(G: FiniteGroup, x: int) -> int:
    """Trace of the SL2 lift A of x with A^7 = I (x of order 7 in PSL2)."""
    F = G.field
    A = _lift(G, x)
    P = A
    for _ in range(6):
        P = _matmul(F, P, A)
    tr = int(F.add[A[0, 0], A[1, 1]])
    if P[0, 0] == 1 and P[1, 1] == 1 and P[0, 1] == 0 and P[1, 0] == 0:
        return tr
    return int(F.neg[tr])


def commutator_trace(G: FiniteGroup, x: int, y: int) -> int:
    """tr(A B A^-1 B^-1) for SL2 lifts A, B; independent of the lift signs."""
    F = G.field
    A, B = _lift(G, x), _lift(G, y)
    C = _matmul(F, _matmul(F, A, B), _matmul(F, _adjugate(F, A), _adjugate(F, B)))
    return int(F.add[C[0, 0], C[1, 1]])


def hall_square_criterion(G: FiniteGroup, m: MapTriple, *, form: str = "commutator") -> str:
    """inner / outer for a type {3,7} map on PSL2(q) from a square test in GF(q).

    ``form="commutator"`` tests 2 - tr[x, y] (= 3 - tau^2 for a Hurwitz
    triple), which agrees with the automorphism-based classification.
    ``form="cubic"`` tests 3 - tau^3, tau the trace of the order-7 lift of x;
    it is kept for comparison and does not agree in general.
    """
    if G.kind not in ("psl2", "sl2") or G.field is None:
        raise ValueError("criterion applies to PSL2(q)")
    if G.orders[m.x] != 7 or G.orders[m.z] != 3:
        raise ValueError(f"map has type {{{int(G.orders[m.z])},{int(G.orders[m.x])}}}, not {{3,7}}")
    F = G.field
    if form == "commutator":
        val = int(F.sub[F.from_int(2), commutator_trace(G, m.x, m.y)])
    elif form == "cubic":
        tau = order7_lift_trace(G, m.x)
        val = int(F.sub[F.from_int(3), F.mul[F.mul[tau, tau], tau]])
    else:
        raise ValueError(f"unknown form {form!r}")
    return "inner" if F.is_square(val) else "outer"


# -- useful involutions of symmetric groups ---------------------------------------


@dataclass(frozen=True)
class InvolutionWitness:
    transpositions: int
    y: tuple[int, ...]  # images, 0-based
    x: tuple[int, ...]


def symmetric_involution_witnesses(n: int, *, seed: int = 0, tries: int = 2000) -> list[InvolutionWitness]:
    """For each involution class of S_n, a partner x with <x, y> = S_n.

    y is (0 1)(2 3)... with t transpositions; x is drawn from a seeded random
    stream and accepted once the generated group has order n!.  Raises
    LookupError if some class has no witness within ``tries`` draws.
    """
    from math import factorial

    from sympy.combinatorics import Permutation, PermutationGroup

    rng = np.random.default_rng(seed)
    target = factorial(n)
    out = []
    for t in range(1, n // 2 + 1):
        y = list(range(n))
        for k in range(t):
            y[2 * k], y[2 * k + 1] = 2 * k + 1, 2 * k
        py = Permutation(y)
        for _ in range(tries):
            x = [int(v) for v in rng.permutation(n)]
            px = Permutation(x)
            if px.is_even and py.is_even:
                continue
            if PermutationGroup([px, py]).order() == target:
                out.append(InvolutionWitness(t, tuple(y), tuple(x)))
                break
        else:
            raise LookupError(f"no generating partner found for t={t} in S_{n}")
    return out
