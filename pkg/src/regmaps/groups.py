"""Materialized finite groups.

Every group is an indexed element table: element ``0`` is the identity and
the others are sorted by a canonical payload key (permutation images, matrix
entries, affine coefficients...).  Products are looked up in a Cayley table
when the group is small enough, otherwise computed on payloads and mapped
back to indices.  All elementwise helpers accept numpy index arrays.

Products of permutations compose left to right: ``(a * b)(i) = b(a(i))``.
"""
from __future__ import annotations

import itertools
import logging
import math
import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Optional, Sequence

import numpy as np

from .field import FieldError, FiniteField, make_field, prime_power

__all__ = [
    "FiniteGroup",
    "ClassData",
    "GroupSpecError",
    "CapExceededError",
    "build_group",
    "element_order",
    "conjugacy_classes",
    "generates",
    "trace_pair",
    "ORDER_CAP",
    "TABLE_CAP",
]

log = logging.getLogger(__name__)

ORDER_CAP = 20_000
TABLE_CAP = 6_000


class GroupSpecError(ValueError):
    """Malformed or unsupported group specification."""


class CapExceededError(RuntimeError):
    """A computation would exceed a configured size cap."""


# ---------------------------------------------------------------------------
# payload backends


class _Backend:
    width: int

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def canon(self, A: np.ndarray) -> np.ndarray:
        return A

    def key(self, A: np.ndarray) -> np.ndarray:
        base = self.base
        k = np.zeros(A.shape[0], dtype=np.int64)
        for j in range(A.shape[1]):
            k = k * base + A[:, j]
        return k


class _PermBackend(_Backend):
    def __init__(self, degree: int):
        if degree > 15:
            raise GroupSpecError("permutation degree above 15 is not supported")
        self.width = self.base = degree

    def mul(self, A, B):
        return np.take_along_axis(B, A, axis=1)


class _MatrixBackend(_Backend):
    """2x2 matrices (a, b, c, d) over a finite field; ``mode`` in sl/psl/pgl."""

    width = 4

    def __init__(self, F: FiniteField, mode: str):
        self.F = F
        self.mode = mode
        self.base = F.q

    def mul(self, A, B):
        ad, mu = self.F.add, self.F.mul
        a, b, c, d = A.T
        e, f, g, h = B.T
        out = np.stack(
            [ad[mu[a, e], mu[b, g]], ad[mu[a, f], mu[b, h]], ad[mu[c, e], mu[d, g]], ad[mu[c, f], mu[d, h]]],
            axis=1,
        )
        return self.canon(out)

    def canon(self, A):
        if self.mode == "psl" and self.F.p != 2:
            N = self.F.neg[A]
            # lexicographic min of A and -A; they first differ at the first nonzero entry
            first = np.argmax(A != 0, axis=1)
            rows = np.arange(A.shape[0])
            use_neg = N[rows, first] < A[rows, first]
            return np.where(use_neg[:, None], N, A)
        if self.mode == "pgl":
            first = np.argmax(A != 0, axis=1)
            rows = np.arange(A.shape[0])
            s = self.F.inv[A[rows, first]]
            return self.F.mul[A, s[:, None]]
        return A

    def det(self, A):
        F = self.F
        return F.sub[F.mul[A[:, 0], A[:, 3]], F.mul[A[:, 1], A[:, 2]]]


class _AffineBackend(_Backend):
    """Maps t -> a t + b as (a, b); the left factor acts first."""

    width = 2

    def __init__(self, F: FiniteField):
        self.F = F
        self.base = F.q

    def mul(self, A, B):
        mu, ad = self.F.mul, self.F.add
        return np.stack([mu[A[:, 0], B[:, 0]], ad[mu[B[:, 0], A[:, 1]], B[:, 1]]], axis=1)


class _DihedralBackend(_Backend):
    """r^k s^f as (k, f) with s r s = r^-1."""

    width = 2

    def __init__(self, n: int):
        self.n = n
        self.base = max(n, 2)

    def mul(self, A, B):
        sign = np.where(A[:, 1] == 1, -1, 1)
        return np.stack([(A[:, 0] + sign * B[:, 0]) % self.n, A[:, 1] ^ B[:, 1]], axis=1)


class _CyclicBackend(_Backend):
    width = 1

    def __init__(self, n: int):
        self.n = n
        self.base = n

    def mul(self, A, B):
        return (A + B) % self.n


# ---------------------------------------------------------------------------


class FiniteGroup:
    """An immutable, fully materialized finite group.

    Attributes of interest: ``order``, ``payload`` (one row per element),
    ``inverse``, ``orders`` (element orders), ``gens`` (a small generating
    set), ``kind`` and ``params`` describing the family, ``field`` for
    matrix and affine groups.
    """

    def __init__(
        self,
        backend: _Backend,
        payload: np.ndarray,
        *,
        kind: str,
        spec: str,
        params: Optional[dict] = None,
        identity: Optional[Sequence[int]] = None,
        table_cap: int = TABLE_CAP,
    ):
        self.backend = backend
        self.kind = kind
        self.spec = spec
        self.params = dict(params or {})
        self.field: Optional[FiniteField] = getattr(backend, "F", None)
        payload = np.unique(np.asarray(payload, dtype=np.int64).reshape(len(payload), backend.width), axis=0)
        keys = backend.key(payload)
        order = np.argsort(keys, kind="stable")
        payload, keys = payload[order], keys[order]
        if identity is None:
            raise ValueError("identity payload required")
        id_key = backend.key(np.asarray([identity], dtype=np.int64))[0]
        pos = int(np.searchsorted(keys, id_key))
        if pos >= len(keys) or keys[pos] != id_key:
            raise ValueError("identity not among the elements")
        perm = np.r_[pos, np.arange(pos), np.arange(pos + 1, len(keys))]
        self.payload = payload[perm]
        self.payload.setflags(write=False)
        self.order = n = len(self.payload)
        self._keys = keys
        self._key_to_idx = np.argsort(perm)  # position in sorted keys -> element index
        self.table: Optional[np.ndarray] = None
        if n <= table_cap:
            self.table = self._build_table()
            self.table.setflags(write=False)
        self.inverse, self.orders = self._inverse_and_orders()
        for arr in (self.inverse, self.orders):
            arr.setflags(write=False)
        self.gens = self._small_generating_set()

    def __repr__(self) -> str:
        return f"FiniteGroup({self.spec!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    # -- lookup and arithmetic ---------------------------------------------

    def lookup(self, payload) -> np.ndarray:
        """Indices of canonicalized payload rows; raises KeyError if absent."""
        P = self.backend.canon(np.atleast_2d(np.asarray(payload, dtype=np.int64)))
        k = self.backend.key(P)
        pos = np.searchsorted(self._keys, k)
        pos = np.minimum(pos, len(self._keys) - 1)
        if not np.all(self._keys[pos] == k):
            raise KeyError("payload is not an element of this group")
        return self._key_to_idx[pos]

    def index(self, payload) -> int:
        return int(self.lookup(np.asarray(payload).reshape(1, -1))[0])

    def _build_table(self) -> np.ndarray:
        n = self.order
        T = np.empty((n, n), dtype=np.int32)
        rows = max(1, 400_000 // n)
        for start in range(0, n, rows):
            stop = min(n, start + rows)
            A = np.repeat(self.payload[start:stop], n, axis=0)
            B = np.tile(self.payload, (stop - start, 1))
            T[start:stop] = self.lookup(self.backend.mul(A, B)).reshape(stop - start, n)
        return T

    def mul(self, a, b) -> np.ndarray:
        """Elementwise product of index arrays (broadcasting)."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        if self.table is not None:
            return self.table[a, b]
        shape = a.shape
        out = self.lookup(self.backend.mul(self.payload[a.ravel()], self.payload[b.ravel()]))
        return out.reshape(shape)

    def power(self, g, k: int) -> np.ndarray:
        g = np.asarray(g)
        ords = self.orders[g]
        kk = np.mod(k, ords)
        result = np.zeros_like(g)
        base = g.copy()
        kk = np.array(kk, copy=True)
        while np.any(kk):
            odd = (kk & 1).astype(bool)
            if np.any(odd):
                result = np.where(odd, self.mul(result, base), result)
            kk >>= 1
            if np.any(kk):
                base = self.mul(base, base)
        return result

    def conj(self, h, g) -> np.ndarray:
        """g h g^-1."""
        g = np.asarray(g)
        return self.mul(self.mul(g, h), self.inverse[g])

    def conj_all(self, h: int) -> np.ndarray:
        """``g h g^-1`` for every element g, indexed by g."""
        g = np.arange(self.order)
        return self.conj(np.full(self.order, h), g)

    def commutator(self, a, b) -> np.ndarray:
        """[a, b] = a^-1 b^-1 a b."""
        inv = self.inverse
        return self.mul(self.mul(inv[a], inv[b]), self.mul(a, b))

    def word(self, letters: Sequence[tuple[int, int]]) -> int:
        """Product of ``g**k`` over (g, k) pairs."""
        r = 0
        for g, k in letters:
            r = int(self.mul(r, self.power(np.asarray(g), k)))
        return r

    # -- tables ------------------------------------------------------------

    def _inverse_and_orders(self):
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        inverse = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        prev = idx.copy()
        cur = idx.copy()
        k = 1
        pending = idx[1:]
        while len(pending):
            if k > n:
                raise RuntimeError("element order exceeds group order")  # pragma: no cover
            nxt = self.mul(cur[pending], pending)
            done = nxt == 0
            hit = pending[done]
            orders[hit] = k + 1
            inverse[hit] = cur[hit]
            cur[pending] = nxt
            pending = pending[~done]
            k += 1
        del prev
        return inverse, orders

    def closure(self, gens, *, stop_above: Optional[int] = None) -> np.ndarray:
        """Boolean mask of the subgroup generated by ``gens``.

        With ``stop_above`` the search stops early once more elements than
        that have been reached (the mask is then incomplete).
        """
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        count = 1
        frontier = np.array([0])
        while len(frontier):
            new = self.mul(frontier[:, None], gens[None, :]).ravel()
            new = np.unique(new[~mask[new]])
            mask[new] = True
            count += len(new)
            if stop_above is not None and count > stop_above:
                break
            frontier = new
        return mask

    def _small_generating_set(self) -> list[int]:
        if self.order == 1:
            return []
        cand = np.lexsort((np.arange(self.order), -self.orders))
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        while not mask.all():
            g = int(next(c for c in cand if not mask[c]))
            gens.append(g)
            mask = self.closure(gens)
        return self._shrink(gens)

    def _shrink(self, gens: list[int]) -> list[int]:
        # try to find a 2-element generating set among few candidates
        if len(gens) <= 2:
            return gens
        a = gens[0]
        for b in np.argsort(-self.orders, kind="stable")[:200]:
            if generates(self, [a, int(b)]):
                return [a, int(b)]
        return gens

    # -- element constructors ------------------------------------------------

    def from_matrix(self, m) -> int:
        """Index of a 2x2 matrix given as nested rows of field element indices."""
        if not isinstance(self.backend, _MatrixBackend):
            raise TypeError("not a matrix group")
        F = self.field
        flat = [int(v) for row in m for v in row]
        flat = [v % F.q if F.e == 1 else v for v in flat]
        return self.index(flat)

    def from_cycles(self, cycles: str) -> int:
        """Index of a permutation written in 1-based cycle notation."""
        if not isinstance(self.backend, _PermBackend):
            raise TypeError("not a permutation group")
        return self.index(parse_cycles(cycles, self.backend.width))

    def from_affine(self, a: int, b: int) -> int:
        if not isinstance(self.backend, _AffineBackend):
            raise TypeError("not an affine group")
        return self.index([a, b])

    def is_matrix(self) -> bool:
        return isinstance(self.backend, _MatrixBackend)

    def format_element(self, g: int) -> str:
        P = self.payload[g]
        if isinstance(self.backend, _PermBackend):
            return format_cycles(P)
        if isinstance(self.backend, _MatrixBackend):
            f = self.field.format
            return f"[[{f(P[0])},{f(P[1])}],[{f(P[2])},{f(P[3])}]]"
        if isinstance(self.backend, _AffineBackend):
            f = self.field.format
            return f"t->({f(P[0])})t+({f(P[1])})"
        return str(tuple(int(v) for v in P))

    @cached_property
    def center(self) -> np.ndarray:
        if not self.gens:
            return np.array([0])
        ok = np.ones(self.order, dtype=bool)
        ar = np.arange(self.order)
        for s in self.gens:
            ok &= self.mul(ar, s) == self.mul(s, ar)
        return np.flatnonzero(ok)

    @cached_property
    def involutions(self) -> np.ndarray:
        return np.flatnonzero(self.orders == 2)

    @cached_property
    def classes(self) -> "ClassData":
        return conjugacy_classes(self)


# ---------------------------------------------------------------------------
# permutation helpers


def parse_cycles(text: str, degree: Optional[int] = None) -> list[int]:
    """1-based cycle notation to a 0-based image list."""
    text = text.strip()
    if text in ("", "()", "1", "id", "e"):
        cycles: list[list[int]] = []
    else:
        if not re.fullmatch(r"(\(\s*\d+(\s*,\s*\d+)*\s*\))+", text.replace(" ", "")):
            raise GroupSpecError(f"malformed cycle notation: {text!r}")
        cycles = [[int(v) for v in c.split(",")] for c in re.findall(r"\(([^)]*)\)", text.replace(" ", ""))]
    top = max((max(c) for c in cycles), default=0)
    degree = degree if degree is not None else top
    if top > degree:
        raise GroupSpecError(f"point {top} exceeds degree {degree}")
    img = list(range(degree))
    seen: set[int] = set()
    for c in cycles:
        if len(set(c)) != len(c) or seen & set(c) or min(c) < 1:
            raise GroupSpecError(f"malformed cycle notation: {text!r}")
        seen |= set(c)
        for i, v in enumerate(c):
            img[v - 1] = c[(i + 1) % len(c)] - 1
    return img


def format_cycles(img) -> str:
    img = [int(v) for v in img]
    seen, out = set(), []
    for i in range(len(img)):
        if i in seen or img[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = img[j]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


# ---------------------------------------------------------------------------
# constructors


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapExceededError(f"{what} has order {n}, above the cap {cap}")


def _parse_int(s: str, what: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise GroupSpecError(f"bad {what}: {s!r}") from None
    return v


def _field_from(qs: str, mod: Optional[str]) -> FiniteField:
    q = _parse_int(qs, "field order")
    try:
        p, e = prime_power(q)
        modulus = None
        if mod is not None:
            modulus = [_parse_int(c, "modulus coefficient") for c in mod.split(",")]
        return make_field(p, e, modulus)
    except FieldError as exc:
        raise GroupSpecError(str(exc)) from exc


def parse_field_spec(spec: str) -> FiniteField:
    """``gf:p,e[:c0,c1,...]`` to a field."""
    m = re.fullmatch(r"gf:(\d+),(\d+)(?::([\d,]+))?", spec.strip())
    if not m:
        raise GroupSpecError(f"malformed field spec: {spec!r}")
    p, e = int(m.group(1)), int(m.group(2))
    try:
        mod = None if m.group(3) is None else [int(c) for c in m.group(3).split(",")]
        return make_field(p, e, mod)
    except FieldError as exc:
        raise GroupSpecError(str(exc)) from exc


def _matrix_group(kind: str, F: FiniteField, spec: str, cap: int, table_cap: int) -> FiniteGroup:
    q = F.q
    full = q * (q * q - 1)
    n = full // 2 if (kind == "psl2" and F.p != 2) else full
    _check_cap(n, cap, spec)
    mode = {"sl2": "sl", "psl2": "psl", "pgl2": "pgl"}[kind]
    be = _MatrixBackend(F, mode)
    grid = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64)
    det = be.det(grid)
    if mode == "pgl":
        grid = grid[det != 0]
    else:
        grid = grid[det == 1]
    grid = np.unique(be.canon(grid), axis=0)
    params = {"q": q, "p": F.p, "e": F.e}
    return FiniteGroup(be, grid, kind=kind, spec=spec, params=params, identity=[1, 0, 0, 1], table_cap=table_cap)


def _perm_closure(gens: list[list[int]], degree: int, cap: int, spec: str) -> np.ndarray:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gts = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gts:
                c = tuple(g[i] for i in a)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    if len(seen) > cap:
                        raise CapExceededError(f"{spec} has order above the cap {cap}")
        frontier = nxt
    return np.array(sorted(seen), dtype=np.int64)


@lru_cache(maxsize=32)
def _build_group_cached(spec: str, cap: int, table_cap: int) -> FiniteGroup:
    parts = spec.strip().split(":", 2)
    kind = parts[0].lower()
    if kind in ("psl2", "sl2", "pgl2", "agl1"):
        if len(parts) < 2:
            raise GroupSpecError(f"missing field order in {spec!r}")
        F = _field_from(parts[1], parts[2] if len(parts) > 2 else None)
        if kind == "agl1":
            n = F.q * (F.q - 1)
            _check_cap(n, cap, spec)
            be = _AffineBackend(F)
            P = np.array([(a, b) for a in range(1, F.q) for b in range(F.q)], dtype=np.int64)
            return FiniteGroup(be, P, kind=kind, spec=spec, params={"q": F.q, "p": F.p, "e": F.e},
                               identity=[1, 0], table_cap=table_cap)
        return _matrix_group(kind, F, spec, cap, table_cap)
    if kind == "perm":
        if len(parts) < 2 or not parts[1].strip():
            raise GroupSpecError("perm: needs generators")
        body = ":".join(parts[1:])
        gtexts = [g for g in body.split(";") if g.strip()]
        raw = [parse_cycles(g) for g in gtexts]
        degree = max([len(r) for r in raw] + [1])
        gens = [r + list(range(len(r), degree)) for r in raw]
        P = _perm_closure(gens, degree, cap, spec)
        return FiniteGroup(_PermBackend(degree), P, kind=kind, spec=spec, params={"degree": degree},
                           identity=list(range(degree)), table_cap=table_cap)
    if len(parts) != 2:
        raise GroupSpecError(f"malformed group spec: {spec!r}")
    n = _parse_int(parts[1], "parameter")
    if n < 1:
        raise GroupSpecError(f"parameter must be positive in {spec!r}")
    if kind in ("sym", "alt"):
        size = math.factorial(n) // (2 if kind == "alt" and n > 1 else 1)
        _check_cap(size, cap, spec)
        perms = list(itertools.permutations(range(n)))
        if kind == "alt":
            perms = [p for p in perms if _parity(p) == 0]
        P = np.array(perms, dtype=np.int64).reshape(len(perms), n)
        return FiniteGroup(_PermBackend(n), P, kind=kind, spec=spec, params={"n": n},
                           identity=list(range(n)), table_cap=table_cap)
    if kind == "dihedral":
        _check_cap(2 * n, cap, spec)
        P = np.array([(k, f) for k in range(n) for f in (0, 1)], dtype=np.int64)
        return FiniteGroup(_DihedralBackend(n), P, kind=kind, spec=spec, params={"n": n},
                           identity=[0, 0], table_cap=table_cap)
    if kind == "cyclic":
        _check_cap(n, cap, spec)
        P = np.arange(n, dtype=np.int64).reshape(n, 1)
        return FiniteGroup(_CyclicBackend(n), P, kind=kind, spec=spec, params={"n": n},
                           identity=[0], table_cap=table_cap)
    raise GroupSpecError(f"unknown group family {kind!r} in {spec!r}")


def _parity(p) -> int:
    p = list(p)
    seen = [False] * len(p)
    par = 0
    for i in range(len(p)):
        if not seen[i]:
            j, L = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                L += 1
            par ^= (L - 1) & 1
    return par


def build_group(spec: str, *, cap: int = ORDER_CAP, table_cap: int = TABLE_CAP) -> FiniteGroup:
    """Materialize a group from a spec string.

    Grammar: ``psl2:q``, ``sl2:q``, ``pgl2:q``, ``agl1:q`` (each with an
    optional ``:c0,c1,...`` modulus suffix), ``sym:n``, ``alt:n``,
    ``dihedral:n`` (order 2n), ``cyclic:n`` and ``perm:<cycles>;<cycles>...``
    with 1-based cycles.  Results are cached per spec.
    """
    return _build_group_cached(spec.strip(), cap, table_cap)


# ---------------------------------------------------------------------------
# classes


@dataclass(frozen=True)
class ClassData:
    """Conjugacy classes, sorted by (element order, size, least index)."""

    classes: tuple[np.ndarray, ...]
    names: tuple[str, ...]
    class_of: np.ndarray
    group: FiniteGroup = dc_field(repr=False, compare=False)
    traces: Optional[tuple[int, ...]] = None

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def representatives(self) -> list[int]:
        return [int(c[0]) for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no class named {name!r}; have {list(self.names)}") from None

    def power_class(self, c: int, k: int) -> int:
        """Class of g^k for g in class c."""
        rep = self.representatives[c]
        return int(self.class_of[int(self.group.power(np.asarray(rep), k))])

    def order_of(self, c: int) -> int:
        return int(self.group.orders[self.representatives[c]])


def _class_letters(i: int) -> str:
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(ord("A") + r) + s
    return s


def conjugacy_classes(G: FiniteGroup) -> ClassData:
    n = G.order
    label = np.full(n, -1, dtype=np.int64)
    raw = []
    for h in range(n):
        if label[h] >= 0:
            continue
        cls = np.unique(G.conj_all(h))
        label[cls] = len(raw)
        raw.append(cls)
    order_key = sorted(range(len(raw)), key=lambda i: (int(G.orders[raw[i][0]]), len(raw[i]), int(raw[i][0])))
    classes = tuple(raw[i] for i in order_key)
    for c in classes:
        c.setflags(write=False)
    class_of = np.empty(n, dtype=np.int64)
    names = []
    counter: dict[int, int] = {}
    for ci, c in enumerate(classes):
        class_of[c] = ci
        o = int(G.orders[c[0]])
        names.append(f"{o}{_class_letters(counter.get(o, 0))}")
        counter[o] = counter.get(o, 0) + 1
    class_of.setflags(write=False)
    traces = None
    if G.is_matrix():
        traces = tuple(trace_pair(G, int(c[0])) for c in classes)
    return ClassData(classes, tuple(names), class_of, G, traces)


def element_order(G: FiniteGroup, g: int) -> int:
    return int(G.orders[g])


def generates(G: FiniteGroup, gens) -> bool:
    """True iff ``gens`` generates G; stops as soon as more than |G|/2 is reached."""
    gens = [int(g) for g in gens]
    if not gens:
        raise ValueError("generating set must be nonempty")
    if G.order == 1:
        return True
    mask = G.closure(gens, stop_above=G.order // 2)
    return bool(mask.sum() > G.order // 2)


def trace_pair(G: FiniteGroup, g: int) -> int:
    """Conjugation-invariant trace label of a matrix group element.

    PSL2 over odd q: the smaller index of {tr, -tr}.  SL2 and PSL2 in even
    characteristic: the trace.  SL2 over odd q: the trace.  PGL2: tr^2/det,
    the scalar-invariant normalization.
    """
    if not G.is_matrix():
        raise TypeError("trace_pair needs a matrix group")
    F = G.field
    a, b, c, d = (int(v) for v in G.payload[g])
    tr = int(F.add[a, d])
    mode = G.backend.mode
    if mode == "pgl":
        det = int(F.sub[F.mul[a, d], F.mul[b, c]])
        return int(F.mul[F.mul[tr, tr], F.inv[det]])
    if mode == "psl" and F.p != 2:
        return min(tr, int(F.neg[tr]))
    return tr


def format_trace(G: FiniteGroup, label: int) -> str:
    """``±2`` style text for PSL2 over odd q, plain field element otherwise."""
    F = G.field
    s = F.format(label)
    if G.backend.mode == "psl" and F.p != 2 and label != 0:
        return "±" + (s if F.e == 1 or "+" not in s else f"({s})")
    return s
