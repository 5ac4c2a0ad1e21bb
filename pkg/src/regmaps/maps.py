"""Orientably regular maps as generating triples (x, y, z), xyz = 1.

x rotates arcs around vertices, y reverses arcs, z rotates around faces.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .automorphism import AutGroup
from .groups import FiniteGroup, format_trace, generates, trace_pair

__all__ = [
    "MapError",
    "NotInvolutionError",
    "NotGeneratingError",
    "HoleError",
    "MapTriple",
    "MapInvariants",
    "make_map",
    "matrix_map",
    "invariants",
    "reflexibility",
    "genus_of",
    "hole_length",
    "word_order",
    "parse_relator",
    "check_relators",
    "trace_cotrace",
]


class MapError(ValueError):
    pass


class NotInvolutionError(MapError):
    pass


class NotGeneratingError(MapError):
    pass


class HoleError(MapError):
    """Hole index not coprime to the valency."""


@dataclass(frozen=True)
class MapTriple:
    group: FiniteGroup
    x: int
    y: int
    z: int

    def __repr__(self) -> str:
        return f"MapTriple({self.group.spec!r}, x={self.x}, y={self.y}, z={self.z})"

    @property
    def valency(self) -> int:
        return int(self.group.orders[self.x])

    @property
    def face_length(self) -> int:
        return int(self.group.orders[self.z])


@dataclass(frozen=True)
class MapInvariants:
    p: int
    q: int
    r: int
    genus: int
    reflexibility: str
    trace: Optional[str] = None
    cotrace: Optional[str] = None
    quotient_genus: Optional[int] = None
    reflector: Optional[int] = None  # conjugating element when inner-regular

    @property
    def type(self) -> tuple[int, int]:
        return (self.p, self.q)

    @property
    def extended_type(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.r)

    def label(self) -> str:
        return f"{{{self.p},{self.q}}}_{self.r}"


def make_map(G: FiniteGroup, x: int, y: int, *, check: bool = True) -> MapTriple:
    x, y = int(x), int(y)
    if G.orders[y] != 2:
        raise NotInvolutionError(f"y has order {int(G.orders[y])}, not 2")
    if check and not generates(G, [x, y]):
        raise NotGeneratingError("x and y do not generate the group")
    z = int(G.inverse[G.mul(x, y)])
    return MapTriple(G, x, y, z)


def matrix_map(G: FiniteGroup, x, y, *, check: bool = True) -> MapTriple:
    """Map from 2x2 matrices with entries as field text, e.g. ``[["t", 1], [0, "t^2+1"]]``."""
    if not G.is_matrix():
        raise TypeError("matrix_map needs a matrix group")
    F = G.field

    def idx(rows):
        return G.from_matrix([[F.parse(v) for v in row] for row in rows])

    return make_map(G, idx(x), idx(y), check=check)


def genus_of(order: int, p: int, q: int) -> int:
    """Genus from 2 - 2g = |G|/q - |G|/2 + |G|/p."""
    g = 1 + Fraction(order, 2) * (Fraction(1, 2) - Fraction(1, p) - Fraction(1, q))
    if g.denominator != 1 or g < 0:
        raise ValueError(f"non-integral or negative genus {g} for |G|={order}, type {{{p},{q}}}")
    return int(g)


def reflexibility(m: MapTriple, A: AutGroup) -> tuple[str, Optional[int]]:
    """chiral / inner-regular / outer-regular, with the reflecting conjugator when inner.

    Looks for an automorphism inverting x and fixing y.
    """
    G = m.group
    n = G.order
    g = np.arange(n)
    xinv = int(G.inverse[m.x])
    hit = None
    for b, beta in enumerate(A.transversal):
        ok = G.conj(np.full(n, int(beta[m.y])), g) == m.y
        ok &= G.conj(np.full(n, int(beta[m.x])), g) == xinv
        idx = np.flatnonzero(ok)
        if len(idx):
            hit = (b, int(idx[0]))
            break
    if hit is None:
        return "chiral", None
    if hit[0] == 0:
        return "inner-regular", hit[1]
    return "outer-regular", None


def invariants(m: MapTriple, A: AutGroup) -> MapInvariants:
    G = m.group
    q = m.valency
    p = m.face_length
    r = 2 * int(G.orders[G.commutator(m.x, m.y)])
    genus = genus_of(G.order, p, q)
    refl, c = reflexibility(m, A)
    tr = cotr = None
    if G.is_matrix() and _is_standard_y(m):
        tr, cotr = trace_cotrace(m)
    qg = genus + 1 if refl == "inner-regular" and len(G.center) == 1 else None
    return MapInvariants(p, q, r, genus, refl, tr, cotr, qg, c)


def _is_standard_y(m: MapTriple) -> bool:
    from .automorphism import standard_involution

    return standard_involution(m.group) == m.y


def hole_length(m: MapTriple, j: int) -> int:
    """Length of the j-holes: order of (x^j y)^-1."""
    q = m.valency
    if gcd(j, q) != 1:
        raise HoleError(f"hole index {j} is not coprime to valency {q}")
    G = m.group
    return int(G.orders[G.mul(G.power(np.asarray(m.x), j), m.y)])


def word_order(m: MapTriple, exponents: Sequence[int]) -> int:
    """Order of x^d1 y x^d2 y ... x^dm y; exponents are taken mod the valency."""
    if not len(exponents):
        raise ValueError("exponent list must be nonempty")
    G = m.group
    w = 0
    for d in exponents:
        w = int(G.mul(G.mul(w, G.power(np.asarray(m.x), int(d))), m.y))
    return int(G.orders[w])


# -- relator words over R = x, S = z ------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<atom>[RS])|(?P<open>\()|(?P<close>\))|(?P<star>\*)|(?P<pow>\^\s*(?P<exp>-?\d+)))")


def parse_relator(text: str) -> list[tuple[str, int]]:
    """Flatten a word like ``(R*S^-3*R^2)^2`` into (letter, exponent) pairs."""
    pos = 0
    stack: list[list] = [[]]
    last: Optional[list] = None  # the most recent complete factor
    text = text.strip()
    if text in ("", "1"):
        return []
    after_factor = False  # whether the previous token closed a factor
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MapError(f"malformed relator at {text[pos:]!r}")
        pos = m.end()
        if (m.group("star") or m.group("close")) and not after_factor:
            raise MapError(f"missing factor before {m.group().strip()!r} in {text!r}")
        after_factor = not (m.group("open") or m.group("star"))
        if m.group("atom"):
            last = [(m.group("atom"), 1)]
            stack[-1].append(last)
        elif m.group("open"):
            stack.append([])
            last = None
        elif m.group("close"):
            if len(stack) == 1:
                raise MapError(f"unbalanced parentheses in {text!r}")
            body = [t for f in stack.pop() for t in f]
            last = body
            stack[-1].append(last)
        elif m.group("star"):
            last = None
        else:
            if last is None:
                raise MapError(f"exponent without a base in {text!r}")
            k = int(m.group("exp"))
            base = list(last)
            if k < 0:
                base = [(a, -e) for a, e in reversed(base)]
                k = -k
            last[:] = base * k
    if len(stack) != 1:
        raise MapError(f"unbalanced parentheses in {text!r}")
    if not after_factor:
        raise MapError(f"relator {text!r} ends without a factor")
    return [t for f in stack[0] for t in f]


def evaluate_relator(m: MapTriple, word: str) -> int:
    G = m.group
    letters = {"R": m.x, "S": m.z}
    return G.word([(letters[a], e) for a, e in parse_relator(word)])


def check_relators(m: MapTriple, relators: Sequence[str]) -> list[bool]:
    """For each word in R (= x) and S (= z), whether it evaluates to 1."""
    return [evaluate_relator(m, w) == 0 for w in relators]


def trace_cotrace(m: MapTriple) -> tuple[str, str]:
    """(trace of x, trace of z) labels for a matrix triple."""
    G = m.group
    if not G.is_matrix():
        raise TypeError("trace/cotrace needs a matrix group")
    return format_trace(G, trace_pair(G, m.x)), format_trace(G, trace_pair(G, m.z))
