"""Duality and hole operations on generating triples."""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

import numpy as np

from .maps import HoleError, MapTriple

__all__ = ["MapOperation", "dual", "hole", "mirror", "apply_op", "parse_ops"]


@dataclass(frozen=True)
class MapOperation:
    """``D`` or ``H(j)``; ``H(-1)`` is the mirror image."""

    kind: str
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("D", "H"):
            raise ValueError(f"unknown operation kind {self.kind!r}")
        if self.kind == "H" and self.j == 0:
            raise ValueError("H_0 is not an operation")

    @property
    def label(self) -> str:
        return "D" if self.kind == "D" else f"H{self.j}"

    @property
    def undirected(self) -> bool:
        return self.kind == "D" or self.j == -1

    def applicable(self, m: MapTriple) -> bool:
        return self.kind == "D" or gcd(self.j, m.valency) == 1

    def __call__(self, m: MapTriple) -> MapTriple:
        return dual(m) if self.kind == "D" else hole(m, self.j)


def dual(m: MapTriple) -> MapTriple:
    """(x, y, z) -> (z, y, y^-1 x y)."""
    G = m.group
    xy = int(G.mul(G.mul(m.y, m.x), m.y))
    return MapTriple(G, m.z, m.y, xy)


def hole(m: MapTriple, j: int) -> MapTriple:
    """(x, y, z) -> (x^j, y, (x^j y)^-1)."""
    if gcd(j, m.valency) != 1:
        raise HoleError(f"H_{j} needs j coprime to the valency {m.valency}")
    G = m.group
    xj = int(G.power(np.asarray(m.x), j))
    return MapTriple(G, xj, m.y, int(G.inverse[G.mul(xj, m.y)]))


def mirror(m: MapTriple) -> MapTriple:
    """H_-1, the mirror image."""
    return hole(m, -1)


def apply_op(m: MapTriple, label: str) -> MapTriple:
    return parse_op(label)(m)


def parse_op(label: str) -> MapOperation:
    label = label.strip()
    if label == "D":
        return MapOperation("D")
    mt = re.fullmatch(r"H(-?\d+)", label)
    if not mt or int(mt.group(1)) == 0:
        raise ValueError(f"bad operation label {label!r}")
    return MapOperation("H", int(mt.group(1)))


def parse_ops(text: str) -> list[MapOperation]:
    """``"D,H2,H3,H-1"`` to operations, duplicates dropped, order kept."""
    out: list[MapOperation] = []
    for part in text.split(","):
        if part.strip():
            op = parse_op(part)
            if op not in out:
                out.append(op)
    if not out:
        raise ValueError("empty operation list")
    return out


def apply_word(m: MapTriple, word: str) -> MapTriple:
    """Apply an operator word such as ``H2DH3`` (rightmost first)."""
    tokens = re.findall(r"D|H-?\d+", word.replace(" ", ""))
    if "".join(tokens) != word.replace(" ", ""):
        raise ValueError(f"bad operator word {word!r}")
    for t in reversed(tokens):
        m = parse_op(t)(m)
    return m
