"""Finite fields GF(p^e) in a polynomial basis.

Elements are integers ``0 .. p**e - 1``; the integer ``sum(c[k] * p**k)``
stands for the polynomial ``sum(c[k] * t**k)``.  Addition, multiplication,
negation and inversion are precomputed as numpy lookup tables, which is all
the matrix and affine group backends need.
"""
from __future__ import annotations

import re

from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

__all__ = ["FiniteField", "FieldError", "make_field", "frobenius", "is_prime", "prime_power"]


class FieldError(ValueError):
    """Bad field parameters (non-prime characteristic, reducible modulus...)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**e``; raise FieldError if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


_MONO = r"(?:\d+|\d*t(?:\^\d+)?)"
_POLY = re.compile(rf"[+-]?{_MONO}(?:[+-]{_MONO})*")
_TERM = re.compile(r"([+-]?)(\d*)(t?)(?:\^(\d+))?")


def _digits(x: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _polymul_mod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1 if e > 0 else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # modulus is monic: t^e = -(m_0 + ... + m_{e-1} t^{e-1})
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i in range(e):
                prod[k - e + i] = (prod[k - e + i] - c * modulus[i]) % p
    return prod[:e]


class FiniteField:
    """GF(p^e) with a fixed monic modulus (coefficients constant term first)."""

    def __init__(self, p: int, e: int, modulus: Sequence[int]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = tuple(int(c) % p for c in modulus)
        q = self.q
        digits = [_digits(x, p, e) for x in range(q)]
        weights = np.array([p**k for k in range(e)], dtype=np.int64)
        dig = np.array(digits, dtype=np.int64).reshape(q, e)
        self.add = (((dig[:, None, :] + dig[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg = ((-dig % p) @ weights).astype(np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(a, q):
                c = _polymul_mod(digits[a], digits[b], list(self.modulus), p)
                v = sum(ck * p**k for k, ck in enumerate(c))
                mul[a, b] = mul[b, a] = v
        self.mul = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            hits = np.flatnonzero(mul[a] == 1)
            if len(hits) != 1:
                raise FieldError(f"modulus {self.modulus} is reducible over GF({p})")
            inv[a] = hits[0]
        self.inv = inv
        self.sub = self.add[:, self.neg]
        for tbl in (self.add, self.neg, self.mul, self.inv, self.sub):
            tbl.setflags(write=False)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e}, modulus={list(self.modulus)})"

    @property
    def t(self) -> int:
        """The class of the indeterminate (only meaningful for e > 1)."""
        return p_index(self.p, [0, 1]) if self.e > 1 else 0

    def element(self, coeffs: Sequence[int]) -> int:
        """Element from polynomial coefficients, constant term first."""
        if len(coeffs) > self.e:
            raise FieldError(f"too many coefficients for GF({self.q})")
        return p_index(self.p, [c % self.p for c in coeffs])

    def parse(self, text: str | int) -> int:
        """Element from text such as ``t^2+t+1``, ``2t-1`` or ``-3``."""
        if isinstance(text, (int, np.integer)):
            return self.element([int(text) % self.p])
        src = text.replace(" ", "").replace("*", "")
        if not _POLY.fullmatch(src):
            raise FieldError(f"malformed field element {text!r}")
        coeffs = [0] * max(self.e, 1)
        for sign, coef, var, exp in _TERM.findall(src):
            if not coef and not var:
                continue
            c = int(coef) if coef else 1
            k = (int(exp) if exp else 1) if var else 0
            if k >= self.e:
                raise FieldError(f"degree {k} term in GF({self.q}) element {text!r}")
            coeffs[k] += -c if sign == "-" else c
        return self.element([c % self.p for c in coeffs])

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def pow(self, x: int, k: int) -> int:
        if x == 0:
            return 0 if k > 0 else 1
        k %= self.q - 1
        r, b = 1, int(x)
        while k:
            if k & 1:
                r = int(self.mul[r, b])
            b = int(self.mul[b, b])
            k >>= 1
        return r

    def mult_order(self, x: int) -> int:
        if x == 0:
            raise FieldError("0 has no multiplicative order")
        k, y = 1, int(x)
        while y != 1:
            y = int(self.mul[y, x])
            k += 1
        return k

    def primitive_element(self) -> int:
        return next(a for a in range(1, self.q) if self.mult_order(a) == self.q - 1)

    def is_square(self, x: int) -> bool:
        return bool(x == 0 or np.any(self.mul.diagonal() == x))

    def format(self, x: int) -> str:
        """Human-readable polynomial, e.g. ``t^2+t+1`` or ``5``."""
        if self.e == 1:
            return str(int(x))
        c = _digits(int(x), self.p, self.e)
        terms = []
        for k in range(self.e - 1, -1, -1):
            if not c[k]:
                continue
            coef = "" if (c[k] == 1 and k > 0) else str(c[k])
            var = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            terms.append(coef + var)
        return "+".join(terms) if terms else "0"


def p_index(p: int, coeffs: Sequence[int]) -> int:
    return sum(int(c) * p**k for k, c in enumerate(coeffs))


def _default_modulus(p: int, e: int) -> list[int]:
    """Least monic irreducible, ordering candidates by their element index."""
    if e == 1:
        return [0, 1]
    for low in range(p**e):
        cand = _digits(low, p, e) + [1]
        if _is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")  # pragma: no cover


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    e = len(modulus) - 1
    if e == 1:
        return True
    if modulus[0] % p == 0:
        return False
    # a zero divisor exists iff the quotient ring is not a field
    q = p**e
    digits = [_digits(x, p, e) for x in range(q)]
    for a in range(1, q):
        if not any(
            _polymul_mod(digits[a], digits[b], list(modulus), p) == [1] + [0] * (e - 1)
            for b in range(1, q)
        ):
            return False
    return True


@lru_cache(maxsize=None)
def _make_field_cached(p: int, e: int, modulus: Optional[tuple[int, ...]]) -> FiniteField:
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    if modulus is None:
        mod = _default_modulus(p, e)
    else:
        mod = [int(c) % p for c in modulus]
        if len(mod) != e + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {e}: {list(modulus)}")
    return FiniteField(p, e, mod)


def make_field(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None) -> FiniteField:
    """Build GF(p^e).

    ``modulus`` lists the coefficients of a monic irreducible polynomial of
    degree ``e``, constant term first (``[1, 1, 0, 1]`` is ``t^3 + t + 1``).
    Without it the least monic irreducible is used, comparing candidates by
    the integer ``sum(c[k] * p**k)`` of their non-leading coefficients.
    """
    return _make_field_cached(int(p), int(e), None if modulus is None else tuple(int(c) for c in modulus))


def frobenius(F: FiniteField, x: int, k: int = 1) -> int:
    """x^(p^k)."""
    if not 0 <= k < F.e:
        raise FieldError(f"Frobenius iterate must lie in [0, {F.e})")
    for _ in range(k):
        x = F.pow(x, F.p)
    return int(x)
