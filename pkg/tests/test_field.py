import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from regmaps import FiniteField, frobenius, make_field
from regmaps.field import FieldError

SMALL = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 5), (2, 6), (7, 2)]


def test_gf8_t4_is_t2_plus_t():
    F = make_field(2, 3, [1, 1, 0, 1])
    t = F.t
    t4 = F.pow(t, 4)
    assert t4 == F.parse("t^2+t")
    assert F.mul[t, F.pow(t, 3)] == t4


def test_prime_field_arithmetic():
    F = make_field(7)
    assert F.add[3, 5] == 1
    assert F.mul[3, 5] == 1


def test_gf32_multiplicative_group_cyclic():
    F = make_field(2, 5)
    orders = [F.mult_order(a) for a in range(1, 32)]
    assert 31 in orders
    # brute force: some a has a^k != 1 for 0 < k < 31
    a = orders.index(31) + 1
    x, seen = 1, set()
    for _ in range(31):
        x = F.mul[x, a]
        seen.add(int(x))
    assert len(seen) == 31


def test_default_moduli():
    assert list(make_field(2, 3).modulus) == [1, 1, 0, 1]
    assert list(make_field(2, 5).modulus) == [1, 0, 1, 0, 0, 1]


def test_frobenius_examples():
    F = make_field(2, 3)
    assert frobenius(F, F.t, 1) == F.pow(F.t, 2)
    for x in range(8):
        assert frobenius(F, x, 0) == x
        y = x
        for _ in range(3):
            y = frobenius(F, y, 1)
        assert y == x


@pytest.mark.parametrize("p,e", SMALL)
def test_field_axioms_exhaustive(p, e):
    F = make_field(p, e)
    q = p**e
    A, M = F.add, F.mul
    assert (A == A.T).all() and (M == M.T).all()
    idx = np.arange(q)
    for a in range(q):
        # associativity and distributivity, vectorized over b, c
        assert (A[A[a][:, None], idx[None, :]] == A[a][A]).all()
        assert (M[M[a][:, None], idx[None, :]] == M[a][M]).all()
        assert (M[a][A] == A[M[a][:, None], M[a][None, :]]).all()
    assert all(M[x, F.inv[x]] == 1 for x in range(1, q))


@pytest.mark.parametrize("p,e", SMALL)
def test_frobenius_is_automorphism_of_order_e(p, e):
    F = make_field(p, e)
    q = p**e
    fr = np.array([frobenius(F, x, 1) if e > 1 else x for x in range(q)])
    assert sorted(fr) == list(range(q))
    for x, y in itertools.product(range(q), repeat=2):
        assert fr[F.add[x, y]] == F.add[fr[x], fr[y]]
        assert fr[F.mul[x, y]] == F.mul[fr[x], fr[y]]
    k_perm = np.arange(q)
    for k in range(1, e + 1):
        k_perm = fr[k_perm]
        assert (k_perm == np.arange(q)).all() == (k == e)
    fixed = [x for x in range(q) if fr[x] == x]
    assert fixed == [F.element([c]) for c in range(p)]


def test_errors():
    assert make_field(2, 3, [1, 0, 1, 1]).q == 8  # t^3+t^2+1 is irreducible
    with pytest.raises(FieldError):
        make_field(2, 2, [1, 0, 1])  # t^2+1 = (t+1)^2
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        frobenius(make_field(2, 3), 1, 3)


@given(st.integers(0, 31))
def test_parse_format_roundtrip(x):
    F = make_field(2, 5)
    assert F.parse(F.format(x)) == x


def test_parse_rejects_bad_text():
    F = make_field(2, 3)
    for bad in ["t^3", "x", "", "t^"]:
        with pytest.raises(FieldError):
            F.parse(bad)
