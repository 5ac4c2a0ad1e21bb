import itertools
from math import factorial

import numpy as np
import pytest

from regmaps import build_group, compute_aut, frobenius, involution_orbits, is_inner, pair_orbit_canon
from regmaps.groups import CapExceededError


def totient(n):
    return sum(1 for k in range(1, n + 1) if np.gcd(k, n) == 1)


def brute_aut_order(G):
    """Count automorphisms by trying every image pair for a 2-element generating set."""
    gens = [int(g) for g in G.gens]
    assert len(gens) <= 2
    gens = (gens + [0])[:2]
    n = G.order
    table = G.mul(np.arange(n)[:, None], np.arange(n)[None, :])
    count = 0
    for a, b in itertools.product(range(n), repeat=2):
        if G.orders[a] != G.orders[gens[0]] or G.orders[b] != G.orders[gens[1]]:
            continue
        perm = np.full(n, -1)
        perm[0] = 0
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for h in frontier:
                for s, t in ((gens[0], a), (gens[1], b)):
                    k = int(table[h, s])
                    v = int(table[perm[h], t])
                    if perm[k] == -1:
                        perm[k] = v
                        nxt.append(k)
                    elif perm[k] != v:
                        ok = False
            frontier = nxt
        if not ok or (perm < 0).any() or len(set(perm.tolist())) != n:
            continue
        if (perm[table] == table[perm][:, perm]).all():
            count += 1
    return count


@pytest.mark.parametrize("spec,order", [
    ("psl2:7", 336), ("sl2:8", 1512), ("psl2:13", 2184), ("psl2:16", 16320), ("psl2:9", 1440),
    ("sym:4", 24), ("sym:5", 120), ("alt:4", 24), ("alt:5", 120), ("sym:6", 1440), ("alt:6", 1440),
    ("agl1:4", 2 * 12), ("agl1:8", 3 * 56), ("agl1:16", 4 * 240), ("agl1:32", 5 * 992),
    ("cyclic:2", 1), ("cyclic:12", 4), ("dihedral:2", 6), ("dihedral:5", 20), ("dihedral:8", 32),
])
def test_aut_orders(spec, order):
    assert compute_aut(build_group(spec)).order == order


@pytest.mark.parametrize("spec", ["sym:3", "sym:4", "alt:4", "dihedral:4", "dihedral:6", "cyclic:12", "cyclic:9"])
def test_aut_order_matches_brute_force(spec):
    G = build_group(spec)
    assert compute_aut(G).order == brute_aut_order(G)


def test_sl28_outer_is_c3():
    A = compute_aut(build_group("sl2:8"))
    assert A.outer_order == 3


@pytest.mark.parametrize("spec", ["psl2:7", "sl2:8", "alt:5", "sym:4", "agl1:8"])
def test_generic_search_matches_family(spec):
    G = build_group(spec)
    assert compute_aut(G, force_generic=True).order == compute_aut(G).order


@pytest.mark.parametrize("spec", ["psl2:7", "sym:4", "alt:5", "agl1:8", "dihedral:6", "sym:6"])
def test_every_automorphism_is_homomorphism(spec):
    G = build_group(spec)
    A = compute_aut(G)
    n = G.order
    table = G.mul(np.arange(n)[:, None], np.arange(n)[None, :])
    seen = set()
    for alpha in A:
        p = alpha.perm
        assert (p[table] == table[p][:, p]).all()
        seen.add(p.tobytes())
    assert len(seen) == A.order


def test_homomorphism_sampled_large_group():
    G = build_group("psl2:16")
    A = compute_aut(G)
    rng = np.random.default_rng(3)
    a, b = rng.integers(0, G.order, size=(2, 20000))
    for alpha in A.generators():
        p = alpha.perm
        assert (p[G.mul(a, b)] == G.mul(p[a], p[b])).all()


def test_conjugation_is_inner_with_witness():
    G = build_group("psl2:7")
    A = compute_aut(G)
    for g in [1, 17, 100]:
        perm = G.conj(np.arange(G.order), np.full(G.order, g))
        inner, w = is_inner(A, perm)
        assert inner
        assert (G.conj(np.arange(G.order), np.full(G.order, w)) == perm).all()


def test_frobenius_is_outer_on_sl28():
    G = build_group("sl2:8")
    A = compute_aut(G)
    F = G.field
    perm = np.array([G.index([frobenius(F, int(v), 1) for v in G.payload[g]]) for g in range(G.order)])
    n = G.order
    a = np.random.default_rng(0).integers(0, n, size=(2, 5000))
    assert (perm[G.mul(a[0], a[1])] == G.mul(perm[a[0]], perm[a[1]])).all()
    inner, w = is_inner(A, perm)
    assert not inner and w is None


def test_fricke_macbeath_reflector():
    G = build_group("sl2:8")
    F = G.field
    t, t1 = F.parse("t"), F.parse("t+1")
    c = G.from_matrix([[t1, t], [t, t1]])
    x = G.from_matrix([[t, 1], [0, F.parse("t^2+1")]])
    y = G.from_matrix([[0, 1], [1, 0]])
    assert G.conj(x, c) == G.inverse[x]
    assert G.conj(y, c) == y
    A = compute_aut(G)
    inner, w = is_inner(A, G.conj(np.arange(G.order), np.full(G.order, c)))
    assert inner and w == c


def test_pair_canon_idempotent_and_invariant():
    G = build_group("psl2:7")
    A = compute_aut(G)
    rng = np.random.default_rng(5)
    for x, y in rng.integers(0, G.order, size=(20, 2)):
        c = pair_orbit_canon(A, int(x), int(y))
        assert pair_orbit_canon(A, *c) == c
        for alpha in A.generators():
            assert pair_orbit_canon(A, int(alpha(x)), int(alpha(y))) == c


def test_psl27_727_triples_single_orbit():
    G = build_group("psl2:7")
    A = compute_aut(G)
    from regmaps import generates

    canons = set()
    n = 0
    for y in G.involutions:
        for x in np.flatnonzero(G.orders == 7):
            z = int(G.inverse[G.mul(int(x), int(y))])
            if G.orders[z] == 7 and generates(G, [int(x), int(y)]):
                n += 1
                canons.add(pair_orbit_canon(A, int(x), int(y)))
    assert n == 336
    assert len(canons) == 1


def test_s5_canon_separates_involution_classes():
    G = build_group("sym:5")
    A = compute_aut(G)
    x = G.from_cycles("(1,2,3,4,5)")
    c1 = pair_orbit_canon(A, x, G.from_cycles("(1,2)"))
    c2 = pair_orbit_canon(A, x, G.from_cycles("(1,2)(3,4)"))
    assert c1 != c2


def test_s4_double_transpositions_not_useful():
    G = build_group("sym:4")
    orbs = involution_orbits(G, compute_aut(G))
    useful = {len(o.members): o.useful for o in orbs}
    assert useful == {6: True, 3: False}


def test_psl27_single_useful_orbit():
    G = build_group("psl2:7")
    orbs = involution_orbits(G, compute_aut(G))
    assert len(orbs) == 1 and orbs[0].useful and len(orbs[0].members) == 21


@pytest.mark.parametrize("n", [5, 6, 7])
def test_symmetric_involutions_all_useful(n):
    G = build_group(f"sym:{n}")
    orbs = involution_orbits(G, compute_aut(G))
    assert all(o.useful for o in orbs)
    classes = [c for c in G.classes.classes if G.orders[c[0]] == 2]
    assert len(classes) == n // 2
    assert len(orbs) == (2 if n == 6 else n // 2)


def test_generic_cap():
    with pytest.raises(CapExceededError):
        compute_aut(build_group("perm:(1,2,3,4,5,6,7);(1,2)"), generic_cap=100)
