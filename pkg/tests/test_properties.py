"""Structural properties checked on every enumerated map of the test groups."""
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from regmaps import build_atlas, hole_length, pair_orbit_canon, word_order
from regmaps.maps import genus_of, invariants
from regmaps.ops import dual, hole

GROUPS = ["alt:4", "sym:4", "alt:5", "sym:5", "psl2:7", "sl2:8", "psl2:9", "psl2:11", "psl2:13", "psl2:16",
          "agl1:8", "agl1:16", "agl1:32", "pgl2:5", "pgl2:7"] + [f"dihedral:{n}" for n in range(2, 9)]


def canon(A, m):
    return pair_orbit_canon(A, m.x, m.y)


def units(q):
    return [j for j in range(1, max(q, 2)) if gcd(j, q) == 1]


@pytest.mark.parametrize("spec", GROUPS)
def test_genus_and_petrie(setup, spec):
    G, A, cat = setup(spec)
    assert len(cat) > 0
    for mc in cat:
        inv = mc.invariants
        assert 2 * (inv.genus - 1) == G.order * (Fraction(1, 2) - Fraction(1, inv.p) - Fraction(1, inv.q))
        assert inv.genus >= 0
        assert inv.r % 2 == 0
        assert inv.r == 2 * word_order(mc.triple, [1, -1])


@pytest.mark.parametrize("spec", GROUPS)
def test_involutive_operations_fix_orbits(setup, spec):
    G, A, cat = setup(spec)
    for mc in cat:
        m = mc.triple
        assert cat.classify(dual(dual(m))) == mc.id
        assert cat.classify(hole(hole(m, -1), -1)) == mc.id


@pytest.mark.parametrize("spec", GROUPS)
def test_hole_composition_is_unit_group_action(setup, spec):
    G, A, cat = setup(spec)
    for mc in cat:
        m = mc.triple
        q = m.valency
        img = {j: cat.classify(hole(m, j)) for j in units(q)}
        for j in units(q):
            hj = hole(m, j)
            for k in units(q):
                assert cat.classify(hole(hj, k)) == img[(j * k) % q if q > 1 else 1]


@pytest.mark.parametrize("spec", GROUPS)
def test_components_constant_reflexibility_and_y_orbit(setup, spec):
    G, A, cat = setup(spec)
    g = build_atlas(G, A, cat=cat)
    for comp in g.components:
        assert len({g.vertices[v].invariants.reflexibility for v in comp}) == 1
        assert len({g.vertices[v].y_orbit for v in comp}) == 1
    useful = len({mc.y_orbit for mc in cat})
    assert len(g.components) >= useful


@pytest.mark.parametrize("spec", [s for s in GROUPS if s.startswith(("psl2", "sl2"))])
def test_projective_linear_maps_never_chiral(setup, spec):
    _, _, cat = setup(spec)
    assert all(mc.invariants.reflexibility != "chiral" for mc in cat)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.data())
def test_operations_preserve_invariants(setup, data):
    spec = data.draw(st.sampled_from(GROUPS))
    G, A, cat = setup(spec)
    mc = cat[data.draw(st.integers(0, len(cat) - 1))]
    m, inv = mc.triple, mc.invariants
    d = invariants(dual(m), A)
    assert (d.p, d.q, d.r, d.genus, d.reflexibility) == (inv.q, inv.p, inv.r, inv.genus, inv.reflexibility)
    j = data.draw(st.sampled_from(units(m.valency)))
    h = invariants(hole(m, j), A)
    assert h.q == inv.q
    assert h.p == hole_length(m, j)
    assert h.genus == genus_of(G.order, h.p, h.q)
    assert h.reflexibility == inv.reflexibility
    assert cat.classify(hole(m, j)) == cat.classify(dual(dual(hole(m, j))))
    assert canon(A, hole(m, j)) == cat[cat.classify(hole(m, j))].canon
