"""Orientably regular maps of a finite group, their duality/hole graph, and census counts."""

__version__ = "0.1.0"

from .field import FiniteField, frobenius, make_field  # noqa: E402
from .groups import (  # noqa: E402
    CapExceededError,
    ClassData,
    FiniteGroup,
    GroupSpecError,
    build_group,
    conjugacy_classes,
    element_order,
    generates,
    trace_pair,
)
from .automorphism import AutGroup, compute_aut, involution_orbits, is_inner, pair_orbit_canon  # noqa: E402
from .maps import MapTriple, check_relators, hole_length, invariants, make_map, trace_cotrace, word_order  # noqa: E402
from .ops import dual, hole, mirror  # noqa: E402
from .atlas import build_atlas, catalog, components, enumerate_maps, export  # noqa: E402
