import time

import pytest

from regmaps import build_group, catalog, compute_aut
from regmaps.automorphism import _compute_aut_cached
from regmaps.groups import _build_group_cached

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def setup():
    """(G, A, catalog) for a spec, cached for the whole session."""
    cache = {}

    def get(spec):
        if spec not in cache:
            G = build_group(spec)
            A = compute_aut(G)
            cache[spec] = (G, A, catalog(G, A))
        return cache[spec]

    return get


class Criterion:
    """Times one acceptance criterion and records a PASS/FAIL line for the summary."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        # time each criterion from a cold start
        _build_group_cached.cache_clear()
        _compute_aut_cached.cache_clear()
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        slow = dt > self.limit
        ok = exc_type is None and not slow
        detail = f"{dt:.1f}s (limit {self.limit:.0f}s)"
        if exc_type is not None:
            detail += f"; {exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        _ACCEPTANCE[self.number] = f"criterion {self.number:>2} {'PASS' if ok else 'FAIL'}  {self.title}  [{detail}]"
        print(_ACCEPTANCE[self.number])
        if exc_type is None and slow:
            raise AssertionError(f"criterion {self.number} took {dt:.1f}s > {self.limit}s")
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
