import functools
import os

import pytest
from hypothesis import HealthCheck, settings

from maxclass.cyclotomic import alpha_canonical, alpha_solve
from maxclass.group import MaxClassGroup

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def canonical_group(p, m, n):
    return MaxClassGroup(p, n, m, alpha_canonical(p, m, n))


@functools.lru_cache(maxsize=None)
def p3_surjective_group():
    sols = alpha_solve(3, 4, 5)
    A = next(a for a in sols.generators if a.is_surjective())
    return MaxClassGroup(3, 5, 4, A)


@pytest.fixture
def canonical():
    return canonical_group


# filled by test_acceptance.py; one entry per criterion
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {line}")
