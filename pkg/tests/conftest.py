from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hyptwist.curve import Curve

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# filled by tests/test_acceptance.py, reported once per session
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_curve(rng: random.Random, g: int, bound: int = 50) -> Curve:
    roots = rng.sample(range(-bound, bound + 1), 2 * g + 1)
    return Curve(tuple(roots))


@st.composite
def curves(draw, max_genus: int = 3, bound: int = 50):
    g = draw(st.integers(1, max_genus))
    roots = draw(st.lists(st.integers(-bound, bound), min_size=2 * g + 1, max_size=2 * g + 1, unique=True))
    return Curve(tuple(roots))


nonzero_ints = st.integers(-(10**6), 10**6).filter(lambda x: x != 0)


@pytest.fixture
def rng():
    return random.Random(1729)
