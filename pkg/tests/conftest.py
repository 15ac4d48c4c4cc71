import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from tropicast import convex_hull
from tropicast import jsonio as J

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("repo")

DATA = Path(__file__).resolve().parent.parent / "data"


def coords(lo=-3, hi=3):
    return st.integers(lo, hi)


def lattice_points(dim, min_size=1, max_size=6, lo=-3, hi=3):
    return st.lists(st.tuples(*[coords(lo, hi)] * dim), min_size=min_size, max_size=max_size)


def rationals(lo=-4, hi=4, max_den=6):
    return st.builds(Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den))


@st.composite
def lattice_polytopes(draw, dim=3, min_size=1, max_size=6, lo=0, hi=3):
    return convex_hull(draw(lattice_points(dim, min_size, max_size, lo, hi)))


PSIS = [(1, 1, 1), (2, -1, 1), (1, 0, 0), (0, 1, -1), (1, 2, 3), (1, -1, 0), (3, 1, -2)]


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def cube():
    return J.polytope_from_json(J.load(DATA / "cube.json"))


@pytest.fixture
def two_planes():
    return J.system_from_json(J.load(DATA / "two_planes.json"))


@pytest.fixture
def rng():
    return random.Random(20261016)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
