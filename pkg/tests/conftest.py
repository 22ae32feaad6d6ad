import functools
import random

import pytest

from mwlattice import bounds
from mwlattice.ecff import CurveE1Params, LegendreParams, dedup_up_to_sign, e1_curve, e1_explicit_points
from mwlattice.field_tower import make_field


@pytest.fixture(scope="session")
def gf625():
    return make_field(5, 4)


@pytest.fixture(scope="session")
def e1_q5():
    params = CurveE1Params(5, 1, 4)
    E = e1_curve(params)
    points = e1_explicit_points(params, E=E)
    return params, E, points


@pytest.fixture(scope="session")
def e1_q5_reduced(e1_q5):
    params, E, points = e1_q5
    return params, E, dedup_up_to_sign(E, points)


@pytest.fixture(scope="session")
def legendre_p3f1():
    return LegendreParams(3, 1)


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture(scope="session")
def table1_row():
    """bounds.table1_row, memoized so each row is computed once per session."""
    return functools.lru_cache(maxsize=None)(bounds.table1_row)


@pytest.fixture(scope="session")
def table2_row():
    return functools.lru_cache(maxsize=None)(bounds.table2_row)
