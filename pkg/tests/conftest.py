"""Shared fixtures: canonical scenarios and small random control grids."""

import math

import numpy as np
import pytest

from obspath.model import ProblemKind, Scenario

TURN_RATE_MAX = math.radians(5.0)  # 5 deg/s in rad/s
SPEED = 0.04                       # 40 m/s in km/s


def p3_scenario(t_f: float, n_grid: int = 1000, **kw) -> Scenario:
    """The standard turn-rate-bounded scenario: observer 5 km east of the
    target, heading along +x, 40 m/s, 5 deg/s bound."""
    defaults = dict(kind=ProblemKind.P3, v=SPEED, x0=5.0, y0=0.0,
                    theta0=0.0, t_f=t_f, n_grid=n_grid,
                    turn_rate_max=TURN_RATE_MAX)
    defaults.update(kw)
    return Scenario(**defaults)


def p1_scenario(t_f: float, n_grid: int = 1000, **kw) -> Scenario:
    """Free-course scenario on the same geometry."""
    defaults = dict(kind=ProblemKind.P1, v=SPEED, x0=5.0, y0=0.0,
                    t_f=t_f, n_grid=n_grid)
    defaults.update(kw)
    return Scenario(**defaults)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
