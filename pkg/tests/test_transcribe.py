import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obspath.model import RangeUnderflowError, fim_det
from obspath.transcribe import (
    Scheme,
    as_control_grid,
    fd_gradient,
    gradient,
    simulate,
)
from conftest import TURN_RATE_MAX, p1_scenario, p3_scenario


def random_p3_control(rng, scn, scale=1.0):
    return rng.uniform(-scale * scn.turn_rate_max,
                       scale * scn.turn_rate_max, scn.n_grid)


class TestControlGrid:
    def test_wrong_length_rejected(self):
        scn = p3_scenario(100.0, n_grid=50)
        with pytest.raises(ValueError, match="length 49"):
            as_control_grid(np.zeros(49), scn)

    def test_list_input_accepted(self):
        scn = p3_scenario(100.0, n_grid=4)
        u = as_control_grid([0.0, 0.1, -0.1, 0.0], scn)
        assert u.dtype == float and u.shape == (4,)


class TestSimulate:
    def test_shapes_and_grid(self):
        scn = p3_scenario(100.0, n_grid=200)
        traj = simulate(scn, np.zeros(200))
        assert traj.states.shape == (201, 6)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == pytest.approx(100.0)

    def test_straight_run_geometry(self):
        # Zero turn rate from (5, 0) heading +x is a straight x-axis run.
        scn = p3_scenario(100.0, n_grid=100)
        traj = simulate(scn, np.zeros(100))
        assert traj.states[-1, 0] == pytest.approx(5.0 + 0.04 * 100.0)
        assert np.all(traj.states[:, 1] == 0.0)

    def test_accumulators_monotone(self, rng):
        # z1 and z2 integrate non-negative integrands.
        scn = p3_scenario(120.0, n_grid=300)
        traj = simulate(scn, random_p3_control(rng, scn))
        assert np.all(np.diff(traj.states[:, 3]) >= 0.0)
        assert np.all(np.diff(traj.states[:, 4]) >= 0.0)

    def test_deterministic_bits(self, rng):
        scn = p3_scenario(100.0, n_grid=150)
        u = random_p3_control(rng, scn)
        a = simulate(scn, u)
        b = simulate(scn, u)
        assert np.array_equal(a.states, b.states)
        assert a.objective == b.objective

    def test_euler_and_heun_agree_at_fine_grids(self, rng):
        u_fn = lambda t: 0.5 * TURN_RATE_MAX * math.sin(2 * math.pi * t / 100)
        results = {}
        for scheme in Scheme:
            scn = p3_scenario(100.0, n_grid=4000)
            t_mid = (np.arange(4000) + 0.5) * scn.h
            u = np.array([u_fn(t) for t in t_mid])
            results[scheme] = simulate(scn, u, scheme).objective
        assert results[Scheme.EULER] == pytest.approx(
            results[Scheme.HEUN], rel=1e-3)

    def test_range_underflow_raised(self):
        # Head straight at the target long enough to pass through the
        # guard circle (0.05 km here so grid nodes cannot step over it).
        scn = p3_scenario(130.0, n_grid=200, theta0=math.pi, min_range=0.05)
        with pytest.raises(RangeUnderflowError):
            simulate(scn, np.zeros(200))

    def test_p1_theta_column_mirrors_control(self, rng):
        scn = p1_scenario(100.0, n_grid=50)
        u = rng.uniform(-math.pi, math.pi, 50)
        traj = simulate(scn, u)
        assert np.array_equal(traj.states[:-1, 2], u)
        assert traj.states[-1, 2] == u[-1]


class TestGradient:
    @pytest.mark.parametrize("scheme", list(Scheme))
    def test_matches_finite_differences_p3(self, rng, scheme):
        scn = p3_scenario(100.0, n_grid=60)
        u = random_p3_control(rng, scn, scale=0.8)
        ga = gradient(scn, u, scheme)
        gf = fd_gradient(scn, u, scheme)
        assert np.max(np.abs(ga - gf)) <= 1e-6 * max(np.max(np.abs(gf)), 1.0)

    @pytest.mark.parametrize("scheme", list(Scheme))
    def test_matches_finite_differences_p1(self, rng, scheme):
        scn = p1_scenario(100.0, n_grid=60)
        u = rng.uniform(-math.pi, math.pi, 60)
        ga = gradient(scn, u, scheme)
        gf = fd_gradient(scn, u, scheme)
        assert np.max(np.abs(ga - gf)) <= 1e-6 * max(np.max(np.abs(gf)), 1.0)

    def test_gradient_deterministic(self, rng):
        scn = p3_scenario(100.0, n_grid=80)
        u = random_p3_control(rng, scn)
        assert np.array_equal(gradient(scn, u), gradient(scn, u))


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_cauchy_schwarz_invariant(data):
    """z3^2 <= z1*z2 on every trajectory: the accumulators are inner
    products of the same pair of weight functions."""
    n = data.draw(st.integers(min_value=5, max_value=60))
    coeffs = data.draw(st.lists(
        st.floats(min_value=-1.0, max_value=1.0), min_size=n, max_size=n))
    t_f = data.draw(st.floats(min_value=10.0, max_value=150.0))
    scn = p3_scenario(t_f, n_grid=n)
    u = np.asarray(coeffs) * scn.turn_rate_max
    try:
        traj = simulate(scn, u)
    except RangeUnderflowError:
        return
    z1, z2, z3 = traj.states[-1, 3:6]
    assert z3 * z3 <= z1 * z2 * (1.0 + 1e-12) + 1e-300
    assert traj.fim.det == fim_det(z1, z2, z3)
