import math

import pytest

from obspath.model import (
    Costate,
    ProblemKind,
    Scenario,
    ScenarioError,
    State,
    bearing,
    costate_rhs,
    fim_det,
    state_rhs,
    validate,
)
from conftest import p1_scenario, p3_scenario


class TestValidate:
    def test_canonical_scenarios_pass(self):
        validate(p3_scenario(100.0))
        validate(p1_scenario(100.0))

    @pytest.mark.parametrize("field, value, message", [
        ("v", 0.0, "v must be positive"),
        ("v", -1.0, "v must be positive"),
        ("t_f", 0.0, "t_f must be positive"),
        ("n_grid", 1, "n_grid must be at least 2"),
        ("sigma", 0.0, "sigma must be positive"),
        ("min_range", 0.0, "min_range must be positive"),
        ("turn_rate_max", 0.0, "turn_rate_max must be positive"),
    ])
    def test_field_errors_name_the_field(self, field, value, message):
        if field == "t_f":
            scn = p3_scenario(value)
        else:
            scn = p3_scenario(100.0, **{field: value})
        with pytest.raises(ScenarioError, match=message):
            validate(scn)

    def test_origin_start_rejected(self):
        scn = p3_scenario(100.0, x0=0.0, y0=0.0)
        with pytest.raises(ScenarioError, match="coincides with target"):
            validate(scn)

    def test_start_inside_guard_radius_rejected(self):
        scn = p3_scenario(100.0, x0=1e-9, y0=0.0)
        with pytest.raises(ScenarioError, match="below min_range"):
            validate(scn)

    def test_p1_ignores_turn_rate(self):
        validate(p1_scenario(100.0, turn_rate_max=0.0))


class TestScenarioProperties:
    def test_step_and_range(self):
        scn = p3_scenario(100.0, n_grid=500)
        assert scn.h == pytest.approx(0.2)
        assert scn.r0 == pytest.approx(5.0)

    def test_turn_radius_matches_hand_value(self):
        # 0.04 km/s at 5 deg/s turns on a 458 m circle.
        scn = p3_scenario(100.0)
        assert scn.turn_radius == pytest.approx(0.4584, rel=1e-3)


class TestFimDet:
    def test_definition(self):
        assert fim_det(3.0, 4.0, 2.0) == 8.0

    def test_zero_when_rank_deficient(self):
        # z = (a^2, b^2, ab) is the rank-one (outer product) case.
        assert fim_det(4.0, 9.0, 6.0) == 0.0


class TestBearing:
    def test_axes(self):
        assert bearing(1.0, 0.0) == 0.0
        assert bearing(0.0, 1.0) == pytest.approx(math.pi / 2)
        assert bearing(-1.0, 0.0) == pytest.approx(math.pi)

    def test_undefined_at_origin(self):
        with pytest.raises(ValueError):
            bearing(0.0, 0.0)


class TestStateRhs:
    def test_kinematics(self):
        scn = p3_scenario(100.0)
        s = State(x=5.0, y=0.0, theta=0.0, z1=0.0, z2=0.0, z3=0.0)
        ds = state_rhs(s, 0.01, scn)
        assert ds.x == pytest.approx(scn.v)
        assert ds.y == pytest.approx(0.0)
        assert ds.theta == pytest.approx(0.01)

    def test_information_rates_on_axis(self):
        # On the x-axis only the x-weighted accumulator grows; the cross
        # term and the y-weighted one vanish, so the determinant stays zero.
        scn = p3_scenario(100.0)
        s = State(x=5.0, y=0.0, theta=0.0, z1=0.0, z2=0.0, z3=0.0)
        ds = state_rhs(s, 0.0, scn)
        assert ds.z2 == 0.0
        assert ds.z3 == 0.0
        assert ds.z1 == pytest.approx(25.0 / 625.0)

    def test_rate_invariance_under_rotation_by_pi(self):
        scn = p3_scenario(100.0)
        a = state_rhs(State(3.0, 4.0, 0.3, 0, 0, 0), 0.0, scn)
        b = state_rhs(State(-3.0, -4.0, 0.3, 0, 0, 0), 0.0, scn)
        assert a.z1 == pytest.approx(b.z1)
        assert a.z2 == pytest.approx(b.z2)
        assert a.z3 == pytest.approx(b.z3)


class TestCostateRhs:
    def test_course_adjoint_rate_uses_velocity_direction(self):
        scn = p3_scenario(100.0)
        s = State(x=3.0, y=4.0, theta=0.7, z1=0, z2=0, z3=0)
        c = Costate(lx=0.2, ly=-0.5, ltheta=0.0, zbar1=1.0, zbar2=2.0,
                    zbar3=0.5)
        dc = costate_rhs(s, c, scn)
        expected = scn.v * (c.lx * math.sin(s.theta)
                            - c.ly * math.cos(s.theta))
        assert dc.ltheta == pytest.approx(expected)

    def test_position_adjoint_rates_antisymmetric_in_xy_swap(self):
        # Swapping (x, y) and (zbar1, zbar2) swaps the two rate components.
        scn = p3_scenario(100.0)
        c = Costate(lx=0.0, ly=0.0, ltheta=0.0, zbar1=1.3, zbar2=0.4,
                    zbar3=0.2)
        c_swapped = Costate(lx=0.0, ly=0.0, ltheta=0.0, zbar1=0.4,
                            zbar2=1.3, zbar3=0.2)
        d1 = costate_rhs(State(3.0, 4.0, 0.0, 0, 0, 0), c, scn)
        d2 = costate_rhs(State(4.0, 3.0, 0.0, 0, 0, 0), c_swapped, scn)
        assert d1.lx == pytest.approx(d2.ly)
        assert d1.ly == pytest.approx(d2.lx)
