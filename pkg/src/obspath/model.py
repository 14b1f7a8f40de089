"""Continuous-time problem definition.

State is (x, y, theta, z1, z2, z3): relative observer position [km],
course [rad], and the three running integrals whose terminal values form
the (sigma-normalized) Fisher information matrix of the bearing
measurement process.  Everything is kept in kilometers and seconds so the
standard example (40 m/s, 5 km initial range) has positions and
information integrands on comparable scales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class ProblemKind(Enum):
    """P1: free course, theta itself is the control.
    P3: prescribed initial course, bounded course rate."""

    P1 = "P1"
    P3 = "P3"


class ScenarioError(ValueError):
    """Raised when a scenario violates a model invariant."""


class RangeUnderflowError(ArithmeticError):
    """Trajectory passed within min_range of the target."""


@dataclass(frozen=True)
class Scenario:
    kind: ProblemKind
    v: float                    # observer speed [km/s]
    x0: float                   # initial relative position [km]
    y0: float
    t_f: float                  # horizon [s]
    n_grid: int = 1000          # control subintervals
    turn_rate_max: float = 0.0  # max |theta_dot| [rad/s], P3 only
    theta0: float = 0.0         # initial course [rad], P3 only
    sigma: float = 1.0          # bearing noise std dev [rad], reporting only
    min_range: float = 1e-6     # singularity guard [km]

    @property
    def h(self) -> float:
        return self.t_f / self.n_grid

    @property
    def r0(self) -> float:
        return math.hypot(self.x0, self.y0)

    @property
    def turn_radius(self) -> float:
        """Minimum turning radius v / turn_rate_max [km] (P3)."""
        return self.v / self.turn_rate_max


def validate(scn: Scenario) -> None:
    """Check all Scenario invariants; raise ScenarioError naming the field."""
    if not scn.v > 0:
        raise ScenarioError("v must be positive")
    if not scn.t_f > 0:
        raise ScenarioError("t_f must be positive")
    if scn.n_grid < 2:
        raise ScenarioError("n_grid must be at least 2")
    if not scn.sigma > 0:
        raise ScenarioError("sigma must be positive")
    if not scn.min_range > 0:
        raise ScenarioError("min_range must be positive")
    if scn.x0 == 0.0 and scn.y0 == 0.0:
        raise ScenarioError("initial position coincides with target")
    if scn.r0 < scn.min_range:
        raise ScenarioError("initial range below min_range")
    if scn.kind is ProblemKind.P3:
        if not scn.turn_rate_max > 0:
            raise ScenarioError("turn_rate_max must be positive for P3")
        if not math.isfinite(scn.theta0):
            raise ScenarioError("theta0 must be finite for P3")


@dataclass(frozen=True)
class State:
    x: float
    y: float
    theta: float
    z1: float
    z2: float
    z3: float


@dataclass(frozen=True)
class Costate:
    lx: float
    ly: float
    ltheta: float
    # Terminal z-values of the trajectory under verification; the constant
    # adjoints of the accumulators are -zbar2, -zbar1, 2*zbar3.
    zbar1: float
    zbar2: float
    zbar3: float


@dataclass(frozen=True)
class Fim:
    z1: float
    z2: float
    z3: float
    det: float = field(init=False)  # = z1*z2 - z3^2, i.e. sigma^4 * det F

    def __post_init__(self) -> None:
        object.__setattr__(self, "det", fim_det(self.z1, self.z2, self.z3))


def fim_det(z1: float, z2: float, z3: float) -> float:
    """sigma^4 * det F = z1*z2 - z3^2."""
    return z1 * z2 - z3 * z3


def bearing(x: float, y: float) -> float:
    """Quadrant-correct angle of (x, y) in (-pi, pi]."""
    if x == 0.0 and y == 0.0:
        raise ValueError("bearing undefined at origin")
    return math.atan2(y, x)


def _check_range(x: float, y: float, min_range: float) -> float:
    rho = x * x + y * y
    if rho < min_range * min_range:
        raise RangeUnderflowError(
            f"range {math.sqrt(rho):.3e} km below min_range {min_range:.3e} km"
        )
    return rho


def state_rhs(s: State, u: float, scn: Scenario) -> State:
    """Time derivative of the state under control u.

    For P3, u is the course rate theta_dot; for P1, u is the course itself
    and the theta slot of the derivative is zero (unused).
    """
    rho = _check_range(s.x, s.y, scn.min_range)
    theta = u if scn.kind is ProblemKind.P1 else s.theta
    rho2 = rho * rho
    return State(
        x=scn.v * math.cos(theta),
        y=scn.v * math.sin(theta),
        theta=0.0 if scn.kind is ProblemKind.P1 else u,
        z1=s.x * s.x / rho2,
        z2=s.y * s.y / rho2,
        z3=s.x * s.y / rho2,
    )


def costate_rhs(s: State, c: Costate, scn: Scenario) -> Costate:
    """Time derivative of (lambda_x, lambda_y, lambda_theta).

    The constant accumulator adjoints enter through the zbar fields; the
    returned Costate carries zeros there (they do not evolve).
    """
    rho = _check_range(s.x, s.y, scn.min_range)
    rho3 = rho * rho * rho
    x, y = s.x, s.y
    zb1, zb2, zb3 = c.zbar1, c.zbar2, c.zbar3
    lx_dot = (
        -2.0 * zb2 * x**3
        + 6.0 * zb3 * x**2 * y
        + 2.0 * (zb2 - 2.0 * zb1) * x * y**2
        - 2.0 * zb3 * y**3
    ) / rho3
    ly_dot = (
        -2.0 * zb1 * y**3
        + 6.0 * zb3 * y**2 * x
        + 2.0 * (zb1 - 2.0 * zb2) * y * x**2
        - 2.0 * zb3 * x**3
    ) / rho3
    ltheta_dot = scn.v * (c.lx * math.sin(s.theta) - c.ly * math.cos(s.theta))
    return Costate(lx=lx_dot, ly=ly_dot, ltheta=ltheta_dot,
                   zbar1=0.0, zbar2=0.0, zbar3=0.0)
