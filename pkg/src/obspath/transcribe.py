"""Single-shooting transcription.

The decision vector is a piecewise-constant control grid; states are
eliminated by forward integration (Euler or Heun).  The gradient is the
exact discrete adjoint of the integrator, i.e. the gradient of the
discretized objective, not a discretization of the continuous costate
equations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import kernels
from .model import Fim, ProblemKind, Scenario, validate


class Scheme(Enum):
    EULER = "euler"
    HEUN = "heun"

    @property
    def code(self) -> int:
        return 0 if self is Scheme.EULER else 1


def _kind_code(scn: Scenario) -> int:
    return 0 if scn.kind is ProblemKind.P1 else 1


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray    # (n+1,) grid instants [s]
    states: np.ndarray   # (n+1, 6): x, y, theta, z1, z2, z3
    objective: float     # z3(t_f)^2 - z1(t_f)*z2(t_f) (minimization sense)
    fim: Fim

    @property
    def objective_reported(self) -> float:
        """sigma^4 * det F, the quantity tabulated for solutions."""
        return -self.objective


def as_control_grid(values, scn: Scenario) -> np.ndarray:
    u = np.ascontiguousarray(values, dtype=float)
    if u.shape != (scn.n_grid,):
        raise ValueError(
            f"control grid has length {u.size}, scenario needs {scn.n_grid}"
        )
    return u


def simulate(scn: Scenario, u, scheme: Scheme = Scheme.HEUN) -> Trajectory:
    """Integrate the state under the piecewise-constant control grid."""
    validate(scn)
    u = as_control_grid(u, scn)
    theta0 = scn.theta0 if scn.kind is ProblemKind.P3 else 0.0
    states = kernels.forward(
        _kind_code(scn), scheme.code, scn.x0, scn.y0, theta0,
        u, scn.h, scn.v, scn.min_range * scn.min_range,
    )
    times = np.linspace(0.0, scn.t_f, scn.n_grid + 1)
    z1, z2, z3 = states[-1, 3], states[-1, 4], states[-1, 5]
    fim = Fim(z1=z1, z2=z2, z3=z3)
    return Trajectory(times=times, states=states,
                      objective=-fim.det, fim=fim)


def objective(traj: Trajectory) -> float:
    return traj.objective


def gradient(scn: Scenario, u, scheme: Scheme = Scheme.HEUN) -> np.ndarray:
    """Exact gradient of the discretized objective w.r.t. each control."""
    validate(scn)
    u = as_control_grid(u, scn)
    traj = simulate(scn, u, scheme)
    return kernels.adjoint_gradient(
        _kind_code(scn), scheme.code, traj.states, u, scn.h, scn.v
    )


def gradient_from_trajectory(scn: Scenario, u: np.ndarray,
                             traj: Trajectory, scheme: Scheme) -> np.ndarray:
    """Gradient reusing an already-computed forward pass."""
    return kernels.adjoint_gradient(
        _kind_code(scn), scheme.code, traj.states, u, scn.h, scn.v
    )


def fd_gradient(scn: Scenario, u, scheme: Scheme = Scheme.HEUN,
                step: float = 1e-6) -> np.ndarray:
    """Central finite differences of objective(simulate(...)); test oracle."""
    u = as_control_grid(u, scn)
    g = np.empty_like(u)
    for k in range(u.size):
        up = u.copy()
        up[k] += step
        um = u.copy()
        um[k] -= step
        g[k] = (simulate(scn, up, scheme).objective
                - simulate(scn, um, scheme).objective) / (2.0 * step)
    return g
