"""Observer path planning for bearings-only target localization.

Maximizes the determinant of the Fisher information matrix accumulated
along a constant-speed observer path, with either a free course (P1) or a
prescribed initial course and bounded turn rate (P3), and verifies the
Maximum Principle necessary conditions on every computed solution.
"""

from ._backend import backend_name
from .model import (
    Costate,
    Fim,
    ProblemKind,
    RangeUnderflowError,
    Scenario,
    ScenarioError,
    State,
    bearing,
    costate_rhs,
    fim_det,
    state_rhs,
    validate,
)
from .transcribe import Scheme, Trajectory, fd_gradient, gradient, objective, simulate

__all__ = [
    "Costate",
    "Fim",
    "ProblemKind",
    "RangeUnderflowError",
    "Scenario",
    "ScenarioError",
    "Scheme",
    "State",
    "Trajectory",
    "backend_name",
    "bearing",
    "costate_rhs",
    "fd_gradient",
    "fim_det",
    "gradient",
    "objective",
    "simulate",
    "state_rhs",
    "validate",
]

__version__ = "0.1.0"
