"""Maximum Principle verification.

Costates are obtained by backward integration of the continuous adjoint
equations along the stored forward trajectory (not the optimizer's
discrete adjoint), so the check is independent of the gradient machinery
used to compute the candidate solution.  Verified conditions: the
transversality values, the vanishing terminal switching rate, the bang
control law, the course formula on singular arcs, and constancy of the
Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ProblemKind, Scenario
from .optimize import Solution
from .transcribe import Scheme, Trajectory


class ArcKind(Enum):
    BANG_PLUS = "bang(+)"
    BANG_MINUS = "bang(-)"
    SINGULAR = "singular"


@dataclass(frozen=True)
class Arc:
    kind: ArcKind
    start: int   # grid index, inclusive
    end: int     # grid index, inclusive


@dataclass(frozen=True)
class ArcStructure:
    arcs: tuple[Arc, ...]
    label: str   # e.g. "bang(+)-singular-bang(+)"


@dataclass(frozen=True)
class CostateTrajectory:
    times: np.ndarray
    lx: np.ndarray
    ly: np.ndarray
    ltheta: np.ndarray          # the switching function
    ltheta_dot: np.ndarray      # its rate, from the adjoint equation
    zbar1: float
    zbar2: float
    zbar3: float


@dataclass(frozen=True)
class Tolerances:
    eps_singular: float = 1e-3          # relative to max |lambda_theta|
    min_arc_points: int = 3
    fact1_rtol: float = 1e-12           # on |switching rate at t_f|
    bang_tol: float = 1e-9              # |u -/+ turn_rate_max| on bang points
    singular_course_tol: float = 0.02   # [rad]
    hamiltonian_drift_tol: float = 1e-3
    boundary_exclude: int = 10          # points dropped at each arc edge


@dataclass(frozen=True)
class VerificationReport:
    transversality_residual: float
    fact1_residual: float
    bang_sign_violations: int
    singular_theta_max_err: float
    hamiltonian_drift: float
    arc_structure: ArcStructure
    passed: bool


def _theta_series(traj: Trajectory, u: np.ndarray, scn: Scenario) -> np.ndarray:
    if scn.kind is ProblemKind.P3:
        return traj.states[:, 2]
    # For P1 the course is the control; the stored theta column mirrors it.
    return np.append(u, u[-1])


def _adjoint_xy_rate(x: float, y: float, zb1: float, zb2: float,
                     zb3: float) -> tuple[float, float]:
    rho = x * x + y * y
    r3 = rho * rho * rho
    lx_dot = (-2.0 * zb2 * x**3 + 6.0 * zb3 * x**2 * y
              + 2.0 * (zb2 - 2.0 * zb1) * x * y**2 - 2.0 * zb3 * y**3) / r3
    ly_dot = (-2.0 * zb1 * y**3 + 6.0 * zb3 * y**2 * x
              + 2.0 * (zb1 - 2.0 * zb2) * y * x**2 - 2.0 * zb3 * x**3) / r3
    return lx_dot, ly_dot


def integrate_costates(traj: Trajectory, scn: Scenario,
                       scheme: Scheme = Scheme.HEUN,
                       u: np.ndarray | None = None) -> CostateTrajectory:
    """Backward-integrate the adjoint ODEs from lambda(t_f) = 0.

    States at grid instants are taken from the stored trajectory; the
    integration scheme matches the forward pass.  For P1 the control grid
    must be supplied (it is the course history).
    """
    n = traj.times.size - 1
    h = float(traj.times[1] - traj.times[0])
    zb1, zb2, zb3 = (float(traj.states[n, 3]), float(traj.states[n, 4]),
                     float(traj.states[n, 5]))
    if scn.kind is ProblemKind.P1 and u is None:
        raise ValueError("P1 costate integration needs the control grid")
    theta = _theta_series(traj, u, scn) if u is not None else traj.states[:, 2]
    if scn.kind is ProblemKind.P3:
        theta = traj.states[:, 2]

    lx = np.zeros(n + 1)
    ly = np.zeros(n + 1)
    lth = np.zeros(n + 1)

    def rate(k: int, lxv: float, lyv: float) -> tuple[float, float, float]:
        x, y = float(traj.states[k, 0]), float(traj.states[k, 1])
        gx, gy = _adjoint_xy_rate(x, y, zb1, zb2, zb3)
        gth = scn.v * (lxv * math.sin(theta[k]) - lyv * math.cos(theta[k]))
        return gx, gy, gth

    for k in range(n - 1, -1, -1):
        gx1, gy1, gth1 = rate(k + 1, lx[k + 1], ly[k + 1])
        if scheme is Scheme.EULER:
            lx[k] = lx[k + 1] - h * gx1
            ly[k] = ly[k + 1] - h * gy1
            lth[k] = lth[k + 1] - h * gth1
        else:
            lxp = lx[k + 1] - h * gx1
            lyp = ly[k + 1] - h * gy1
            gx0, gy0, gth0 = rate(k, lxp, lyp)
            lx[k] = lx[k + 1] - 0.5 * h * (gx1 + gx0)
            ly[k] = ly[k + 1] - 0.5 * h * (gy1 + gy0)
            lth[k] = lth[k + 1] - 0.5 * h * (gth1 + gth0)

    lth_dot = scn.v * (lx * np.sin(theta) - ly * np.cos(theta))
    return CostateTrajectory(times=traj.times.copy(), lx=lx, ly=ly,
                             ltheta=lth, ltheta_dot=lth_dot,
                             zbar1=zb1, zbar2=zb2, zbar3=zb3)


def switching_function(ct: CostateTrajectory) -> tuple[np.ndarray, np.ndarray]:
    """The lambda_theta series and its rate series."""
    return ct.ltheta, ct.ltheta_dot


def classify_arcs(ct: CostateTrajectory, u: np.ndarray, scn: Scenario,
                  eps_singular: float = 1e-3,
                  min_arc_points: int = 3) -> ArcStructure:
    """Label each grid point bang(+)/bang(-)/singular, then merge runs
    shorter than min_arc_points into the dominant neighbor.

    Points where the control sits exactly on a bound are bang arcs; the
    switching-function magnitude (relative to its global maximum) decides
    the remaining points.  The control test matters because the switching
    function can span many orders of magnitude along one trajectory: a
    short terminal bang arc's switching values may be a million times
    smaller than the initial arc's, far below any workable global
    threshold."""
    if scn.kind is not ProblemKind.P3:
        raise ValueError("arc classification applies to P3 solutions")
    lth = ct.ltheta
    scale = float(np.max(np.abs(lth)))
    if scale == 0.0:
        raise ValueError("switching function vanishes identically; "
                         "cannot classify a fully degenerate solution")
    kinds = np.where(
        np.abs(lth) <= eps_singular * scale,
        2,
        np.where(lth < 0.0, 0, 1),
    )  # 0 bang(+), 1 bang(-), 2 singular
    u_node = np.append(u, u[-1])  # control held on [t_k, t_{k+1})
    b = scn.turn_rate_max
    kinds = np.where(u_node >= b, 0, np.where(u_node <= -b, 1, kinds))

    runs: list[list[int]] = []  # [kind, start, end]
    for k, kd in enumerate(kinds):
        if runs and runs[-1][0] == kd:
            runs[-1][2] = k
        else:
            runs.append([kd, k, k])
    # Merge short runs into the longer adjacent neighbor.
    changed = True
    while changed and len(runs) > 1:
        changed = False
        for i, r in enumerate(runs):
            if r[2] - r[1] + 1 < min_arc_points:
                left = runs[i - 1] if i > 0 else None
                right = runs[i + 1] if i + 1 < len(runs) else None
                host = max(
                    (x for x in (left, right) if x is not None),
                    key=lambda x: x[2] - x[1],
                )
                host[1] = min(host[1], r[1])
                host[2] = max(host[2], r[2])
                runs.pop(i)
                changed = True
                break
        # Adjacent same-kind runs can appear after a merge.
        i = 0
        while i + 1 < len(runs):
            if runs[i][0] == runs[i + 1][0]:
                runs[i][2] = runs[i + 1][2]
                runs.pop(i + 1)
            else:
                i += 1

    kind_map = {0: ArcKind.BANG_PLUS, 1: ArcKind.BANG_MINUS, 2: ArcKind.SINGULAR}
    arcs = tuple(Arc(kind=kind_map[r[0]], start=r[1], end=r[2]) for r in runs)
    label = "-".join(a.kind.value for a in arcs)
    return ArcStructure(arcs=arcs, label=label)


def _mod_pi_distance(a: float, b: float) -> float:
    d = (a - b) % math.pi
    return min(d, math.pi - d)


def singular_course_check(traj: Trajectory, ct: CostateTrajectory,
                          arcs: ArcStructure, scn: Scenario,
                          u: np.ndarray | None = None,
                          boundary_exclude: int = 10) -> float:
    """Max angular error |theta - atan2(lambda_y, lambda_x)| (mod pi) over
    singular-arc interiors; points where both adjoints vanish are skipped."""
    theta = _theta_series(traj, u, scn) if u is not None else traj.states[:, 2]
    worst = 0.0
    for arc in arcs.arcs:
        if arc.kind is not ArcKind.SINGULAR:
            continue
        lo = arc.start + boundary_exclude
        hi = arc.end - boundary_exclude
        for k in range(lo, hi + 1):
            lx, ly = ct.lx[k], ct.ly[k]
            if lx == 0.0 and ly == 0.0:
                continue
            sing = math.atan2(ly, lx)
            worst = max(worst, _mod_pi_distance(float(theta[k]), sing))
    return worst


def hamiltonian_series(traj: Trajectory, ct: CostateTrajectory,
                       u: np.ndarray, scn: Scenario) -> np.ndarray:
    """Hamiltonian at every grid instant (controls extended to t_f by the
    last subinterval value)."""
    x = traj.states[:, 0]
    y = traj.states[:, 1]
    theta = _theta_series(traj, u, scn)
    u_ext = np.append(u, u[-1])
    rho2 = (x * x + y * y) ** 2
    lam_z1, lam_z2, lam_z3 = -ct.zbar2, -ct.zbar1, 2.0 * ct.zbar3
    h_series = (ct.lx * scn.v * np.cos(theta)
                + ct.ly * scn.v * np.sin(theta)
                + lam_z1 * x * x / rho2
                + lam_z2 * y * y / rho2
                + lam_z3 * x * y / rho2)
    if scn.kind is ProblemKind.P3:
        h_series = h_series + ct.ltheta * u_ext
    return h_series


def verify(sol: Solution, scn: Scenario, scheme: Scheme = Scheme.HEUN,
           tol: Tolerances = Tolerances()) -> VerificationReport:
    """Aggregate all Maximum Principle checks for a candidate solution."""
    traj = sol.trajectory
    u = sol.control
    ct = integrate_costates(traj, scn, scheme, u=u)
    n = traj.times.size - 1

    transversality = max(abs(ct.lx[n]), abs(ct.ly[n]), abs(ct.ltheta[n]))
    rate_scale = float(np.max(np.abs(ct.ltheta_dot)))
    fact1 = abs(float(ct.ltheta_dot[n]))

    if scn.kind is ProblemKind.P3:
        arcs = classify_arcs(ct, u, scn, tol.eps_singular, tol.min_arc_points)
        scale = float(np.max(np.abs(ct.ltheta)))
        violations = 0
        b = scn.turn_rate_max
        for k in range(n):
            if abs(ct.ltheta[k]) <= tol.eps_singular * scale:
                continue
            want = b if ct.ltheta[k] < 0.0 else -b
            if abs(u[k] - want) > tol.bang_tol:
                violations += 1
        sing_err = singular_course_check(
            traj, ct, arcs, scn, u=u, boundary_exclude=tol.boundary_exclude)
    else:
        # P1: the course formula of the stationarity condition holds
        # globally; treat the whole horizon as one singular arc.
        arcs = ArcStructure(
            arcs=(Arc(ArcKind.SINGULAR, 0, n),), label="singular")
        violations = 0
        sing_err = singular_course_check(
            traj, ct, arcs, scn, u=u, boundary_exclude=tol.boundary_exclude)

    h_series = hamiltonian_series(traj, ct, u, scn)
    drift = float(np.max(np.abs(h_series - h_series[0]))
                  / (1.0 + abs(float(h_series[0]))))

    passed = (
        transversality == 0.0
        and fact1 <= tol.fact1_rtol * max(rate_scale, 1e-300)
        and violations == 0
        and sing_err <= tol.singular_course_tol
        and drift <= tol.hamiltonian_drift_tol
    )
    return VerificationReport(
        transversality_residual=transversality,
        fact1_residual=fact1,
        bang_sign_violations=violations,
        singular_theta_max_err=sing_err,
        hamiltonian_drift=drift,
        arc_structure=arcs,
        passed=passed,
    )
