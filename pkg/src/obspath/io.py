"""Scenario files and CSV artifacts.

Scenario files are `key = value` lines with `#` comments.  All parse and
validation errors carry the offending line number.  CSV columns and
headers are fixed; numbers are written with repr-precision so files
round-trip exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .model import ProblemKind, Scenario, ScenarioError, validate
from .transcribe import Scheme, Trajectory

TRAJECTORY_HEADER = "t,x_km,y_km,theta_rad,u_radps,z1,z2,z3"
COSTATES_HEADER = "t,lambda_x,lambda_y,lambda_theta,lambda_theta_dot"

_SCENARIO_KEYS = {
    "kind", "v_mps", "turn_rate_max_dps", "x0_km", "y0_km", "theta0_deg",
    "t_f_s", "n_grid", "sigma", "scheme",
}
_REQUIRED = {"kind", "v_mps", "x0_km", "y0_km", "t_f_s"}


class ParseError(ValueError):
    """Scenario or CSV parse failure, with location information."""


def parse_scenario(text: str) -> Scenario:
    """Parse the `key = value` scenario format; apply unit conversions."""
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCENARIO_KEYS:
            raise ParseError(f"line {lineno}: unknown key '{key}'")
        if key in raw:
            raise ParseError(f"line {lineno}: duplicate key '{key}'")
        raw[key] = value
        lines[key] = lineno

    missing = _REQUIRED - raw.keys()
    if missing:
        raise ParseError(f"missing required key(s): {', '.join(sorted(missing))}")

    def num(key: str, default: float | None = None) -> float:
        if key not in raw:
            if default is None:
                raise ParseError(f"missing required key: {key}")
            return default
        try:
            return float(raw[key])
        except ValueError:
            raise ParseError(
                f"line {lines[key]}: '{raw[key]}' is not a number"
            ) from None

    kind_text = raw["kind"].upper()
    if kind_text not in ("P1", "P3"):
        raise ParseError(f"line {lines['kind']}: kind must be P1 or P3")
    kind = ProblemKind[kind_text]
    if kind is ProblemKind.P3 and "turn_rate_max_dps" not in raw:
        raise ParseError("missing required key: turn_rate_max_dps (P3)")
    if kind is ProblemKind.P3 and "theta0_deg" not in raw:
        raise ParseError("missing required key: theta0_deg (P3)")

    n_grid = num("n_grid", 1000.0)
    if n_grid != int(n_grid):
        raise ParseError(f"line {lines['n_grid']}: n_grid must be an integer")

    scn = Scenario(
        kind=kind,
        v=num("v_mps") / 1000.0,                      # m/s -> km/s
        turn_rate_max=math.radians(num("turn_rate_max_dps", 0.0)),
        x0=num("x0_km"),
        y0=num("y0_km"),
        theta0=math.radians(num("theta0_deg", 0.0)),
        t_f=num("t_f_s"),
        n_grid=int(n_grid),
        sigma=num("sigma", 1.0),
    )
    try:
        validate(scn)
    except ScenarioError as exc:
        raise ParseError(str(exc)) from exc
    return scn


def parse_scheme(text: str, default: Scheme = Scheme.HEUN) -> Scheme:
    """Extract the optional scheme key from a scenario file."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if stripped.startswith("scheme"):
            _, _, value = stripped.partition("=")
            value = value.strip().lower()
            if value not in ("euler", "heun"):
                raise ParseError(f"line {lineno}: scheme must be euler or heun")
            return Scheme(value)
    return default


def _course_rate(u: np.ndarray, traj: Trajectory, scn: Scenario) -> np.ndarray:
    """Per-row control column: theta_dot on each subinterval (last repeated)."""
    if scn.kind is ProblemKind.P3:
        rates = u
    else:
        h = scn.h
        theta = np.append(u, u[-1])
        rates = np.diff(theta) / h
    return np.append(rates, rates[-1])


def write_trajectory_csv(path, traj: Trajectory, u: np.ndarray,
                         scn: Scenario) -> None:
    rates = _course_rate(u, traj, scn)
    theta = traj.states[:, 2]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TRAJECTORY_HEADER + "\n")
        for k in range(traj.times.size):
            row = (traj.times[k], traj.states[k, 0], traj.states[k, 1],
                   theta[k], rates[k], traj.states[k, 3],
                   traj.states[k, 4], traj.states[k, 5])
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def read_trajectory_csv(path) -> np.ndarray:
    """Return the raw (n+1, 8) value matrix; validates header and rows."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != TRAJECTORY_HEADER:
            raise ParseError(f"{path}: row 1: bad header {header!r}")
        rows = []
        for rowno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.strip().split(",")
            if len(parts) != 8:
                raise ParseError(f"{path}: row {rowno}: expected 8 columns")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise ParseError(
                    f"{path}: row {rowno}: non-numeric value"
                ) from None
    if len(rows) < 3:
        raise ParseError(f"{path}: fewer than 3 data rows")
    return np.asarray(rows)


def write_costates_csv(path, times, lx, ly, lth, lth_dot) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(COSTATES_HEADER + "\n")
        for k in range(len(times)):
            row = (times[k], lx[k], ly[k], lth[k], lth_dot[k])
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
