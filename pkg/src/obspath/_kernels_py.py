"""Pure-Python shooting kernels (fallback backend).

Same contract as the compiled extension in ``_fastkern``: forward
integration of the 6-state shooting map and its exact discrete adjoint.
Plain-float loops, no vectorization tricks, so the code can serve as the
readable reference for the Cython version.

kind: 0 = P1 (control is the course theta), 1 = P3 (control is theta_dot).
scheme: 0 = Euler, 1 = Heun (explicit trapezoidal predictor-corrector).
"""

from __future__ import annotations

import math

import numpy as np

from .model import RangeUnderflowError

BACKEND_NAME = "python"


def _underflow(rho: float, minr2: float) -> bool:
    return rho < minr2


def _raise_underflow(rho: float) -> None:
    raise RangeUnderflowError(
        f"range {math.sqrt(rho):.3e} km fell below the min_range guard"
    )


def forward(kind: int, scheme: int, x0: float, y0: float, theta0: float,
            u: np.ndarray, h: float, v: float, minr2: float) -> np.ndarray:
    """Integrate the shooting map; return states array of shape (n+1, 6).

    Columns: x, y, theta, z1, z2, z3.  For P1 the theta column records the
    control (theta value of the subinterval; last row repeats the final one).
    """
    n = len(u)
    out = np.empty((n + 1, 6))
    x, y, th = x0, y0, theta0
    z1 = z2 = z3 = 0.0
    for k in range(n):
        uk = u[k]
        if kind == 0:
            th = uk
        out[k, 0] = x
        out[k, 1] = y
        out[k, 2] = th
        out[k, 3] = z1
        out[k, 4] = z2
        out[k, 5] = z3
        rho = x * x + y * y
        if _underflow(rho, minr2):
            _raise_underflow(rho)
        r2 = rho * rho
        c, s = math.cos(th), math.sin(th)
        fx, fy = v * c, v * s
        f1, f2, f3 = x * x / r2, y * y / r2, x * y / r2
        if scheme == 0:
            x += h * fx
            y += h * fy
            if kind == 1:
                th += h * uk
            z1 += h * f1
            z2 += h * f2
            z3 += h * f3
        else:
            xp = x + h * fx
            yp = y + h * fy
            thp = th + h * uk if kind == 1 else th
            rhop = xp * xp + yp * yp
            if _underflow(rhop, minr2):
                _raise_underflow(rhop)
            r2p = rhop * rhop
            cp, sp = math.cos(thp), math.sin(thp)
            x += 0.5 * h * (fx + v * cp)
            y += 0.5 * h * (fy + v * sp)
            if kind == 1:
                th = thp
            z1 += 0.5 * h * (f1 + xp * xp / r2p)
            z2 += 0.5 * h * (f2 + yp * yp / r2p)
            z3 += 0.5 * h * (f3 + xp * yp / r2p)
    rho = x * x + y * y
    if _underflow(rho, minr2):
        _raise_underflow(rho)
    out[n, 0] = x
    out[n, 1] = y
    out[n, 2] = th
    out[n, 3] = z1
    out[n, 4] = z2
    out[n, 5] = z3
    return out


def adjoint_gradient(kind: int, scheme: int, states: np.ndarray,
                     u: np.ndarray, h: float, v: float) -> np.ndarray:
    """Exact gradient of z3(t_f)^2 - z1(t_f)*z2(t_f) w.r.t. each control.

    Backward recursion of the transposed Jacobians of the discrete forward
    map stored in ``states`` (as produced by :func:`forward` with the same
    scheme).  The accumulator adjoints are constant: (-z2_f, -z1_f, 2 z3_f).
    """
    n = len(u)
    grad = np.empty(n)
    z1f, z2f, z3f = states[n, 3], states[n, 4], states[n, 5]
    w1, w2, w3 = -z2f, -z1f, 2.0 * z3f
    wx = wy = wth = 0.0

    def ax_ay(x: float, y: float) -> tuple[float, float]:
        # Transposed z-integrand Jacobian entries feeding lambda_x, lambda_y.
        rho = x * x + y * y
        r3 = rho * rho * rho
        ax = (w1 * (2.0 * x * y * y - 2.0 * x * x * x)
              + w2 * (-4.0 * x * y * y)
              + w3 * (y * y * y - 3.0 * x * x * y)) / r3
        ay = (w1 * (-4.0 * x * x * y)
              + w2 * (2.0 * x * x * y - 2.0 * y * y * y)
              + w3 * (x * x * x - 3.0 * x * y * y)) / r3
        return ax, ay

    for k in range(n - 1, -1, -1):
        x, y = states[k, 0], states[k, 1]
        uk = u[k]
        th = uk if kind == 0 else states[k, 2]
        c, s = math.cos(th), math.sin(th)
        axs, ays = ax_ay(x, y)
        if scheme == 0:
            if kind == 1:
                grad[k] = h * wth
                wth += h * v * (-s * wx + c * wy)
            else:
                grad[k] = h * v * (-s * wx + c * wy)
            wx += h * axs
            wy += h * ays
        else:
            # Predictor state of step k (recomputed, not stored).
            xp = x + h * v * c
            yp = y + h * v * s
            axp, ayp = ax_ay(xp, yp)
            if kind == 1:
                thp = th + h * uk
                w2th = v * (-math.sin(thp) * wx + math.cos(thp) * wy)
                tx = wx + h * axp
                ty = wy + h * ayp
                tth = wth + h * w2th
                grad[k] = 0.5 * h * (tth + wth)
                wth = wth + 0.5 * h * (v * (-s * tx + c * ty) + w2th)
                wx = wx + 0.5 * h * (axs + axp)
                wy = wy + 0.5 * h * (ays + ayp)
            else:
                tx = wx + h * axp
                ty = wy + h * ayp
                grad[k] = 0.5 * h * v * (-s * (tx + wx) + c * (ty + wy))
                wx = wx + 0.5 * h * (axs + axp)
                wy = wy + 0.5 * h * (ays + ayp)
    return grad
