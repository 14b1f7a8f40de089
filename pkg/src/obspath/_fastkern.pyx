# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled shooting kernels.

Mirrors obspath._kernels_py exactly (same contract, same arithmetic order)
so the two backends produce bit-identical trajectories and gradients.
"""

from libc.math cimport cos, sin, sqrt

import numpy as np

from .model import RangeUnderflowError

BACKEND_NAME = "cython"


cdef inline void _raise_underflow(double rho):
    raise RangeUnderflowError(
        f"range {sqrt(rho):.3e} km fell below the min_range guard"
    )


def forward(int kind, int scheme, double x0, double y0, double theta0,
            double[::1] u, double h, double v, double minr2):
    cdef int n = u.shape[0]
    out_arr = np.empty((n + 1, 6))
    cdef double[:, ::1] out = out_arr
    cdef double x = x0, y = y0, th = theta0
    cdef double z1 = 0.0, z2 = 0.0, z3 = 0.0
    cdef double uk, rho, r2, c, s, fx, fy, f1, f2, f3
    cdef double xp, yp, thp, rhop, r2p, cp, sp
    cdef int k
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
        if rho < minr2:
            _raise_underflow(rho)
        r2 = rho * rho
        c = cos(th)
        s = sin(th)
        fx = v * c
        fy = v * s
        f1 = x * x / r2
        f2 = y * y / r2
        f3 = x * y / r2
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
            if rhop < minr2:
                _raise_underflow(rhop)
            r2p = rhop * rhop
            cp = cos(thp)
            sp = sin(thp)
            x += 0.5 * h * (fx + v * cp)
            y += 0.5 * h * (fy + v * sp)
            if kind == 1:
                th = thp
            z1 += 0.5 * h * (f1 + xp * xp / r2p)
            z2 += 0.5 * h * (f2 + yp * yp / r2p)
            z3 += 0.5 * h * (f3 + xp * yp / r2p)
    rho = x * x + y * y
    if rho < minr2:
        _raise_underflow(rho)
    out[n, 0] = x
    out[n, 1] = y
    out[n, 2] = th
    out[n, 3] = z1
    out[n, 4] = z2
    out[n, 5] = z3
    return out_arr


def adjoint_gradient(int kind, int scheme, double[:, ::1] states,
                     double[::1] u, double h, double v):
    cdef int n = u.shape[0]
    grad_arr = np.empty(n)
    cdef double[::1] grad = grad_arr
    cdef double z1f = states[n, 3], z2f = states[n, 4], z3f = states[n, 5]
    cdef double w1 = -z2f, w2 = -z1f, w3 = 2.0 * z3f
    cdef double wx = 0.0, wy = 0.0, wth = 0.0
    cdef double x, y, th, uk, c, s, rho, r3
    cdef double axs, ays, axp, ayp
    cdef double xp, yp, thp, w2th, tx, ty, tth
    cdef int k
    for k in range(n - 1, -1, -1):
        x = states[k, 0]
        y = states[k, 1]
        uk = u[k]
        th = uk if kind == 0 else states[k, 2]
        c = cos(th)
        s = sin(th)
        rho = x * x + y * y
        r3 = rho * rho * rho
        axs = (w1 * (2.0 * x * y * y - 2.0 * x * x * x)
               + w2 * (-4.0 * x * y * y)
               + w3 * (y * y * y - 3.0 * x * x * y)) / r3
        ays = (w1 * (-4.0 * x * x * y)
               + w2 * (2.0 * x * x * y - 2.0 * y * y * y)
               + w3 * (x * x * x - 3.0 * x * y * y)) / r3
        if scheme == 0:
            if kind == 1:
                grad[k] = h * wth
                wth += h * v * (-s * wx + c * wy)
            else:
                grad[k] = h * v * (-s * wx + c * wy)
            wx += h * axs
            wy += h * ays
        else:
            xp = x + h * v * c
            yp = y + h * v * s
            rho = xp * xp + yp * yp
            r3 = rho * rho * rho
            axp = (w1 * (2.0 * xp * yp * yp - 2.0 * xp * xp * xp)
                   + w2 * (-4.0 * xp * yp * yp)
                   + w3 * (yp * yp * yp - 3.0 * xp * xp * yp)) / r3
            ayp = (w1 * (-4.0 * xp * xp * yp)
                   + w2 * (2.0 * xp * xp * yp - 2.0 * yp * yp * yp)
                   + w3 * (xp * xp * xp - 3.0 * xp * yp * yp)) / r3
            if kind == 1:
                thp = th + h * uk
                w2th = v * (-sin(thp) * wx + cos(thp) * wy)
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
    return grad_arr
