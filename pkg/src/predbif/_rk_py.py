"""Pure-Python adaptive Dormand-Prince 5(4) kernel for the scaled system.

This is the fallback twin of the compiled kernel in ``_rk_cy``; both expose
the same ``integrate_kernel`` signature and must produce identical
trajectories up to floating-point reassociation.

Status codes: 0 = reached t_end, 1 = minimum step reached, 2 = escaped.
"""

from __future__ import annotations

import math

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# 4th-order error weights (b5 - b4 differences)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

ESCAPE_RADIUS = 1.0e3


def _rhs(a, b, c, h, delta, eta, m, x, y, x_axis, y_axis):
    if x_axis:
        dx = 0.0
    else:
        p = a * x * x + b * x + 1.0
        dx = x * (1.0 - x) - x * x * y / p - h * x / (c + x)
    if y_axis:
        dy = 0.0
    else:
        dy = y * (delta - eta * y / (m + x))
    return dx, dy


def integrate_kernel(a, b, c, h_par, delta, eta, m,
                     x0, y0, t0, t_end, rtol, atol, max_steps):
    """Adaptive Dormand-Prince 5(4) with PI step control.

    A coordinate that starts exactly at 0 is held at 0 (the axes are
    invariant sets).  Integration direction follows sign(t_end - t0).

    Returns (ts, xs, ys, dxs, dys, status) as plain lists.
    """
    direction = 1.0 if t_end >= t0 else -1.0
    span = abs(t_end - t0)
    x_axis = x0 == 0.0
    y_axis = y0 == 0.0

    t = t0
    x, y = x0, y0
    fx, fy = _rhs(a, b, c, h_par, delta, eta, m, x, y, x_axis, y_axis)
    ts = [t]
    xs = [x]
    ys = [y]
    dxs = [fx]
    dys = [fy]

    hstep = direction * min(1e-3, span if span > 0 else 1e-3)
    hmin = 1e-14 * max(1.0, span)
    err_prev = 1.0
    status = 0
    steps = 0

    while (t - t_end) * direction < 0.0 and steps < max_steps:
        steps += 1
        if abs(hstep) > abs(t_end - t):
            hstep = t_end - t

        k1x, k1y = fx, fy
        x2 = x + hstep * _A21 * k1x
        y2 = y + hstep * _A21 * k1y
        k2x, k2y = _rhs(a, b, c, h_par, delta, eta, m, x2, y2, x_axis, y_axis)
        x3 = x + hstep * (_A31 * k1x + _A32 * k2x)
        y3 = y + hstep * (_A31 * k1y + _A32 * k2y)
        k3x, k3y = _rhs(a, b, c, h_par, delta, eta, m, x3, y3, x_axis, y_axis)
        x4 = x + hstep * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        y4 = y + hstep * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        k4x, k4y = _rhs(a, b, c, h_par, delta, eta, m, x4, y4, x_axis, y_axis)
        x5 = x + hstep * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        y5 = y + hstep * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        k5x, k5y = _rhs(a, b, c, h_par, delta, eta, m, x5, y5, x_axis, y_axis)
        x6 = x + hstep * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
        y6 = y + hstep * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        k6x, k6y = _rhs(a, b, c, h_par, delta, eta, m, x6, y6, x_axis, y_axis)
        xn = x + hstep * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        yn = y + hstep * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        k7x, k7y = _rhs(a, b, c, h_par, delta, eta, m, xn, yn, x_axis, y_axis)

        ex = hstep * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ey = hstep * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        scx = atol + rtol * max(abs(x), abs(xn))
        scy = atol + rtol * max(abs(y), abs(yn))
        err = math.sqrt(0.5 * ((ex / scx) ** 2 + (ey / scy) ** 2))

        if err <= 1.0 or abs(hstep) <= hmin:
            t = t + hstep
            x, y = xn, yn
            if x_axis:
                x = 0.0
            if y_axis:
                y = 0.0
            fx, fy = k7x, k7y
            ts.append(t)
            xs.append(x)
            ys.append(y)
            dxs.append(fx)
            dys.append(fy)
            if x * x + y * y > ESCAPE_RADIUS * ESCAPE_RADIUS:
                status = 2
                break
            err_prev = max(err, 1e-10)

        # PI controller
        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** -0.14 * err_prev ** 0.08
            fac = min(5.0, max(0.2, fac))
        hstep = hstep * fac
        if abs(hstep) < hmin:
            if err > 1.0:
                status = 1
                break
            hstep = math.copysign(hmin, direction)

    if status == 0 and (t - t_end) * direction < 0.0:
        status = 1  # ran out of steps
    return ts, xs, ys, dxs, dys, status
