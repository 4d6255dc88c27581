# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled adaptive Dormand-Prince 5(4) kernel for the scaled system.

Twin of ``_rk_py.integrate_kernel``; same tableau, same controller, same
status codes (0 = reached t_end, 1 = minimum step reached, 2 = escaped).
"""

from libc.math cimport sqrt, fabs, pow, copysign

cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0, _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0, _A42 = -56.0 / 15.0, _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0, _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0, _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0, _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0, _A64 = 49.0 / 176.0, _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0, _B3 = 500.0 / 1113.0, _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0, _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0, _E3 = -71.0 / 16695.0, _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0, _E6 = 22.0 / 525.0, _E7 = -1.0 / 40.0

cdef double ESCAPE_RADIUS = 1.0e3


cdef inline void _crhs(double a, double b, double c, double h, double delta,
                       double eta, double m, double x, double y,
                       bint x_axis, bint y_axis, double* dx, double* dy) noexcept:
    cdef double p
    if x_axis:
        dx[0] = 0.0
    else:
        p = a * x * x + b * x + 1.0
        dx[0] = x * (1.0 - x) - x * x * y / p - h * x / (c + x)
    if y_axis:
        dy[0] = 0.0
    else:
        dy[0] = y * (delta - eta * y / (m + x))


def integrate_kernel(double a, double b, double c, double h_par, double delta,
                     double eta, double m, double x0, double y0,
                     double t0, double t_end, double rtol, double atol,
                     long max_steps):
    cdef double direction = 1.0 if t_end >= t0 else -1.0
    cdef double span = fabs(t_end - t0)
    cdef bint x_axis = x0 == 0.0
    cdef bint y_axis = y0 == 0.0

    cdef double t = t0
    cdef double x = x0, y = y0
    cdef double fx, fy
    _crhs(a, b, c, h_par, delta, eta, m, x, y, x_axis, y_axis, &fx, &fy)

    ts = [t]
    xs = [x]
    ys = [y]
    dxs = [fx]
    dys = [fy]

    cdef double hstep = direction * min(1e-3, span if span > 0 else 1e-3)
    cdef double hmin = 1e-14 * max(1.0, span)
    cdef double err_prev = 1.0
    cdef int status = 0
    cdef long steps = 0

    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y
    cdef double x2, y2, x3, y3, x4, y4, x5, y5, x6, y6, xn, yn
    cdef double ex, ey, scx, scy, err, fac

    while (t - t_end) * direction < 0.0 and steps < max_steps:
        steps += 1
        if fabs(hstep) > fabs(t_end - t):
            hstep = t_end - t

        k1x = fx
        k1y = fy
        x2 = x + hstep * _A21 * k1x
        y2 = y + hstep * _A21 * k1y
        _crhs(a, b, c, h_par, delta, eta, m, x2, y2, x_axis, y_axis, &k2x, &k2y)
        x3 = x + hstep * (_A31 * k1x + _A32 * k2x)
        y3 = y + hstep * (_A31 * k1y + _A32 * k2y)
        _crhs(a, b, c, h_par, delta, eta, m, x3, y3, x_axis, y_axis, &k3x, &k3y)
        x4 = x + hstep * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        y4 = y + hstep * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        _crhs(a, b, c, h_par, delta, eta, m, x4, y4, x_axis, y_axis, &k4x, &k4y)
        x5 = x + hstep * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        y5 = y + hstep * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        _crhs(a, b, c, h_par, delta, eta, m, x5, y5, x_axis, y_axis, &k5x, &k5y)
        x6 = x + hstep * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
        y6 = y + hstep * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        _crhs(a, b, c, h_par, delta, eta, m, x6, y6, x_axis, y_axis, &k6x, &k6y)
        xn = x + hstep * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        yn = y + hstep * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        _crhs(a, b, c, h_par, delta, eta, m, xn, yn, x_axis, y_axis, &k7x, &k7y)

        ex = hstep * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ey = hstep * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        scx = atol + rtol * max(fabs(x), fabs(xn))
        scy = atol + rtol * max(fabs(y), fabs(yn))
        err = sqrt(0.5 * ((ex / scx) * (ex / scx) + (ey / scy) * (ey / scy)))

        if err <= 1.0 or fabs(hstep) <= hmin:
            t = t + hstep
            x = xn
            y = yn
            if x_axis:
                x = 0.0
            if y_axis:
                y = 0.0
            fx = k7x
            fy = k7y
            ts.append(t)
            xs.append(x)
            ys.append(y)
            dxs.append(fx)
            dys.append(fy)
            if x * x + y * y > ESCAPE_RADIUS * ESCAPE_RADIUS:
                status = 2
                break
            err_prev = max(err, 1e-10)

        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * pow(err, -0.14) * pow(err_prev, 0.08)
            fac = min(5.0, max(0.2, fac))
        hstep = hstep * fac
        if fabs(hstep) < hmin:
            if err > 1.0:
                status = 1
                break
            hstep = copysign(hmin, direction)

    if status == 0 and (t - t_end) * direction < 0.0:
        status = 1
    return ts, xs, ys, dxs, dys, status
