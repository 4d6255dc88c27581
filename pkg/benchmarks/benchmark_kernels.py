"""Compare the compiled and pure-Python integration kernels.

Runs the same long trajectory through both backends, checks the results
agree, and reports wall-clock timings.

Usage: python3 benchmarks/benchmark_kernels.py
"""

import time

import numpy as np

from predbif import _rk_py
from predbif.model import ModelParams

try:
    from predbif import _rk_cy
except ImportError:
    _rk_cy = None

PARAMS = ModelParams(a=2.0, b=-2.82, c=0.05, h=0.1915598183,
                     delta=0.01785700222, eta=0.1, m=0.8)
X0, Y0 = 0.5, 0.3
T_END = 20000.0
TOL = 1e-10
REPEATS = 3


def run(kernel):
    p = PARAMS
    best = float("inf")
    out = None
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        out = kernel.integrate_kernel(p.a, p.b, p.c, p.h, p.delta, p.eta, p.m,
                                      X0, Y0, 0.0, T_END, TOL, TOL, 10_000_000)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    t_py, out_py = run(_rk_py)
    print(f"pure python : {t_py:8.3f} s   ({len(out_py[0])} steps, status {out_py[5]})")
    if _rk_cy is None:
        print("compiled    : not built (install with a C compiler to enable)")
        return
    t_cy, out_cy = run(_rk_cy)
    print(f"compiled    : {t_cy:8.3f} s   ({len(out_cy[0])} steps, status {out_cy[5]})")
    print(f"speedup     : {t_py / t_cy:8.1f} x")
    dx = np.max(np.abs(np.asarray(out_py[1]) - np.asarray(out_cy[1])))
    dy = np.max(np.abs(np.asarray(out_py[2]) - np.asarray(out_cy[2])))
    print(f"max |x_py - x_cy| = {dx:.3e}, max |y_py - y_cy| = {dy:.3e}")
    assert len(out_py[0]) == len(out_cy[0]), "backends took different step sequences"
    assert dx < 1e-12 and dy < 1e-12, "backends disagree beyond roundoff"


if __name__ == "__main__":
    main()
