"""Adaptive simulation of the scaled system: trajectories, boundedness
envelopes, phase portraits, and Poincare-section limit-cycle probing.

The stepper lives in a compiled kernel with a pure-Python twin
(``predbif._backend``); everything here is backend-agnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import BACKEND, integrate_kernel
from .errors import DomainError, StepFailure
from .model import ModelParams, State, jacobian, rhs, validate
from .equilibria import Equilibrium

#: default local error tolerance (absolute and relative)
DEFAULT_TOL = 1e-9

#: final ||rhs|| below this marks the trajectory as converged to a fixed point
CONVERGED_TOL = 1e-10


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray  # (N,)
    states: np.ndarray  # (N, 2)
    derivs: np.ndarray  # (N, 2)
    terminated: str  # TimeLimit | Converged(...) | Escaped | StepFailure

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> State:
        return State(float(self.states[-1, 0]), float(self.states[-1, 1]))


@dataclass(frozen=True)
class BoundReport:
    x_violation: float
    y_violation: float
    x_bound_kind: str
    y_bound: float
    ok: bool


@dataclass(frozen=True)
class CycleProbe:
    found: bool
    period: float | None
    stability: str | None  # Attracting | Repelling | Inconclusive
    section: tuple[float, float]  # half-line anchor (center of the section)
    floquet_ratio: float | None
    radii: tuple[float, ...] = field(default=())


def _raw_integrate(params: ModelParams, x0: State, t0: float, t_end: float,
                   tol: float, max_steps: int) -> Trajectory:
    ts, xs, ys, dxs, dys, status = integrate_kernel(
        params.a, params.b, params.c, params.h, params.delta, params.eta,
        params.m, x0.x, x0.y, t0, t_end, tol, tol, max_steps,
    )
    times = np.asarray(ts)
    states = np.column_stack([np.asarray(xs), np.asarray(ys)])
    derivs = np.column_stack([np.asarray(dxs), np.asarray(dys)])
    if status == 2:
        terminated = "Escaped"
    elif status == 1:
        terminated = "StepFailure"
    else:
        fx, fy = derivs[-1]
        if max(abs(fx), abs(fy)) < CONVERGED_TOL:
            terminated = f"Converged({states[-1, 0]:.9g},{states[-1, 1]:.9g})"
        else:
            terminated = "TimeLimit"
    return Trajectory(times, states, derivs, terminated)


def integrate(params: ModelParams, x0: State, t_end: float,
              tol: float = DEFAULT_TOL, t0: float = 0.0,
              max_steps: int = 10_000_000,
              on_failure: str = "raise") -> Trajectory:
    """Adaptive Dormand-Prince 5(4) trajectory from x0 over [t0, t_end].

    Coordinates that start exactly at 0 are held at 0 (axis invariance).
    t_end < t0 integrates backward in time.
    """
    validate(params)
    if not (1e-12 <= tol <= 1e-3):
        raise DomainError(f"tol must lie in [1e-12, 1e-3], got {tol}")
    if not (math.isfinite(x0.x) and math.isfinite(x0.y)):
        raise DomainError(f"initial state must be finite, got {x0}")
    traj = _raw_integrate(params, x0, t0, t_end, tol, max_steps)
    if traj.terminated == "StepFailure" and on_failure == "raise":
        raise StepFailure(
            f"minimum step reached at t={traj.times[-1]:.6g}, state={traj.final}"
        )
    return traj


def bound_check(traj: Trajectory, params: ModelParams, x0: State) -> BoundReport:
    """Check the prey envelope x(t) <= 1/(1 - C e^{-t}), C = 1 - 1/x(0)
    (which collapses to x <= max(x(0), 1)) and the predator envelope
    y(t) <= max(y(0), delta*(m+M)/eta) with M = max(x(0), 1)."""
    t = traj.times - traj.times[0]
    x = traj.states[:, 0]
    y = traj.states[:, 1]
    if x0.x > 0:
        C = 1.0 - 1.0 / x0.x
        denom = 1.0 - C * np.exp(-t)
        xb = np.where(denom > 0, 1.0 / np.where(denom > 0, denom, 1.0), np.inf)
        x_violation = float(np.max(x - xb))
        kind = "envelope"
    else:
        x_violation = float(np.max(x))  # x must stay at 0 on the axis
        kind = "axis"
    M = max(x0.x, 1.0)
    yb = max(x0.y, params.delta * (params.m + M) / params.eta)
    y_violation = float(np.max(y - yb))
    ok = x_violation <= 1e-6 and y_violation <= 1e-6
    return BoundReport(x_violation, y_violation, kind, yb, ok)


def phase_portrait(params: ModelParams, grid: list[State], t_end: float,
                   tol: float = DEFAULT_TOL) -> list[Trajectory]:
    """One trajectory per seed, in seed order; per-seed StepFailure is kept
    in the trajectory's terminated field rather than raised."""
    if not grid:
        raise DomainError("phase_portrait needs a nonempty seed grid")
    return [integrate(params, s, t_end, tol, on_failure="keep") for s in grid]


def _hermite(s, v0, v1, d0, d1, dt):
    """Cubic Hermite value at fraction s of a step of length dt."""
    h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
    h10 = s * (1.0 - s) ** 2
    h01 = s * s * (3.0 - 2.0 * s)
    h11 = s * s * (s - 1.0)
    return h00 * v0 + h10 * dt * d0 + h01 * v1 + h11 * dt * d1


def _section_crossings(traj: Trajectory, xc: float, yc: float):
    """Times and radii of crossings of the half-line {y = yc, x > xc},
    refined by cubic Hermite interpolation inside the step."""
    t = traj.times
    x = traj.states[:, 0]
    y = traj.states[:, 1]
    dx = traj.derivs[:, 0]
    dy = traj.derivs[:, 1]
    g = y - yc
    out = []
    for i in np.nonzero(g[:-1] * g[1:] < 0)[0]:
        dt = t[i + 1] - t[i]
        lo, hi = 0.0, 1.0
        glo = g[i]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            gm = _hermite(mid, y[i], y[i + 1], dy[i], dy[i + 1], dt) - yc
            if glo * gm <= 0:
                hi = mid
            else:
                lo, glo = mid, gm
        s = 0.5 * (lo + hi)
        xs = _hermite(s, x[i], x[i + 1], dx[i], dx[i + 1], dt)
        if xs > xc:
            out.append((t[i] + s * dt, xs - xc))
    return out


def _converged_radius(radii, rel_tol=1e-7):
    """Index of first radius where two consecutive returns agree, or None."""
    for k in range(1, len(radii)):
        if abs(radii[k] - radii[k - 1]) < rel_tol * (1.0 + radii[k]):
            return k
    return None


def detect_limit_cycle(params: ModelParams, center: Equilibrium,
                       probe_radius: float = 1e-3, t_max: float = 5000.0,
                       tol: float = DEFAULT_TOL) -> CycleProbe:
    """Probe for a closed orbit around a spiral-type interior equilibrium.

    Seeds on the horizontal half-line through the equilibrium; forward
    returns converging to a positive radius mean an attracting cycle,
    backward returns a repelling one.
    """
    if center.kind != "Interior":
        raise DomainError("cycle probe needs an interior equilibrium as center")
    J = jacobian(params, State(center.x, center.y))
    eig = np.linalg.eigvals(J)
    if abs(eig[0].imag) < 1e-12:
        raise DomainError("cycle probe needs a spiral-type equilibrium (complex eigenvalues)")
    xc, yc = center.x, center.y
    seed = State(xc + probe_radius, yc)
    section = (xc, yc)

    for direction, label in ((1.0, "Attracting"), (-1.0, "Repelling")):
        traj = integrate(params, seed, direction * t_max, tol, on_failure="keep")
        # one crossing of the half-line per revolution
        same = _section_crossings(traj, xc, yc)
        radii = [r for _, r in same]
        k = _converged_radius(radii)
        if k is not None and radii[k] > 1e-6:
            period = abs(same[k][0] - same[k - 1][0])
            diffs = [abs(radii[j] - radii[j - 1]) for j in range(1, k + 1)]
            ratio = None
            if len(diffs) >= 2 and diffs[-2] > 0:
                ratio = diffs[-1] / diffs[-2]
            return CycleProbe(True, period, label, section, ratio, tuple(radii[: k + 1]))
        if k is not None:
            # spiraled into the equilibrium in this time direction: no cycle
            # between the seed and the focus on this side
            continue
    return CycleProbe(False, None, "Inconclusive", section, None, ())
