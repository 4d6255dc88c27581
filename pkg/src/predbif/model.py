"""Scaled predator-prey system with Holling-III predation, Michaelis-Menten
prey harvesting and a modified Leslie-Gower predator term.

The scaled system in state (x, y) is

    x' = x(1 - x) - x^2 y / (a x^2 + b x + 1) - h x / (c + x)
    y' = y (delta - eta y / (m + x))

All operations here are pure functions of their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, NotAnEquilibrium, ParameterOutOfRange

EQUILIBRIUM_TOL = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """The seven scaled parameters. ``b`` may be negative but must keep the
    Holling denominator positive for all x >= 0, i.e. b > -2*sqrt(a)."""

    a: float
    b: float
    c: float
    h: float
    delta: float
    eta: float
    m: float

    def with_(self, **kw) -> "ModelParams":
        return validate(replace(self, **kw))


@dataclass(frozen=True)
class OriginalParams:
    """Parameters of the unscaled model, kept in their original units.

    ``n1`` (the Holling-II half saturation of the antecedent model) is stored
    for completeness but plays no role in the rescaling.
    """

    r: float
    k: float
    q: float
    E: float
    m1: float
    m2: float
    s: float
    a1: float
    b1: float
    a2: float
    n: float
    mbar: float
    n1: float = 1.0


@dataclass(frozen=True)
class State:
    x: float
    y: float


@dataclass(frozen=True)
class JetCoefficients:
    """Taylor coefficients of the shifted system u' = sum alpha_ij u^i v^j,
    v' = sum beta_ij u^i v^j around an interior equilibrium."""

    alpha10: float
    alpha01: float
    beta10: float
    beta01: float
    alpha20: float
    alpha11: float
    alpha30: float
    alpha21: float
    beta20: float
    beta11: float
    beta02: float
    beta30: float
    beta21: float
    beta12: float


def validate(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged iff every admissibility constraint holds.

    Raises ParameterOutOfRange naming the violated constraint.
    """
    p = params
    for name in ("a", "c", "h", "delta", "eta"):
        v = getattr(p, name)
        if not (math.isfinite(v) and v > 0):
            raise ParameterOutOfRange(f"{name} must be strictly positive, got {v}")
    if not (math.isfinite(p.b)):
        raise ParameterOutOfRange(f"b must be finite, got {p.b}")
    if not (math.isfinite(p.m) and p.m >= 0):
        raise ParameterOutOfRange(f"m must be nonnegative, got {p.m}")
    if p.b <= -2.0 * math.sqrt(p.a):
        raise ParameterOutOfRange(
            f"b <= -2*sqrt(a): b={p.b}, -2*sqrt(a)={-2.0 * math.sqrt(p.a)}"
        )
    return p


def rescale_parameters(orig: OriginalParams) -> ModelParams:
    """Map the original parameters onto the seven scaled ones."""
    o = orig
    for name in ("r", "k", "q", "E", "m1", "m2", "s", "a1", "a2", "n", "mbar"):
        v = getattr(o, name)
        if not (math.isfinite(v) and v > 0):
            raise ParameterOutOfRange(f"original parameter {name} must be positive, got {v}")
    return validate(
        ModelParams(
            a=o.a1 * o.k**2,
            b=o.b1 * o.k,
            c=o.m1 * o.E / (o.m2 * o.k),
            h=o.q * o.E / (o.r * o.m2 * o.k),
            delta=o.s / o.r,
            eta=o.s * o.a2 / (o.mbar * o.k**2),
            m=o.n / o.k,
        )
    )


def holling_denominator(params: ModelParams, x: float) -> float:
    return params.a * x * x + params.b * x + 1.0


def _check_domain(params: ModelParams, x: float, y: float) -> None:
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    if params.m == 0.0 and x == 0.0:
        raise DomainError("m = 0 with x = 0: predator equation is singular")
    if holling_denominator(params, x) <= 0:
        raise DomainError(f"a*x^2 + b*x + 1 <= 0 at x={x}")


def rhs(params: ModelParams, state: State) -> tuple[float, float]:
    """Right-hand side (dx/dt, dy/dt) of the scaled system."""
    x, y = state.x, state.y
    _check_domain(params, x, y)
    p = holling_denominator(params, x)
    dx = x * (1.0 - x) - x * x * y / p - params.h * x / (params.c + x)
    dy = y * (params.delta - params.eta * y / (params.m + x))
    return dx, dy


def jacobian(params: ModelParams, state: State) -> np.ndarray:
    """Exact Jacobian of ``rhs`` at an arbitrary admissible state.

    On the predator isocline y = delta*(m+x)/eta the lower row reduces to
    (delta^2/eta, -delta); off the isocline the true partial derivatives are
    returned.
    """
    x, y = state.x, state.y
    _check_domain(params, x, y)
    a, b, c, h = params.a, params.b, params.c, params.h
    delta, eta, m = params.delta, params.eta, params.m
    p = holling_denominator(params, x)
    fx = 1.0 - 2.0 * x - x * y * (b * x + 2.0) / p**2 - h * c / (c + x) ** 2
    fy = -x * x / p
    gx = eta * y * y / (m + x) ** 2
    gy = delta - 2.0 * eta * y / (m + x)
    return np.array([[fx, fy], [gx, gy]])


def taylor_jet(params: ModelParams, equilibrium: State) -> JetCoefficients:
    """Closed-form Taylor coefficients of the shifted field at an interior
    equilibrium, up to the cubic terms used by the bifurcation analyses.

    The quadratic/cubic predator-row coefficients use the equilibrium
    relation y = delta*(m+x)/eta, so the point must actually be an
    equilibrium (max |rhs| < 1e-8).
    """
    f = rhs(params, equilibrium)
    if max(abs(f[0]), abs(f[1])) >= EQUILIBRIUM_TOL:
        raise NotAnEquilibrium(
            f"rhs residual {max(abs(f[0]), abs(f[1])):.3e} at ({equilibrium.x}, {equilibrium.y})"
        )
    x, y = equilibrium.x, equilibrium.y
    a, b, c, h = params.a, params.b, params.c, params.h
    delta, eta, m = params.delta, params.eta, params.m
    p = holling_denominator(params, x)
    J = jacobian(params, equilibrium)
    return JetCoefficients(
        alpha10=J[0, 0],
        alpha01=J[0, 1],
        beta10=J[1, 0],
        beta01=J[1, 1],
        alpha20=-1.0
        + y * (a * b * x**3 + 3.0 * a * x**2 - 1.0) / p**3
        + h * c / (c + x) ** 3,
        alpha11=-x * (b * x + 2.0) / p**2,
        alpha30=-h * c / (c + x) ** 4
        - y * (a * x**2 - 1.0) * (a * b * x**2 + 4.0 * a * x + b) / p**4,
        alpha21=(a * b * x**3 + 3.0 * a * x**2 - 1.0) / p**3,
        beta20=-(delta**2) / (eta * (m + x)),
        beta11=2.0 * delta / (m + x),
        beta02=-eta / (m + x),
        beta30=delta**2 / (eta * (m + x) ** 2),
        beta21=-2.0 * delta / (m + x) ** 2,
        beta12=eta / (m + x) ** 2,
    )
