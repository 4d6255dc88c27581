"""Bogdanov-Takens analysis: location of double-zero-eigenvalue equilibria
in the (h, delta) plane, reduction to the two-parameter normal form

    eta1' = eta2,   eta2' = beta1 + beta2*eta1 + eta1^2 + s*eta1*eta2 + ...

and local approximations of the fold (T), Hopf (H) and homoclinic (P)
bifurcation curves.

The coefficient chain is evaluated analytically by differentiating the
perturbed, eigenbasis-transformed vector field (exact first and second
partials of the right-hand side); reference closed forms for the simple
lambda-linear coefficients are kept as cross-checks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DegenerateBT,
    DomainError,
    NoCandidate,
    PrintedFormulaMismatch,
    SingularSolve,
)
from .model import ModelParams, State, holling_denominator, jacobian, rhs, validate

BT_RESIDUAL_TOL = 1e-8

#: nondegeneracy thresholds for BT.1 / BT.2 / BT.3
NONDEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class BTPoint:
    x: float
    y: float
    h_bt: float
    delta_bt: float
    case_tag: str  # EtaAeq1 | EtaAlt1 | EtaAgt1-x3 | EtaAgt1-x4

    def params(self, base: ModelParams) -> ModelParams:
        return validate(replace(base, h=self.h_bt, delta=self.delta_bt))


@dataclass
class BTNormalForm:
    point: BTPoint
    params: ModelParams
    v0: np.ndarray
    v1: np.ndarray
    w0: np.ndarray
    w1: np.ndarray
    g20_0: float
    g11_0: float
    g02_0: float
    A0: float
    B0: float
    s: int
    beta_jacobian: np.ndarray  # d(beta1, beta2)/d(lambda1, lambda2) at 0
    nondegeneracy: dict = field(default_factory=dict)  # BT.1/BT.2/BT.3 -> bool
    diagnostics: list = field(default_factory=list)


@dataclass
class CurveSet:
    T: list[tuple[float, float]]
    H: list[tuple[float, float]]
    P: list[tuple[float, float]]
    box: tuple[float, float, float, float]  # l1_min, l1_max, l2_min, l2_max


def bt_candidate_x(a: float, b: float, eta: float) -> list[tuple[float, str]]:
    """Real solutions of x^2 (a*eta - 1) + b*eta*x + eta = 0 with case tags.

    Raises NoCandidate when no real solution exists (a*eta > 1 with negative
    discriminant, or the degenerate linear case with b = 0).
    """
    k = a * eta - 1.0
    if abs(k) < 1e-12 * max(1.0, a * eta):
        if b == 0:
            raise NoCandidate("a*eta = 1 with b = 0: equation has no solution")
        return [(-1.0 / b, "EtaAeq1")]
    disc = b * b * eta * eta - 4.0 * k * eta
    if k < 0:
        # disc > 0 always: two real roots of opposite sign
        rt = math.sqrt(disc)
        x_pos = (-b * eta - rt) / (2.0 * k)
        x_neg = (-b * eta + rt) / (2.0 * k)
        return [(x_pos, "EtaAlt1"), (x_neg, "EtaAlt1")]
    if disc < 0:
        raise NoCandidate(f"a*eta > 1 with b^2*eta - 4*(a*eta - 1) = {disc / eta} < 0")
    rt = math.sqrt(disc)
    x3 = (-b * eta + rt) / (2.0 * k)
    x4 = (-b * eta - rt) / (2.0 * k)
    return [(x3, "EtaAgt1-x3"), (x4, "EtaAgt1-x4")]


def bt_y_of_x(params: ModelParams, x: float, h: float, delta: float) -> float:
    """Ordinate forced by the trace equation at abscissa x."""
    if x <= 0:
        raise DomainError(f"need x > 0, got {x}")
    b, c = params.b, params.c
    if abs(b * x + 2.0) < 1e-14:
        raise DomainError(f"b*x + 2 = 0 at x={x}")
    p = holling_denominator(params, x)
    return p * p / (x * (b * x + 2.0)) * (1.0 - 2.0 * x - h * c / (c + x) ** 2 - delta)


def _linear_coeffs(params: ModelParams, x: float) -> tuple[float, float, float, float]:
    """Coefficients of the two affine relations delta = a1 + a2*h and
    h = b1 + b2*delta obtained by substituting the trace-forced ordinate
    into the equilibrium equations."""
    a, b, c = params.a, params.b, params.c
    eta, m = params.eta, params.m
    p = a * x * x + b * x + 1.0
    den_a = x * (b * x + 2.0) * (m + x) + eta * p * p
    a1 = eta * p * p * (1.0 - 2.0 * x) / den_a
    a2 = -eta * p * p * c / ((c + x) ** 2 * den_a)
    den_b = (b * x + 2.0) * (c + x) - c * p
    b1 = (c + x) ** 2 * ((1.0 - x) * (b * x + 2.0) - p * (1.0 - 2.0 * x)) / den_b
    b2 = (c + x) ** 2 * p / den_b
    return a1, a2, b1, b2


def _printed_h1_delta1(params: ModelParams) -> tuple[float, float]:
    """Published closed forms for the critical pair in the a*eta = 1 case
    (cross-check only; the linear-system solve is authoritative)."""
    b, c, eta, m = params.b, params.c, params.eta, params.m
    delta1 = -(b * c - b - 2.0) / (
        b
        * (
            b**4 * c * eta * m
            - b**3 * c * eta
            - b**3 * eta * m
            - b**2 * c * m
            + b**2 * eta
            + 1.0
        )
    )
    h1 = (
        (b**3 * eta + b**2 * eta + b * delta1 - b - 2.0)
        * (b * c - 1.0) ** 2
        / (b**3 * (b**2 * c * eta - b * eta - c))
    )
    return h1, delta1


def bt_locate(params: ModelParams) -> list[BTPoint]:
    """All Bogdanov-Takens points for the given (a, b, c, eta, m); the h and
    delta fields of ``params`` are treated as free parameters.

    Every returned point passes the trace/determinant/equilibrium residual
    checks at (h_bt, delta_bt).
    """
    points: list[BTPoint] = []
    for x, tag in bt_candidate_x(params.a, params.b, params.eta):
        if x <= 0:
            continue
        a1, a2, b1, b2 = _linear_coeffs(params, x)
        den = 1.0 - b2 * a2
        if abs(den) < 1e-12 * (1.0 + abs(b2 * a2)):
            raise SingularSolve(f"1 - b2*a2 ~ 0 at candidate x={x}")
        h = (b1 + b2 * a1) / den
        delta = a1 + a2 * h
        if h <= 0 or delta <= 0:
            continue
        y = bt_y_of_x(params, x, h, delta)
        cand = replace(params, h=h, delta=delta)
        f = rhs(cand, State(x, y))
        J = jacobian(cand, State(x, y))
        tr, det = float(np.trace(J)), float(np.linalg.det(J))
        if max(abs(f[0]), abs(f[1])) >= BT_RESIDUAL_TOL or abs(tr) >= BT_RESIDUAL_TOL \
                or abs(det) >= BT_RESIDUAL_TOL:
            continue
        if tag == "EtaAeq1":
            h1, d1 = _printed_h1_delta1(params)
            if abs(h1 - h) > 1e-6 * (1.0 + abs(h)) or abs(d1 - delta) > 1e-6 * (1.0 + abs(delta)):
                warnings.warn(
                    f"reference a*eta=1 closed forms (h1={h1}, delta1={d1}) disagree with "
                    f"the equilibrium-equation solve (h={h}, delta={delta})",
                    PrintedFormulaMismatch,
                    stacklevel=2,
                )
        points.append(BTPoint(x, y, h, delta, tag))
    points.sort(key=lambda p: p.x)
    return points


# ---------------------------------------------------------------------------
# normal form


def _field_derivatives(params: ModelParams, x: float, y: float, lam: tuple[float, float]):
    """Values, gradients and Hessians of both components of the perturbed
    field at the frozen expansion point (x, y), with h -> h + lam1 and
    delta -> delta + lam2."""
    a, b, c = params.a, params.b, params.c
    eta, m = params.eta, params.m
    h = params.h + lam[0]
    delta = params.delta + lam[1]
    p = a * x * x + b * x + 1.0
    f_val = x * (1.0 - x) - x * x * y / p - h * x / (c + x)
    f_x = 1.0 - 2.0 * x - x * y * (b * x + 2.0) / p**2 - h * c / (c + x) ** 2
    f_y = -x * x / p
    f_xx = -2.0 + 2.0 * y * (a * b * x**3 + 3.0 * a * x**2 - 1.0) / p**3 \
        + 2.0 * h * c / (c + x) ** 3
    f_xy = -x * (b * x + 2.0) / p**2
    f_yy = 0.0
    g_val = y * (delta - eta * y / (m + x))
    g_x = eta * y * y / (m + x) ** 2
    g_y = delta - 2.0 * eta * y / (m + x)
    g_xx = -2.0 * eta * y * y / (m + x) ** 3
    g_xy = 2.0 * eta * y / (m + x) ** 2
    g_yy = -2.0 * eta / (m + x)
    vals = np.array([f_val, g_val])
    grads = np.array([[f_x, f_y], [g_x, g_y]])
    hess = np.array([[[f_xx, f_xy], [f_xy, f_yy]], [[g_xx, g_xy], [g_xy, g_yy]]])
    return vals, grads, hess


def _ab_coeffs(params_bt: ModelParams, pt: BTPoint, basis, lam: tuple[float, float]) -> dict:
    """Taylor coefficients a_ij(lambda), b_ij(lambda) of the eigenbasis
    projected field, in the convention with 1/2 on the pure-square terms."""
    v0, v1, w0, w1 = basis
    vals, grads, hess = _field_derivatives(params_bt, pt.x, pt.y, lam)
    out = {}
    for name, w in (("a", w0), ("b", w1)):
        pv = w @ vals
        g0 = w @ (grads @ v0)
        g1 = w @ (grads @ v1)
        h00_ = w @ np.array([v0 @ hess[0] @ v0, v0 @ hess[1] @ v0])
        h01_ = w @ np.array([v0 @ hess[0] @ v1, v0 @ hess[1] @ v1])
        h11_ = w @ np.array([v1 @ hess[0] @ v1, v1 @ hess[1] @ v1])
        out[name + "00"] = pv
        out[name + "10"] = g0
        out[name + "01"] = g1 - (1.0 if name == "a" else 0.0)
        out[name + "20"] = h00_
        out[name + "11"] = h01_
        out[name + "02"] = h11_
    return out


def _chain_mu(coeffs: dict) -> tuple[float, float, float, float]:
    """(mu1, mu2, A, B) from the coefficient chain at finite lambda."""
    g00 = coeffs["b00"]
    g10 = coeffs["b10"] + coeffs["a11"] * coeffs["b00"] - coeffs["b11"] * coeffs["a00"]
    g01 = coeffs["b01"] + coeffs["a10"] + coeffs["a02"] * coeffs["b00"] \
        - (coeffs["a11"] + coeffs["b02"]) * coeffs["a00"]
    g20 = coeffs["b20"]
    g11 = coeffs["a20"] + coeffs["b11"]
    g02 = coeffs["b02"] + 2.0 * coeffs["a11"]
    if g11 == 0:
        raise DegenerateBT("g11(lambda) = 0 in the parameter shift", condition="BT.1")
    shift = -g01 / g11
    h00 = g00 + g10 * shift + 0.5 * g20 * shift**2
    h10 = g10 + g20 * shift
    h20, h11, h02 = g20, g11, g02
    mu1 = h00
    mu2 = h10 - 0.5 * h00 * h02
    A = 0.5 * (h20 - h10 * h02)
    B = h11
    return mu1, mu2, A, B


def _basis(delta: float, eta: float):
    """Generalized eigenvectors of the double-zero Jacobian and its
    transpose, normalized so that <v1,w1> = <v0,w0> = 1 and the cross
    products vanish."""
    v0 = np.array([eta, delta])
    v1 = np.array([eta, delta - 1.0])
    w0 = np.array([-(delta - 1.0) / eta, 1.0])
    w1 = np.array([delta / eta, -1.0])
    # re-normalize against roundoff
    w1 = w1 / (v1 @ w1)
    w0 = w0 - (v1 @ w0) * w1
    w0 = w0 / (v0 @ w0)
    return v0, v1, w0, w1


def normal_form(params: ModelParams, bt_point: BTPoint) -> BTNormalForm:
    """Run the reduction chain at a located BT point and verify the three
    nondegeneracy conditions.

    Raises DegenerateBT naming the first failed condition.
    """
    pbt = bt_point.params(params)
    basis = _basis(bt_point.delta_bt, params.eta)
    v0, v1, w0, w1 = basis

    c0 = _ab_coeffs(pbt, bt_point, basis, (0.0, 0.0))
    g20_0 = c0["b20"]
    g11_0 = c0["a20"] + c0["b11"]
    g02_0 = c0["b02"] + 2.0 * c0["a11"]
    A0 = 0.5 * g20_0
    B0 = g11_0

    diagnostics: list[str] = []
    scale0 = max(abs(c0[k]) for k in ("a20", "b11", "b20"))
    bt1 = abs(g11_0) > NONDEGENERACY_TOL * (1.0 + scale0)
    bt2 = abs(g20_0) > NONDEGENERACY_TOL * (1.0 + scale0)
    if not bt1:
        raise DegenerateBT(f"BT.1 failed: g11(0) = {g11_0}", condition="BT.1")
    if not bt2:
        raise DegenerateBT(f"BT.2 failed: 2A(0) = b20(0) = {g20_0}", condition="BT.2")

    # exact lambda-partials of the linear-in-lambda coefficients
    x1, y1 = bt_point.x, bt_point.y
    ch = params.c
    d_lam1 = np.array([-x1 / (ch + x1), 0.0])  # d(field)/d(lambda1) at the point
    d_lam2 = np.array([0.0, y1])
    dDg_l1 = np.array([[-ch / (ch + x1) ** 2, 0.0], [0.0, 0.0]])
    dDg_l2 = np.array([[0.0, 0.0], [0.0, 1.0]])

    def partials(w):
        p00 = np.array([w @ d_lam1, w @ d_lam2])
        p10 = np.array([w @ (dDg_l1 @ v0), w @ (dDg_l2 @ v0)])
        p01 = np.array([w @ (dDg_l1 @ v1), w @ (dDg_l2 @ v1)])
        return p00, p10, p01

    da00, da10, da01 = partials(w0)
    db00, db10, db01 = partials(w1)

    dg00 = db00
    dg10 = db10 + c0["a11"] * db00 - c0["b11"] * da00
    dg01 = db01 + da10 + c0["a02"] * db00 - (c0["a11"] + c0["b02"]) * da00
    dh10 = dg10 - (g20_0 / g11_0) * dg01
    dmu1 = dg00
    dmu2 = dh10 - 0.5 * g02_0 * dg00

    k1 = B0**4 / A0**3
    k2 = B0**2 / A0**2
    beta_jac = np.vstack([k1 * dmu1, k2 * dmu2])
    det_bj = float(np.linalg.det(beta_jac))
    bt3 = abs(det_bj) > NONDEGENERACY_TOL
    if not bt3:
        raise DegenerateBT(f"BT.3 failed: det(dbeta/dlambda) = {det_bj}", condition="BT.3")

    # cross-check reference lambda-linear coefficient forms
    dlt, e = bt_point.delta_bt, params.eta
    printed = {
        "da00": np.array([(dlt - 1.0) * x1 / ((ch + x1) * e), y1]),
        "da10": np.array([(dlt - 1.0) * ch / (ch + x1) ** 2, dlt]),
        "da01": np.array([(dlt - 1.0) * ch / (ch + x1) ** 2, dlt - 1.0]),
        "db00": np.array([-dlt * x1 / (e * (ch + x1)), -y1]),
        "db10": np.array([-ch * dlt / (ch + x1) ** 2, -dlt]),
        "db01": np.array([-ch * dlt / (ch + x1) ** 2, -(dlt - 1.0)]),
    }
    computed = {"da00": da00, "da10": da10, "da01": da01,
                "db00": db00, "db10": db10, "db01": db01}
    for name, pv in printed.items():
        cv = computed[name]
        if np.max(np.abs(pv - cv)) > 1e-4 * (1.0 + np.max(np.abs(cv))):
            diagnostics.append(f"printed {name} = {pv} vs computed {cv}")
            warnings.warn(
                f"reference lambda-partial {name} disagrees with the analytic value",
                PrintedFormulaMismatch,
                stacklevel=2,
            )

    s = 1 if g20_0 * g11_0 > 0 else -1
    return BTNormalForm(
        point=bt_point,
        params=pbt,
        v0=v0, v1=v1, w0=w0, w1=w1,
        g20_0=g20_0, g11_0=g11_0, g02_0=g02_0,
        A0=A0, B0=B0, s=s,
        beta_jacobian=beta_jac,
        nondegeneracy={"BT.1": bt1, "BT.2": bt2, "BT.3": bt3},
        diagnostics=diagnostics,
    )


def beta_map(nf: BTNormalForm, lambda1: float, lambda2: float) -> tuple[float, float]:
    """(beta1, beta2) of the normal form at a small parameter offset.

    The coefficient chain is evaluated at the given offset with the
    first-order (lambda-linear) raw coefficients; the chain's own products
    are kept.
    """
    basis = (nf.v0, nf.v1, nf.w0, nf.w1)
    coeffs = _ab_coeffs(nf.params, nf.point, basis, (lambda1, lambda2))
    mu1, mu2, A, B = _chain_mu(coeffs)
    if abs(A) < 1e-14 * (1.0 + abs(nf.A0)):
        raise DegenerateBT(f"A(lambda) ~ 0 at lambda=({lambda1}, {lambda2})", condition="BT.2")
    return B**4 / A**3 * mu1, B**2 / A**2 * mu2


_CURVE_DEFS = {
    "T": lambda b1, b2: 4.0 * b1 - b2 * b2,
    "H": lambda b1, b2: b1,
    "P": lambda b1, b2: b1 + (6.0 / 25.0) * b2 * b2,
}


def bifurcation_curves(nf: BTNormalForm, lambda_box, n: int = 50) -> CurveSet:
    """Sample the local T/H/P curves over the lambda box by bisection in
    lambda2 at each lambda1 sample.  H and P samples require beta2 < 0;
    unbracketable samples are dropped."""
    l1_min, l1_max, l2_min, l2_max = lambda_box
    samples = {"T": [], "H": [], "P": []}
    for l1 in np.linspace(l1_min, l1_max, n):
        for name, fdef in _CURVE_DEFS.items():
            def val(l2):
                b1, b2 = beta_map(nf, l1, l2)
                return fdef(b1, b2)
            lo, hi = l2_min, l2_max
            flo, fhi = val(lo), val(hi)
            if flo * fhi > 0:
                # scan for a bracket on a coarse grid
                grid = np.linspace(l2_min, l2_max, 64)
                vs = [val(g) for g in grid]
                k = next((i for i in range(63) if vs[i] * vs[i + 1] <= 0), None)
                if k is None:
                    continue
                lo, hi, flo = grid[k], grid[k + 1], vs[k]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = val(mid)
                if flo * fm <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            l2 = 0.5 * (lo + hi)
            _, b2 = beta_map(nf, l1, l2)
            if name in ("H", "P") and b2 >= 0:
                continue
            samples[name].append((float(l1), float(l2)))
    return CurveSet(samples["T"], samples["H"], samples["P"], tuple(lambda_box))
