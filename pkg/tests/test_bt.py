import math
import warnings

import numpy as np
import pytest

from predbif.bt import (
    beta_map,
    bifurcation_curves,
    bt_candidate_x,
    bt_locate,
    bt_y_of_x,
    normal_form,
)
from predbif.errors import DomainError, NoCandidate
from predbif.model import ModelParams, State, jacobian, rhs

BASE = ModelParams(a=2.0, b=-2.82, c=0.05, h=0.17, delta=0.03, eta=0.1, m=0.8)

# reference values for the worked example
GOLD_H = 0.1715598183
GOLD_DELTA = 0.03070149222
GOLD_X = 0.2187994431
GOLD_Y = 0.3127866314


@pytest.fixture(scope="module")
def bt_point():
    return bt_locate(BASE)[0]


@pytest.fixture(scope="module")
def nf(bt_point):
    return normal_form(BASE, bt_point)


class TestCandidates:
    def test_worked_example_positive_root(self):
        roots = bt_candidate_x(2.0, -2.82, 0.1)
        pos = [x for x, _ in roots if x > 0]
        assert len(pos) == 1
        # the candidate abscissa is exactly the equilibrium abscissa
        assert pos[0] == pytest.approx(GOLD_X, abs=1e-8)

    def test_unit_product_case(self):
        roots = bt_candidate_x(10.0, -2.0, 0.1)
        assert len(roots) == 1
        x, tag = roots[0]
        assert x == pytest.approx(0.5)
        assert tag == "EtaAeq1"

    def test_unit_product_with_b_zero_raises(self):
        with pytest.raises(NoCandidate):
            bt_candidate_x(10.0, 0.0, 0.1)

    def test_large_product_negative_discriminant(self):
        # a*eta > 1 with b^2*eta < 4*(a*eta - 1)
        with pytest.raises(NoCandidate):
            bt_candidate_x(30.0, -1.0, 0.1)

    def test_case_taxonomy_on_random_draws(self):
        rng = np.random.default_rng(23)
        for _ in range(1000):
            a = rng.uniform(0.2, 30.0)
            eta = rng.uniform(0.05, 1.0)
            b = rng.uniform(-1.9 * math.sqrt(a), 3.0)
            k = a * eta - 1.0
            try:
                roots = bt_candidate_x(a, b, eta)
            except NoCandidate:
                assert k > 0 and (b * b * eta - 4.0 * k < 0 or b == 0)
                continue
            xs = [x for x, _ in roots]
            if abs(k) < 1e-12 * max(1.0, a * eta):
                assert len(xs) == 1
            elif k < 0:
                assert len(xs) == 2 and xs[0] * xs[1] < 0
            else:
                assert len(xs) == 2 and xs[0] * xs[1] > 0
            for x in xs:
                assert abs(x * x * k + b * eta * x + eta) < 1e-8 * (1.0 + x * x * abs(k))


class TestYOfX:
    def test_worked_example(self):
        y = bt_y_of_x(BASE, GOLD_X, GOLD_H, GOLD_DELTA)
        assert y == pytest.approx(GOLD_Y, abs=1e-6)

    def test_consistency_with_predator_isocline(self, bt_point):
        y = bt_y_of_x(BASE, bt_point.x, bt_point.h_bt, bt_point.delta_bt)
        assert y == pytest.approx(
            bt_point.delta_bt * (BASE.m + bt_point.x) / BASE.eta, rel=1e-9
        )

    def test_pole_rejected(self):
        p = BASE.with_(b=-2.0)
        with pytest.raises(DomainError):
            bt_y_of_x(p, 1.0, 0.1, 0.1)  # b*x + 2 = 0


class TestLocate:
    def test_golden_point(self, bt_point):
        assert bt_point.h_bt == pytest.approx(GOLD_H, abs=1e-6)
        assert bt_point.delta_bt == pytest.approx(GOLD_DELTA, abs=1e-6)
        assert bt_point.x == pytest.approx(GOLD_X, abs=1e-6)
        assert bt_point.y == pytest.approx(GOLD_Y, abs=1e-6)
        assert bt_point.case_tag == "EtaAlt1"

    def test_double_zero_residuals(self, bt_point):
        p = bt_point.params(BASE)
        f = rhs(p, State(bt_point.x, bt_point.y))
        J = jacobian(p, State(bt_point.x, bt_point.y))
        assert max(abs(f[0]), abs(f[1])) < 1e-8
        assert abs(np.trace(J)) < 1e-8
        assert abs(np.linalg.det(J)) < 1e-8

    def test_unit_product_case_verified_by_residuals(self):
        p = ModelParams(a=10.0, b=-2.0, c=0.3, h=0.1, delta=0.1, eta=0.1, m=1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            pts = bt_locate(p)
        for pt in pts:
            q = pt.params(p)
            f = rhs(q, State(pt.x, pt.y))
            J = jacobian(q, State(pt.x, pt.y))
            assert max(abs(f[0]), abs(f[1])) < 1e-8
            assert abs(np.trace(J)) < 1e-8
            assert abs(np.linalg.det(J)) < 1e-8

    def test_large_product_nonnegative_b_empty(self):
        # a*eta > 1 with b >= 0 (and real candidates): both roots negative
        p = ModelParams(a=30.0, b=10.0, c=0.3, h=0.1, delta=0.1, eta=0.1, m=1.0)
        assert bt_locate(p) == []


class TestNormalForm:
    def test_golden_g11(self, nf):
        assert nf.g11_0 == pytest.approx(-0.5922764628, rel=1e-4)

    def test_golden_2a0_and_s(self, nf):
        assert 2.0 * nf.A0 == pytest.approx(-0.01942828012, rel=1e-4)
        assert nf.s == 1
        # s is the sign of b20(0) * g11(0); the reference product is positive
        assert nf.g20_0 * nf.g11_0 == pytest.approx(0.01150691302, rel=1e-3)

    def test_golden_beta_jacobian_det(self, nf):
        det = float(np.linalg.det(nf.beta_jacobian))
        assert det == pytest.approx(3.559954288e6, rel=0.02)

    def test_eigenvector_duality(self, nf):
        assert nf.v0 @ nf.w0 == pytest.approx(1.0, abs=1e-12)
        assert nf.v1 @ nf.w1 == pytest.approx(1.0, abs=1e-12)
        assert nf.v0 @ nf.w1 == pytest.approx(0.0, abs=1e-12)
        assert nf.v1 @ nf.w0 == pytest.approx(0.0, abs=1e-12)

    def test_jordan_structure(self, nf):
        p = nf.params
        J = jacobian(p, State(nf.point.x, nf.point.y))
        assert np.allclose(J @ nf.v0, np.zeros(2), atol=1e-8)
        assert np.allclose(J @ nf.v1, nf.v0, atol=1e-8)

    def test_nondegeneracy_flags(self, nf):
        assert nf.nondegeneracy == {"BT.1": True, "BT.2": True, "BT.3": True}


class TestBetaMap:
    def test_origin_maps_to_origin(self, nf):
        b1, b2 = beta_map(nf, 0.0, 0.0)
        assert abs(b1) < 1e-10
        assert abs(b2) < 1e-10

    def test_linearization_matches_jacobian(self, nf):
        e = 1e-8
        num = np.column_stack([
            (np.array(beta_map(nf, e, 0.0)) - np.array(beta_map(nf, -e, 0.0))) / (2 * e),
            (np.array(beta_map(nf, 0.0, e)) - np.array(beta_map(nf, 0.0, -e))) / (2 * e),
        ])
        assert np.allclose(num, nf.beta_jacobian, rtol=1e-4, atol=1e-3)


class TestCurves:
    def test_pass_through_origin_and_residuals(self, nf):
        box = (0.0, 5e-5, -5e-5, 5e-5)
        cs = bifurcation_curves(nf, box, n=11)
        for name in ("T", "H", "P"):
            pts = getattr(cs, name)
            assert pts, name
            l1_0, l2_0 = pts[0]
            assert l1_0 == 0.0
            assert abs(l2_0) < 1e-9
        for l1, l2 in cs.T:
            b1, b2 = beta_map(nf, l1, l2)
            assert abs(4.0 * b1 - b2 * b2) < 1e-9
        for l1, l2 in cs.H:
            b1, b2 = beta_map(nf, l1, l2)
            assert abs(b1) < 1e-9
            assert b2 < 0 or l1 == 0.0
        for l1, l2 in cs.P:
            b1, b2 = beta_map(nf, l1, l2)
            assert abs(b1 + (6.0 / 25.0) * b2 * b2) < 1e-9
            assert b2 < 0 or l1 == 0.0

    def test_ordering_near_bt_point(self, nf):
        # s = +1 here, so for small lambda1 > 0 the fold sits above the Hopf
        # curve, which sits above the homoclinic curve
        box = (0.0, 5e-5, -5e-5, 5e-5)
        cs = bifurcation_curves(nf, box, n=11)
        t = dict(cs.T)
        h = dict(cs.H)
        p = dict(cs.P)
        for l1 in list(t.keys())[1:]:
            if l1 in h and l1 in p:
                assert t[l1] > h[l1] > p[l1]


class TestTrueUnfolding:
    """The reference lambda-offsets are far outside the local beta-map's
    validity scale, so those regimes are checked on the true system."""

    def test_fold_location_matches_reference_offset(self, bt_point):
        from predbif.equilibria import interior_equilibria
        p0 = bt_point.params(BASE)
        l1 = 0.02

        def n_interior(l2):
            p = p0.with_(h=p0.h + l1, delta=p0.delta + l2)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                return len(interior_equilibria(p))

        lo, hi = -0.0130, -0.0125
        assert n_interior(lo) == 2 and n_interior(hi) == 0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if n_interior(mid) == 0:
                hi = mid
            else:
                lo = mid
        fold = 0.5 * (lo + hi)
        assert fold == pytest.approx(-0.01283735222, abs=1e-6)
