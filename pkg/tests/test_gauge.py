"""Support-function evaluation, containment and the generic gauge maximizer."""
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from stringcap.catalog import camel_domain, ellipsoid_domain, flat_torus_domain
from stringcap.errors import ChartMismatchError, InvalidInputError, RankDeficientError
from stringcap.gauge import (
    BaseDescriptor,
    BasePoint,
    ExtReal,
    MetricSpec,
    SamplePlan,
    TangentVector,
    codisk_domain,
    domain_contains,
    embedding_metric,
    metric_norm,
    support,
    support_generic_maximize,
)

TWO_PI = 2.0 * math.pi


def _sphere_point(coords):
    return BasePoint(np.asarray(coords, dtype=float), "embedding")


def test_flat_codisk_support_is_radius_on_unit_vectors():
    base = BaseDescriptor("torus", 2, ("torus",))
    for r in (0.5, 1.0, 2.0):
        dom = codisk_domain(base, MetricSpec("flat", radius=r))
        q = BasePoint(np.array([0.1, 0.2]), "torus")
        v = TangentVector(np.array([0.6, 0.8]), q)  # unit length
        assert float(support(dom, q, v)) == pytest.approx(r, abs=1e-12)


def test_stretched_sphere_equator_support_is_constant():
    a = 0.3
    dom = ellipsoid_domain(2, a)
    for t in np.linspace(0.0, 1.0, 7):
        ang = TWO_PI * t
        q = _sphere_point([0.0, math.cos(ang), math.sin(ang)])
        v = TangentVector(
            np.array([0.0, -TWO_PI * math.sin(ang), TWO_PI * math.cos(ang)]), q
        )
        assert float(support(dom, q, v)) == pytest.approx(TWO_PI * a, rel=1e-12)


def _camel_lp_value(d, eps, delta, v, q1_zero, box=50.0):
    """Independent oracle: linear program over a box-capped fiber."""
    lo = -(eps / 2.0 + delta)
    hi = eps / 2.0 + 2.0 * delta if q1_zero else box
    bounds = [(-box, box)] * (d - 1) + [(lo, hi)]
    res = linprog(-np.asarray(v, dtype=float), bounds=bounds, method="highs")
    assert res.status == 0
    return -res.fun


@pytest.mark.parametrize("d", [2, 3])
def test_camel_support_matches_linear_program(d):
    eps, delta = 0.4, 0.01
    dom = camel_domain(d, eps, delta)

    q = BasePoint(np.full(d, 0.3), "camel")
    v_minus = np.zeros(d)
    v_minus[-1] = -1.0
    got = support(dom, q, TangentVector(v_minus, q))
    assert float(got) == pytest.approx(eps / 2.0 + delta, abs=1e-14)
    assert float(got) == pytest.approx(_camel_lp_value(d, eps, delta, v_minus, False), abs=1e-10)

    qz = BasePoint(np.concatenate([[0.0], np.full(d - 1, 0.3)]), "camel:q1zero")
    v_plus = np.zeros(d)
    v_plus[-1] = 2.0
    got = support(dom, qz, TangentVector(v_plus, qz))
    assert float(got) == pytest.approx(2.0 * (eps / 2.0 + 2.0 * delta), abs=1e-14)
    assert float(got) == pytest.approx(_camel_lp_value(d, eps, delta, v_plus, True), abs=1e-10)


def test_camel_support_is_infinite_off_axis_and_off_slice():
    dom = camel_domain(2, 0.4, 0.01)
    q = BasePoint(np.array([0.3, 0.3]), "camel")
    assert not support(dom, q, TangentVector(np.array([1.0, 1.0]), q)).finite
    # positive last-momentum direction is unbounded away from the q1 = 0 slice
    assert not support(dom, q, TangentVector(np.array([0.0, 1.0]), q)).finite
    # and the LP oracle's box-capped value keeps growing with the cap
    v = np.array([0.0, 1.0])
    small = _camel_lp_value(2, 0.4, 0.01, v, False, box=10.0)
    large = _camel_lp_value(2, 0.4, 0.01, v, False, box=1000.0)
    assert large > 50 * small / 10


def test_support_homogeneity_on_random_samples():
    dom = ellipsoid_domain(2, 0.7)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        qc = rng.standard_normal(3)
        qc /= np.linalg.norm(qc)
        w = rng.standard_normal(3)
        w -= (w @ qc) * qc
        lam = rng.uniform(0.0, 10.0)
        q = _sphere_point(qc)
        s1 = float(support(dom, q, TangentVector(lam * w, q)))
        s0 = float(support(dom, q, TangentVector(w, q)))
        assert abs(s1 - lam * s0) <= 1e-9 * (1.0 + lam * s0)


def test_support_of_zero_vector_is_exactly_zero():
    for dom, q in (
        (ellipsoid_domain(2, 0.4), _sphere_point([1.0, 0.0, 0.0])),
        (camel_domain(2, 0.4, 0.01), BasePoint(np.array([0.2, 0.2]), "camel")),
    ):
        dim = q.coords.shape[0]
        assert float(support(dom, q, TangentVector(np.zeros(dim), q))) == 0.0


def test_codisk_duality_support_equals_radius_times_unit_metric_norm():
    base = BaseDescriptor("sphere", 2, ("embedding",))
    jac = np.diag([1.0, 1.0, 0.5])
    unit_metric = MetricSpec("embedding-induced", lambda q: jac, 1.0)
    rng = np.random.default_rng(1)
    for r in (0.5, 1.0, 3.0):
        dom = codisk_domain(base, MetricSpec("embedding-induced", lambda q: jac, r))
        for _ in range(50):
            qc = rng.standard_normal(3)
            qc /= np.linalg.norm(qc)
            q = _sphere_point(qc)
            v = TangentVector(rng.standard_normal(3), q)
            lhs = float(support(dom, q, v))
            rhs = r * metric_norm(unit_metric, q, v)
            assert abs(lhs - rhs) <= 1e-12 * (1.0 + rhs)


def test_metric_norm_round_vs_stretched_comparison():
    # the scaled round metric never exceeds the stretched one
    jac_s = np.diag([1.0, 0.3, 0.3])
    jac_r = 0.3 * np.eye(3)
    ms = MetricSpec("embedding-induced", lambda q: jac_s, 1.0)
    mr = MetricSpec("embedding-induced", lambda q: jac_r, 1.0)
    rng = np.random.default_rng(2)
    for _ in range(100):
        qc = rng.standard_normal(3)
        qc /= np.linalg.norm(qc)
        q = _sphere_point(qc)
        v = TangentVector(rng.standard_normal(3), q)
        assert metric_norm(mr, q, v) <= metric_norm(ms, q, v) + 1e-12


def test_chart_mismatch_and_nan_are_rejected():
    dom = ellipsoid_domain(2, 0.5)
    q_bad = BasePoint(np.array([1.0, 0.0, 0.0]), "other")
    with pytest.raises(ChartMismatchError):
        support(dom, q_bad, TangentVector(np.zeros(3), q_bad))
    q = _sphere_point([1.0, 0.0, 0.0])
    with pytest.raises(InvalidInputError):
        support(dom, q, TangentVector(np.array([0.0, math.nan, 0.0]), q))
    other = _sphere_point([0.0, 1.0, 0.0])
    with pytest.raises(InvalidInputError):
        support(dom, q, TangentVector(np.zeros(3), other))


def test_rank_deficient_jacobian_is_rejected():
    q = BasePoint(np.array([0.0, 0.0]), "default")
    with pytest.raises(RankDeficientError):
        embedding_metric(lambda q: np.array([[1.0, 0.0], [0.0, 0.0]]), check_points=(q,))


def test_generic_maximize_euclidean_and_ellipse():
    q = BasePoint(np.zeros(2), "default")
    euclid = lambda q, p: float(np.linalg.norm(p))
    v = TangentVector(np.array([0.6, 0.8]), q)
    assert support_generic_maximize(euclid, q, v, tol=1e-8) == pytest.approx(1.0, abs=1e-8)

    A, B = 2.0, 0.5
    ellipse = lambda q, p: math.sqrt(p[0] ** 2 / A**2 + p[1] ** 2 / B**2)
    v1 = TangentVector(np.array([1.0, 0.0]), q)
    assert support_generic_maximize(ellipse, q, v1, tol=1e-8) == pytest.approx(A, abs=1e-8)
    v2 = TangentVector(np.array([0.3, -0.7]), q)
    exact = math.sqrt(A**2 * 0.09 + B**2 * 0.49)
    assert support_generic_maximize(ellipse, q, v2, tol=1e-8) == pytest.approx(exact, abs=1e-8)


def test_generic_maximize_matches_builtin_codisk_support():
    lengths = (1.3, 0.4)
    dom = flat_torus_domain(2, radius=0.8, lengths=lengths)
    L = np.diag(lengths)
    Linv = np.linalg.inv(L)
    gauge = lambda q, p: float(np.linalg.norm(Linv @ p)) / 0.8
    rng = np.random.default_rng(4)
    for _ in range(10):
        q = BasePoint(rng.uniform(0, 1, 2), "torus")
        v = TangentVector(rng.standard_normal(2), q)
        oracle = float(support(dom, q, v))
        got = support_generic_maximize(gauge, q, v, tol=1e-8)
        assert abs(got - oracle) <= 10 * 1e-8 * (1.0 + oracle)


def test_containment_reflexive_and_radius_violations():
    base = BaseDescriptor("sphere", 2, ("embedding",))
    unit = codisk_domain(base, MetricSpec("embedding-induced", lambda q: np.eye(3), 1.0))
    bigger = codisk_domain(base, MetricSpec("embedding-induced", lambda q: np.eye(3), 1.1))
    plan = SamplePlan(count=500, seed=0)
    assert domain_contains(unit, unit, plan)
    res = domain_contains(bigger, unit, plan)
    assert not res
    q, v, inner_val, outer_val = res.witness
    assert inner_val > outer_val


def test_extreal_infinite_cannot_become_float():
    from stringcap.gauge import INFINITE

    assert not INFINITE.finite
    with pytest.raises(InvalidInputError):
        float(INFINITE)
    assert float(ExtReal.of(2.5)) == 2.5
