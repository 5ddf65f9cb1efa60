"""Fiberwise starshaped domains in a cotangent bundle, represented by the
fiber support function h(q, v) = max{<p, v> : p in the fiber over q}.

The support function is the only piece of symplectic data the package ever
touches: lengths, containment checks and all downstream bounds are computed
from it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    AscentError,
    ChartMismatchError,
    InvalidInputError,
    RankDeficientError,
)


# ---------------------------------------------------------------------------
# Extended reals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ExtReal:
    """Tagged extended nonnegative real: Finite(x) or Infinite.

    Encoded as a tagged value rather than a float sentinel so that infinite
    fibers cannot silently propagate through arithmetic.
    """

    value: float = 0.0
    finite: bool = True

    @staticmethod
    def of(x: float) -> "ExtReal":
        return ExtReal(float(x), True)

    def __float__(self) -> float:
        if not self.finite:
            raise InvalidInputError("cannot convert infinite support value to float")
        return self.value


INFINITE = ExtReal(math.inf, False)


# ---------------------------------------------------------------------------
# Base points and tangent vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False, slots=True)
class BasePoint:
    """A point of the base manifold in chart/embedding coordinates."""

    coords: np.ndarray
    chart_id: str = "default"


@dataclass(frozen=True, eq=False, slots=True)
class TangentVector:
    """A tangent vector attached at ``base``, in the same coordinate frame."""

    components: np.ndarray
    base: BasePoint


@dataclass(frozen=True, slots=True)
class BaseDescriptor:
    """Manifold kind, dimension and the chart ids the domain accepts."""

    kind: str
    dim: int
    charts: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class GaugeDomain:
    """A fiberwise starshaped domain exposed through its support oracle.

    The oracle must be positively 1-homogeneous in v, vanish at v = 0, and may
    return INFINITE for unbounded fiber directions.
    """

    base: BaseDescriptor
    support_oracle: Callable[[BasePoint, TangentVector], ExtReal]
    metadata: str = ""


@dataclass(frozen=True, eq=False)
class MetricSpec:
    """A Riemannian metric given either as flat or as the pullback of the
    Euclidean metric under an embedding with Jacobian ``embedding_jacobian``."""

    kind: str  # "embedding-induced" | "flat"
    embedding_jacobian: Optional[Callable[[BasePoint], np.ndarray]] = None
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in ("embedding-induced", "flat"):
            raise InvalidInputError(f"unknown metric kind {self.kind!r}")
        if self.kind == "embedding-induced" and self.embedding_jacobian is None:
            raise InvalidInputError("embedding-induced metric needs a Jacobian")
        if self.radius < 0:
            raise InvalidInputError("codisk radius must be nonnegative")


def embedding_metric(
    jacobian: Callable[[BasePoint], np.ndarray],
    radius: float = 1.0,
    check_points: tuple[BasePoint, ...] = (),
    rank_tol: float = 1e-10,
) -> MetricSpec:
    """Build an embedding-induced metric, rank-checking at sample points."""
    spec = MetricSpec("embedding-induced", jacobian, radius)
    for q in check_points:
        _checked_jacobian(spec, q, rank_tol)
    return spec


def _checked_jacobian(metric: MetricSpec, q: BasePoint, tol: float = 1e-10) -> np.ndarray:
    jac = np.asarray(metric.embedding_jacobian(q), dtype=float)
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv.size == 0 or sv[-1] <= tol * max(1.0, sv[0]):
        raise RankDeficientError(
            f"embedding Jacobian is rank deficient at {q.coords!r}"
        )
    return jac


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def _validate_attachment(q: BasePoint, v: TangentVector) -> None:
    if v.base.chart_id != q.chart_id or not np.array_equal(v.base.coords, q.coords):
        raise InvalidInputError("tangent vector is not attached at the given point")
    if np.isnan(q.coords).any() or np.isnan(v.components).any():
        raise InvalidInputError("NaN in support evaluation inputs")


def support(domain: GaugeDomain, q: BasePoint, v: TangentVector) -> ExtReal:
    """Evaluate the fiber support function of ``domain`` at (q, v)."""
    if q.chart_id not in domain.base.charts:
        raise ChartMismatchError(
            f"chart {q.chart_id!r} not accepted by domain ({domain.base.charts})"
        )
    _validate_attachment(q, v)
    return domain.support_oracle(q, v)


def metric_norm(metric: MetricSpec, q: BasePoint, v: TangentVector) -> float:
    """radius x Euclidean norm of the pushed-forward vector; equals the
    support of the associated codisk bundle."""
    _validate_attachment(q, v)
    if metric.kind == "flat":
        return metric.radius * float(np.linalg.norm(v.components))
    jac = _checked_jacobian(metric, q)
    return metric.radius * float(np.linalg.norm(jac @ v.components))


def codisk_domain(base: BaseDescriptor, metric: MetricSpec, metadata: str = "") -> GaugeDomain:
    """The codisk bundle {|p|_{g*} <= radius} of ``metric`` as a GaugeDomain."""
    if metric.kind == "flat":
        r = metric.radius

        def oracle(q: BasePoint, v: TangentVector) -> ExtReal:
            return ExtReal.of(r * np.linalg.norm(v.components))

    else:
        r = metric.radius
        jac_fn = metric.embedding_jacobian

        def oracle(q: BasePoint, v: TangentVector) -> ExtReal:
            return ExtReal.of(r * np.linalg.norm(np.asarray(jac_fn(q)) @ v.components))

    return GaugeDomain(base, oracle, metadata or f"codisk bundle, radius {metric.radius}")


def support_generic_maximize(
    gauge_fn: Callable[[BasePoint, np.ndarray], float],
    q: BasePoint,
    v: TangentVector,
    tol: float = 1e-8,
    starts: int = 8,
    max_iter: int = 500,
    seed: int = 0,
) -> float:
    """max <p, v> over the gauge sphere {F(q, p) = 1} by multi-start
    projected ascent; deterministic given the seed."""
    vv = np.asarray(v.components, dtype=float)
    if np.isnan(vv).any():
        raise InvalidInputError("NaN in direction vector")
    vnorm = np.linalg.norm(vv)
    if vnorm == 0.0:
        return 0.0
    dim = vv.shape[0]
    rng = np.random.default_rng(seed)

    def project(p: np.ndarray) -> np.ndarray:
        g = gauge_fn(q, p)
        if not np.isfinite(g) or g <= 0:
            raise InvalidInputError("gauge function not positive at nonzero p")
        return p / g

    def gauge_grad(p: np.ndarray) -> np.ndarray:
        h = 1e-6
        g = np.empty(dim)
        for i in range(dim):
            dp = np.zeros(dim)
            dp[i] = h
            g[i] = (gauge_fn(q, p + dp) - gauge_fn(q, p - dp)) / (2 * h)
        return g

    inits = [vv / vnorm]
    for _ in range(max(0, starts - 1)):
        d = rng.standard_normal(dim)
        n = np.linalg.norm(d)
        inits.append(d / n if n > 0 else vv / vnorm)

    def line_max(p: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, float]:
        # golden-section maximization of <v, p + s d> / F(p + s d) on s in [0, 1];
        # the ratio is scale-invariant, so this is ascent along the gauge sphere
        invphi = (math.sqrt(5.0) - 1.0) / 2.0

        def f(s: float) -> float:
            ps = p + s * d
            return float(vv @ ps) / gauge_fn(q, ps)

        a, b = 0.0, 1.0
        c = b - invphi * (b - a)
        e = a + invphi * (b - a)
        fc, fe = f(c), f(e)
        for _ in range(60):
            if fc > fe:
                b, e, fe = e, c, fc
                c = b - invphi * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, e, fe
                e = a + invphi * (b - a)
                fe = f(e)
        s = c if fc > fe else e
        return project(p + s * d), max(fc, fe)

    best = -math.inf
    for p0 in inits:
        p = project(p0)
        val = float(vv @ p)
        converged = False
        for _ in range(max_iter):
            grad = gauge_grad(p)
            gn = float(grad @ grad)
            if gn <= 0.0:
                raise InvalidInputError("gauge gradient vanished on the gauge sphere")
            # component of the objective direction tangent to {F = 1}
            d = vv - (float(vv @ grad) / gn) * grad
            dn = float(np.linalg.norm(d))
            if dn <= tol * vnorm:
                converged = True
                break
            cand, cval = line_max(p, d / dn)
            gain = cval - val
            if cval > val:
                p, val = cand, cval
            if gain <= 0.1 * tol * (1.0 + abs(val)):
                converged = True
                break
        if not converged:
            raise AscentError(
                f"projected ascent did not converge in {max_iter} iterations",
                best_value=max(best, val),
                residual=float(np.linalg.norm(d)),
            )
        best = max(best, val)
    return best


@dataclass(frozen=True, slots=True)
class SamplePlan:
    """How to sample (q, v) pairs for containment checks."""

    count: int = 10_000
    seed: int = 0
    tol: float = 1e-9


@dataclass(frozen=True, eq=False)
class ContainmentResult:
    contained: bool
    witness: Optional[tuple[BasePoint, TangentVector, float, float]] = None

    def __bool__(self) -> bool:
        return self.contained


def _sample_pairs(base: BaseDescriptor, plan: SamplePlan):
    rng = np.random.default_rng(plan.seed)
    chart = base.charts[0]
    if base.kind == "sphere":
        amb = base.dim + 1
        for _ in range(plan.count):
            qc = rng.standard_normal(amb)
            qc /= np.linalg.norm(qc)
            w = rng.standard_normal(amb)
            w -= (w @ qc) * qc
            q = BasePoint(qc, chart)
            yield q, TangentVector(w, q)
    elif base.kind in ("torus", "klein"):
        for _ in range(plan.count):
            qc = rng.uniform(0.0, 1.0, base.dim)
            q = BasePoint(qc, chart)
            yield q, TangentVector(rng.standard_normal(base.dim), q)
    else:
        raise InvalidInputError(f"no sampler for base kind {base.kind!r}")


def domain_contains(
    inner: GaugeDomain, outer: GaugeDomain, plan: SamplePlan = SamplePlan()
) -> ContainmentResult:
    """True iff support_inner <= support_outer at every sampled (q, v)."""
    if inner.base != outer.base:
        raise ChartMismatchError("containment check requires a common base")
    for q, v in _sample_pairs(inner.base, plan):
        si = inner.support_oracle(q, v)
        so = outer.support_oracle(q, v)
        if not so.finite:
            continue
        if not si.finite or si.value > so.value + plan.tol * (1.0 + abs(so.value)):
            iv = si.value if si.finite else math.inf
            return ContainmentResult(False, (q, v, iv, so.value))
    return ContainmentResult(True)
