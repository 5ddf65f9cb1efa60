"""Loops, loop families, the gauge length functional and its extremization.

The length of a loop q is the integral over one period of the fiber support
function evaluated on the velocity, computed with composite Simpson panels
plus Richardson-style doubling.  Suprema/infima over families are taken on a
parameter grid and refined with derivative-free local search.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import optimize as _sciopt

from .errors import (
    BasepointMismatchError,
    InfiniteLengthError,
    InvalidInputError,
    LoopValidationError,
)
from .gauge import BasePoint, GaugeDomain, TangentVector


# ---------------------------------------------------------------------------
# Loops
# ---------------------------------------------------------------------------

_FD_STEP = 1e-5  # central finite differences when no closed-form derivative


@dataclass(eq=False)
class Loop:
    """A parametrized loop t in [0, 1) -> base manifold.

    ``point_fn`` may be a lift (for flat quotients it can leave the
    fundamental domain); ``identify`` maps raw coordinates to a canonical
    representative and is used only by validation.
    """

    point_fn: Callable[[float], BasePoint]
    deriv_fn: Optional[Callable[[float], TangentVector]] = None
    periodic: bool = True
    metadata: str = ""
    identify: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if not self.periodic:
            raise LoopValidationError("loops must be periodic")
        if self.deriv_fn is None:
            pf = self.point_fn

            def fd(t: float) -> TangentVector:
                hi = pf(t + _FD_STEP).coords
                lo = pf(t - _FD_STEP).coords
                return TangentVector((hi - lo) / (2 * _FD_STEP), pf(t))

            self.deriv_fn = fd

    def point(self, t: float) -> BasePoint:
        return self.point_fn(t)

    def velocity(self, t: float) -> TangentVector:
        return self.deriv_fn(t)


def check_loop(loop: Loop, samples: int = 16, fd_rtol: float = 1e-4) -> None:
    """Validate closure (within 1e-10) and derivative consistency against a
    central finite difference at ``samples`` interior points."""
    p0 = loop.point_fn(0.0).coords
    p1 = loop.point_fn(1.0).coords
    if loop.identify is not None:
        p0, p1 = loop.identify(p0), loop.identify(p1)
    if np.linalg.norm(p1 - p0) > 1e-10:
        raise LoopValidationError(f"loop does not close: gap {np.linalg.norm(p1 - p0):.3e}")
    scale = max(1.0, float(np.linalg.norm(p0)))
    for j in range(samples):
        # offset avoids kinks that piecewise loops place at rational points
        t = (j + 0.37) / samples
        d = loop.deriv_fn(t).components
        fd = (loop.point_fn(t + _FD_STEP).coords - loop.point_fn(t - _FD_STEP).coords) / (
            2 * _FD_STEP
        )
        denom = max(np.linalg.norm(d), scale * 1e-3)
        if np.linalg.norm(d - fd) > fd_rtol * denom:
            raise LoopValidationError(
                f"derivative inconsistent with finite differences at t={t:.4f}"
            )


def reverse(loop: Loop) -> Loop:
    """The loop traversed in reverse; an involution up to float roundoff."""
    pf, df = loop.point_fn, loop.deriv_fn

    def rpoint(t: float) -> BasePoint:
        return pf(1.0 - t)

    def rderiv(t: float) -> TangentVector:
        v = df(1.0 - t)
        return TangentVector(-v.components, rpoint(t))

    return Loop(rpoint, rderiv, metadata=f"reverse({loop.metadata})", identify=loop.identify)


# smooth cutoff: 0 for t <= 0, 1 for t >= 1, flat to all orders at both ends
def _sigma(t: float) -> float:
    return math.exp(-1.0 / t) if t > 0 else 0.0


def cutoff(t: float) -> float:
    a, b = _sigma(t), _sigma(1.0 - t)
    return a / (a + b) if (a + b) > 0 else 0.0


def cutoff_deriv(t: float) -> float:
    if t <= 0.0 or t >= 1.0:
        return 0.0
    a, b = _sigma(t), _sigma(1.0 - t)
    da = a / (t * t)
    db = -b / ((1.0 - t) * (1.0 - t))
    return (da * b - a * db) / ((a + b) ** 2)


def concatenate(a: Loop, b: Loop) -> Loop:
    """Cutoff-reparametrized concatenation of two loops with a shared
    basepoint; length is additive by reparametrization invariance."""
    pa0, pb0 = a.point_fn(0.0), b.point_fn(0.0)
    if pa0.chart_id != pb0.chart_id:
        raise BasepointMismatchError("loops live in different charts")
    if np.linalg.norm(pa0.coords - pb0.coords) > 1e-9:
        raise BasepointMismatchError(
            f"basepoints differ by {np.linalg.norm(pa0.coords - pb0.coords):.3e}"
        )

    def point(t: float) -> BasePoint:
        t = t % 1.0
        if t < 0.5:
            return a.point_fn(cutoff(2.0 * t))
        return b.point_fn(cutoff(2.0 * t - 1.0))

    def deriv(t: float) -> TangentVector:
        t = t % 1.0
        if t < 0.5:
            s = 2.0 * t
            inner = a.deriv_fn(cutoff(s))
            return TangentVector(2.0 * cutoff_deriv(s) * inner.components, point(t))
        s = 2.0 * t - 1.0
        inner = b.deriv_fn(cutoff(s))
        return TangentVector(2.0 * cutoff_deriv(s) * inner.components, point(t))

    return Loop(point, deriv, metadata=f"concat({a.metadata},{b.metadata})", identify=a.identify)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class QuadratureSpec:
    """Composite Simpson panels with Richardson doubling."""

    panels: int = 512
    qtol: float = 1e-7
    max_doublings: int = 6

    def __post_init__(self):
        if self.panels < 8 or self.panels % 2:
            raise InvalidInputError("panel count must be even and >= 8")


def _simpson(fvals: np.ndarray, h: float) -> float:
    return (h / 3.0) * (
        fvals[0] + fvals[-1] + 4.0 * fvals[1:-1:2].sum() + 2.0 * fvals[2:-2:2].sum()
    )


def loop_length(domain: GaugeDomain, loop: Loop, quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Gauge length of ``loop``: Simpson quadrature of the support of the
    velocity, doubled until the relative change drops below qtol."""
    oracle = domain.support_oracle
    pf, df = loop.point_fn, loop.deriv_fn

    def integrand(t: float) -> float:
        s = oracle(pf(t), df(t))
        if not s.finite:
            raise InfiniteLengthError(f"infinite support at t={t:.6f}", t=t)
        return s.value

    n = quad.panels
    vals = np.array([integrand(t) for t in np.linspace(0.0, 1.0, n + 1)])
    prev = _simpson(vals, 1.0 / n)
    for _ in range(quad.max_doublings):
        mids = np.array([integrand(t) for t in (np.arange(n) + 0.5) / n])
        n *= 2
        merged = np.empty(n + 1)
        merged[0::2] = vals
        merged[1::2] = mids
        vals = merged
        cur = _simpson(vals, 1.0 / n)
        if abs(cur - prev) <= quad.qtol * (1.0 + abs(cur)):
            return cur + (cur - prev) / 15.0
        prev = cur
    return prev


# ---------------------------------------------------------------------------
# Families and extremization
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class GridAxis:
    lo: float
    hi: float
    count: int
    periodic: bool = False

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count, endpoint=not self.periodic)


@dataclass(frozen=True)
class ParamGrid:
    """Grid descriptor for a compact parameter manifold."""

    axes: tuple[GridAxis, ...]

    @property
    def dim(self) -> int:
        return len(self.axes)

    def points(self):
        if not self.axes:
            yield np.empty(0)
            return
        for combo in itertools.product(*(ax.points() for ax in self.axes)):
            yield np.array(combo)


@dataclass(frozen=True, eq=False)
class LoopFamily:
    """A named smooth family of loops over a parameter grid."""

    name: str
    grid: ParamGrid
    loop_at: Callable[[np.ndarray], Loop]


@dataclass(frozen=True, slots=True)
class RefineSpec:
    budget: int = 200  # function evaluations per extremum
    xtol: float = 1e-6


@dataclass(frozen=True, eq=False)
class ExtremalLengthReport:
    family: str
    E: float  # sup length after refinement
    e: float  # inf length after refinement
    argmax_params: np.ndarray
    argmin_params: np.ndarray
    grid_E: float
    grid_e: float
    grid_shape: tuple[int, ...]
    refinement_history: tuple[dict, ...]
    tolerance: float
    attained_on_grid_closure: bool = True


def _map(fn, items):
    workers = int(os.environ.get("STRINGCAP_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _golden_section(f, lo, hi, budget, xtol):
    """Golden-section minimization of f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while evals < budget and (b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        evals += 1
    x = c if fc < fd else d
    return x, min(fc, fd), evals


def _refine(f, x0, grid: ParamGrid, budget: int, xtol: float, minimize: bool):
    """Derivative-free local refinement from a grid extremum."""
    sign = 1.0 if minimize else -1.0
    los = np.array([ax.lo for ax in grid.axes])
    his = np.array([ax.hi for ax in grid.axes])

    def wrapped(x):
        return sign * f(np.clip(np.atleast_1d(x), los, his))

    if grid.dim == 0:
        return x0, f(x0), 0
    if grid.dim == 1:
        ax = grid.axes[0]
        span = (ax.hi - ax.lo) / max(ax.count - 1, 1)
        lo = max(ax.lo, float(x0[0]) - span)
        hi = min(ax.hi, float(x0[0]) + span)
        x, fx, evals = _golden_section(lambda t: wrapped([t]), lo, hi, budget, xtol)
        return np.array([x]), sign * fx, evals
    res = _sciopt.minimize(
        wrapped,
        x0,
        method="Nelder-Mead",
        options={"maxfev": budget, "xatol": xtol, "fatol": 1e-12},
    )
    x = np.clip(res.x, los, his)
    return x, sign * res.fun, int(res.nfev)


def extremal_lengths(
    domain: GaugeDomain,
    family: LoopFamily,
    quad: QuadratureSpec = QuadratureSpec(),
    refine: RefineSpec = RefineSpec(),
) -> ExtremalLengthReport:
    """Grid evaluation of loop lengths over the family's parameter space,
    followed by golden-section (1-D) or Nelder-Mead (>= 2-D) refinement of
    both extrema."""

    def length_at(params: np.ndarray) -> float:
        try:
            return loop_length(domain, family.loop_at(params), quad)
        except InfiniteLengthError as exc:
            raise InfiniteLengthError(
                f"family {family.name!r} has infinite length at params {params!r} "
                f"(t={exc.t:.6f})",
                t=exc.t,
                params=params,
            ) from exc

    pts = list(family.grid.points())
    lengths = np.array(_map(length_at, pts))
    i_max = int(np.argmax(lengths))
    i_min = int(np.argmin(lengths))
    grid_E = float(lengths[i_max])
    grid_e = float(lengths[i_min])

    xmax, ref_E, n_max = _refine(length_at, pts[i_max], family.grid, refine.budget, refine.xtol, minimize=False)
    xmin, ref_e, n_min = _refine(length_at, pts[i_min], family.grid, refine.budget, refine.xtol, minimize=True)

    E = max(grid_E, ref_E)
    e = min(grid_e, ref_e)
    if not (math.isfinite(E) and math.isfinite(e)):
        raise InfiniteLengthError("non-finite extremal length", t=float("nan"))
    history = (
        {"extremum": "sup", "grid": grid_E, "refined": ref_E, "evals": n_max},
        {"extremum": "inf", "grid": grid_e, "refined": ref_e, "evals": n_min},
    )
    return ExtremalLengthReport(
        family=family.name,
        E=E,
        e=e,
        argmax_params=xmax if ref_E >= grid_E else pts[i_max],
        argmin_params=xmin if ref_e <= grid_e else pts[i_min],
        grid_E=grid_E,
        grid_e=grid_e,
        grid_shape=tuple(ax.count for ax in family.grid.axes),
        refinement_history=history,
        tolerance=quad.qtol * (1.0 + abs(E)),
    )
