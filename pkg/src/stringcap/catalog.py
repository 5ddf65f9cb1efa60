"""Built-in scenarios: geometry, loop families, targets and rewrite data.

Each constructor bundles a gauge domain with the loop families whose extremal
lengths feed the width bounds, the target classes those bounds apply to, and
the intersection/sweep tables the symbolic calculus consults.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from jsonschema import validate as _js_validate

from .errors import ScenarioParameterError
from .gauge import (
    BaseDescriptor,
    BasePoint,
    ExtReal,
    GaugeDomain,
    INFINITE,
    MetricSpec,
    TangentVector,
    codisk_domain,
)
from .loops import (
    GridAxis,
    Loop,
    LoopFamily,
    ParamGrid,
    QuadratureSpec,
    cutoff,
    cutoff_deriv,
)
from .stralg import RuleContext

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Scenario types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class TargetClass:
    """The homology class a bound applies to, with the cohomology label it
    pairs nontrivially with.  The pairing is declared, never inferred."""

    name: str
    declared_nonzero_pairing: str
    justification: str = ""


@dataclass(frozen=True, slots=True)
class BindingSelector:
    """Resolves a symbolic filtration name to scale x (sup or inf) of a
    named loop family."""

    family: str
    mode: str  # "sup" | "inf"
    scale: float = 1.0


@dataclass(frozen=True, eq=False)
class Scenario:
    id: str
    kind: str
    params: dict
    domain: GaugeDomain
    families: dict[str, LoopFamily]
    targets: tuple[TargetClass, ...]
    symbolic_bindings: dict[str, BindingSelector]
    rule_context: RuleContext
    quad: QuadratureSpec = QuadratureSpec(panels=64)
    boundary_nonempty: Optional[bool] = None
    symmetric: bool = False  # sup lengths agree for the two orientations
    equality: dict = field(default_factory=dict)  # target name -> note
    notes: str = ""

    def __post_init__(self):
        for name, sel in self.symbolic_bindings.items():
            if sel.family not in self.families:
                raise ScenarioParameterError(
                    f"binding {name!r} refers to unknown family {sel.family!r}"
                )
            if sel.mode not in ("sup", "inf"):
                raise ScenarioParameterError(f"binding {name!r} has bad mode {sel.mode!r}")

    def target(self, name: str) -> TargetClass:
        for t in self.targets:
            if t.name == name:
                return t
        raise ScenarioParameterError(f"scenario {self.id!r} has no target {name!r}")


# ---------------------------------------------------------------------------
# Sphere geometry helpers
# ---------------------------------------------------------------------------

def _sphere_base(n: int) -> BaseDescriptor:
    return BaseDescriptor("sphere", n, ("embedding",))


def ellipsoid_metric(n: int, a: float, stretched_axes: int = 2) -> MetricSpec:
    """Pullback of the Euclidean metric under the linear map scaling the last
    ``stretched_axes`` ambient coordinates by a; tangent vectors are given in
    ambient coordinates, so the Jacobian is the constant diagonal map."""
    diag = np.ones(n + 1)
    diag[n + 1 - stretched_axes:] = a
    jac = np.diag(diag)
    return MetricSpec("embedding-induced", lambda q: jac, 1.0)


def round_metric(n: int, a: float) -> MetricSpec:
    """The comparison metric a^2 x Euclidean, i.e. scaling every direction."""
    jac = a * np.eye(n + 1)
    return MetricSpec("embedding-induced", lambda q: jac, 1.0)


def ellipsoid_domain(n: int, a: float, stretched_axes: int = 2) -> GaugeDomain:
    return codisk_domain(
        _sphere_base(n),
        ellipsoid_metric(n, a, stretched_axes),
        metadata=f"unit codisk of stretched sphere metric, n={n}, a={a}",
    )


def ellipsoid_round_domain(n: int, a: float) -> GaugeDomain:
    return codisk_domain(
        _sphere_base(n),
        round_metric(n, a),
        metadata=f"unit codisk of scaled round metric, n={n}, a={a}",
    )


def _page_circle_loop(x: np.ndarray, sign: int, radius_fn=None) -> Loop:
    """Loop rotating the circle over page point x of the sphere open book:
    t -> (x, rho cos(2 pi s t), rho sin(2 pi s t)) with rho = sqrt(1-|x|^2)."""
    x = np.asarray(x, dtype=float)
    rho = math.sqrt(max(0.0, 1.0 - float(x @ x)))
    w = TWO_PI * sign

    def point(t: float) -> BasePoint:
        ang = w * t
        return BasePoint(
            np.concatenate([x, [rho * math.cos(ang), rho * math.sin(ang)]]), "embedding"
        )

    def deriv(t: float) -> TangentVector:
        ang = w * t
        vel = np.concatenate(
            [np.zeros_like(x), [-w * rho * math.sin(ang), w * rho * math.cos(ang)]]
        )
        return TangentVector(vel, point(t))

    return Loop(point, deriv, metadata=f"page circle at x={x.tolist()}, sign={sign:+d}")


def _page_grid(page_dim: int) -> ParamGrid:
    # box whose corners reach the binding |x| = 1 so the family includes the
    # degenerate constant loops there
    if page_dim == 0:
        return ParamGrid(())
    s = 1.0 / math.sqrt(page_dim)
    count = 17 if page_dim == 1 else 9
    return ParamGrid(tuple(GridAxis(-s, s, count) for _ in range(page_dim)))


# ---------------------------------------------------------------------------
# Scenario constructors
# ---------------------------------------------------------------------------

def ellipsoid_scenario(n: int, a: float) -> Scenario:
    """Unit codisk of the stretched sphere metric (last two axes scaled by a),
    with the open-book rotation families over the page disk."""
    if n < 2:
        raise ScenarioParameterError("n must be >= 2")
    if not (0.0 < a <= 1.0):
        raise ScenarioParameterError("a must lie in (0, 1]")
    domain = ellipsoid_domain(n, a)
    grid = _page_grid(n - 1)
    families = {
        "L+": LoopFamily("L+", grid, lambda x: _page_circle_loop(x, +1)),
        "L-": LoopFamily("L-", grid, lambda x: _page_circle_loop(x, -1)),
    }
    ctx = RuleContext(
        axioms=frozenset({"ACTION_IS_BV"}),
        iota_table={"id": "PD(T*M)", "pt": "T*M_pt", "orbit": "PD_dual(V)"},
        sweep_table={"pt": "orbit"},
        boundary_nonempty=True,
    )
    return Scenario(
        id=f"ellipsoid1(n={n},a={a})",
        kind="ellipsoid1",
        params={"scenario": "ellipsoid1", "n": n, "a": a},
        domain=domain,
        families=families,
        targets=(
            TargetClass("[pt]", "PD(T*M)", "constant loops sweep the whole base"),
            TargetClass("[S^n]", "T*M_pt", "fundamental class pairs with a fiber"),
        ),
        symbolic_bindings={
            "E+": BindingSelector("L+", "sup"),
            "E-": BindingSelector("L-", "sup"),
            "e+": BindingSelector("L+", "inf"),
            "e-": BindingSelector("L-", "inf"),
        },
        rule_context=ctx,
        boundary_nonempty=True,
        symmetric=True,
        equality={"[S^n]": "width of the fundamental class equals the equator length"},
        notes="rotation-orbit lengths are 2 pi a sqrt(1-|x|^2); binding loops are constant",
    )


def ellipsoid2_scenario(n: int, a: float) -> Scenario:
    """Sphere metric stretched on the last four axes; the diagonal circle
    action rotates two of them, with orbit lengths 2 pi a r."""
    if n < 3:
        raise ScenarioParameterError("n must be >= 3")
    if not (0.0 < a <= 1.0):
        raise ScenarioParameterError("a must lie in (0, 1]")
    domain = codisk_domain(
        _sphere_base(n),
        ellipsoid_metric(n, a, stretched_axes=4),
        metadata=f"unit codisk, four stretched axes, n={n}, a={a}",
    )

    def orbit_loop(params: np.ndarray) -> Loop:
        r = float(params[0])
        c = math.sqrt(max(0.0, 1.0 - r * r))

        def point(t: float) -> BasePoint:
            coords = np.zeros(n + 1)
            coords[0] = c
            coords[n - 1] = r * math.cos(TWO_PI * t)
            coords[n] = r * math.sin(TWO_PI * t)
            return BasePoint(coords, "embedding")

        def deriv(t: float) -> TangentVector:
            vel = np.zeros(n + 1)
            vel[n - 1] = -TWO_PI * r * math.sin(TWO_PI * t)
            vel[n] = TWO_PI * r * math.cos(TWO_PI * t)
            return TangentVector(vel, point(t))

        return Loop(point, deriv, metadata=f"diagonal orbit, r={r}")

    families = {
        "orbits": LoopFamily("orbits", ParamGrid((GridAxis(0.0, 1.0, 17),)), orbit_loop)
    }
    ctx = RuleContext(
        axioms=frozenset({"OB_BV2", "HOPF_CONTRACT"}),
        iota_table={"id": "PD(T*M)"},
    )
    return Scenario(
        id=f"ellipsoid2(n={n},a={a})",
        kind="ellipsoid2",
        params={"scenario": "ellipsoid2", "n": n, "a": a},
        domain=domain,
        families=families,
        targets=(
            TargetClass("[pt]", "PD(T*M)", "constant loops sweep the whole base"),
            TargetClass("[S^n]", "PD(T*M)", "same derivation; equality is known"),
        ),
        symbolic_bindings={"E_A": BindingSelector("orbits", "sup")},
        rule_context=ctx,
        boundary_nonempty=False,
        equality={
            "[pt]": "matching lower bound by an explicit ball family",
            "[S^n]": "matching lower bound by an explicit ball family",
        },
        notes="diagonal-action orbit lengths are 2 pi a r, supremum at r = 1",
    )


def flat_torus_domain(
    d: int,
    radius: float = 1.0,
    lengths: Optional[tuple[float, ...]] = None,
    charts: tuple[str, ...] = ("torus",),
) -> GaugeDomain:
    base = BaseDescriptor("torus", d, charts)
    if lengths is None:
        metric = MetricSpec("flat", radius=radius)
    else:
        if len(lengths) != d:
            raise ScenarioParameterError("lengths must have one entry per factor")
        jac = np.diag(np.asarray(lengths, dtype=float))
        metric = MetricSpec("embedding-induced", lambda q: jac, radius)
    return codisk_domain(base, metric, metadata=f"flat torus codisk, radius {radius}")


def camel_domain(d: int, eps: float, delta: float) -> GaugeDomain:
    """Fiberwise unbounded domain over the d-torus: the last momentum is
    bounded below everywhere and bounded above only on the q1 = 0 slice
    (expressed through a dedicated chart flag, never by thresholding)."""
    base = BaseDescriptor("torus", d, ("camel", "camel:q1zero"))
    lo = eps / 2.0 + delta
    hi = eps / 2.0 + 2.0 * delta

    def oracle(q: BasePoint, v: TangentVector) -> ExtReal:
        w = v.components
        if not np.any(w):
            return ExtReal.of(0.0)
        if np.any(w[:-1] != 0.0):
            return INFINITE
        c = float(w[-1])
        if c < 0.0:
            return ExtReal.of(-c * lo)
        if q.chart_id == "camel:q1zero":
            return ExtReal.of(c * hi)
        return INFINITE

    return GaugeDomain(base, oracle, metadata=f"camel domain, eps={eps}, delta={delta}")


def _torus_line_loop(
    prefix: np.ndarray, sign: int, d: int, chart: str
) -> Loop:
    """Straight loop (prefix..., sign * t) in lifted torus coordinates; the
    closure check folds back into the fundamental domain."""
    fixed = np.asarray(prefix, dtype=float)

    def point(t: float) -> BasePoint:
        coords = np.empty(d)
        coords[:-1] = fixed
        coords[-1] = sign * t
        return BasePoint(coords, chart)

    def deriv(t: float) -> TangentVector:
        vel = np.zeros(d)
        vel[-1] = sign
        return TangentVector(vel, point(t))

    return Loop(
        point,
        deriv,
        metadata=f"torus line loop, prefix={fixed.tolist()}, sign={sign:+d}",
        identify=lambda c: np.mod(c, 1.0),
    )


def _torus_grid(dim: int, count: int = 4) -> ParamGrid:
    return ParamGrid(tuple(GridAxis(0.0, 1.0, count, periodic=True) for _ in range(dim)))


def product_torus_scenario(V_spec: str, d: int, k: int, domain_spec: dict) -> Scenario:
    """Loop families on V x T^d: the negative rotation over the full torus and
    the positive rotation constrained to the first k coordinates being zero."""
    if V_spec != "pt":
        raise ScenarioParameterError("only point pages are supported (V_spec='pt')")
    if d < 1:
        raise ScenarioParameterError("d must be >= 1")
    if not (0 < k < d):
        raise ScenarioParameterError("k must satisfy 0 < k < d")

    dtype = domain_spec.get("type", "codisk")
    if dtype == "camel":
        eps = float(domain_spec["eps"])
        delta = float(domain_spec["delta"])
        if eps <= 0 or delta <= 0:
            raise ScenarioParameterError("eps and delta must be positive")
        domain = camel_domain(d, eps, delta)
        kind = "camel"
        params = {"scenario": "camel", "n": d, "eps": eps, "delta": delta}
        plus_chart = "camel:q1zero"
        minus_chart = "camel"
        notes = "both families have constant support integrands; the bound is eps + 3 delta"
    elif dtype == "codisk":
        radius = float(domain_spec.get("radius", 1.0))
        lengths = domain_spec.get("lengths")
        domain = flat_torus_domain(d, radius, tuple(lengths) if lengths else None)
        kind = "product_torus"
        params = {"scenario": "product_torus", "d": d, "k": k, "radius": radius}
        plus_chart = minus_chart = "torus"
        notes = "flat geodesic loops along the last factor"
    else:
        raise ScenarioParameterError(f"unknown domain type {dtype!r}")

    def minus_loop(p: np.ndarray) -> Loop:
        return _torus_line_loop(p, -1, d, minus_chart)

    def plus_loop(p: np.ndarray) -> Loop:
        prefix = np.concatenate([np.zeros(k), np.asarray(p, dtype=float)])
        return _torus_line_loop(prefix, +1, d, plus_chart)

    families = {
        "L-": LoopFamily("L-", _torus_grid(d - 1), minus_loop),
        "L+^k": LoopFamily("L+^k", _torus_grid(d - k - 1), plus_loop),
    }
    ctx = RuleContext(
        sweep_table={"slice-": "id", "slice+k": f"T^{d - k}"},
        iota_table={f"T^{d - k}": f"PD(VxT^{d - k})"},
    )
    return Scenario(
        id=f"{kind}(" + ",".join(f"{k2}={v}" for k2, v in params.items() if k2 != "scenario") + ")",
        kind=kind,
        params=params,
        domain=domain,
        families=families,
        targets=(
            TargetClass(
                "[T^k]",
                f"PD(VxT^{d - k})",
                "coordinate subtorus pairs with the complementary slice",
            ),
        ),
        symbolic_bindings={
            "E-": BindingSelector("L-", "sup"),
            "E+^k": BindingSelector("L+^k", "sup"),
        },
        rule_context=ctx,
        boundary_nonempty=False,
        notes=notes,
    )


def camel_scenario(n: int, eps: float, delta: float) -> Scenario:
    if n <= 1:
        raise ScenarioParameterError("n must be > 1")
    return product_torus_scenario(
        "pt", n, 1, {"type": "camel", "eps": eps, "delta": delta}
    )


def klein_identify(a: float, b: float):
    """Fold lifted plane coordinates into the fundamental domain of the
    quotient by (x, y) -> (x + a, -y) and (x, y) -> (x, y + b)."""

    def fold(c: np.ndarray) -> np.ndarray:
        x, y = float(c[0]), float(c[1])
        k = math.floor(x / a)
        x -= k * a
        if k % 2:
            y = -y
        return np.array([x, y % b])

    return fold


def klein_bottle_scenario(a: float, b: float, radius: float = 1.0) -> Scenario:
    """Flat Klein bottle; the loop class consists of straight lines with
    x-winding one, which reverse orientation, paired with their reverses."""
    if a <= 0 or b <= 0:
        raise ScenarioParameterError("a and b must be positive")
    base = BaseDescriptor("klein", 2, ("klein",))
    domain = codisk_domain(
        base, MetricSpec("flat", radius=radius), metadata=f"flat Klein bottle codisk, a={a}, b={b}"
    )
    fold = klein_identify(a, b)
    x0 = a / 4.0

    def straight_loop(p: np.ndarray) -> Loop:
        y0 = float(p[0])
        # closes in the quotient: endpoint (x0 + a, -y0) folds back to (x0, y0)
        base_pt = np.array([x0, y0])
        w = np.array([a, -2.0 * y0])

        def point(t: float) -> BasePoint:
            return BasePoint(base_pt + t * w, "klein")

        def deriv(t: float) -> TangentVector:
            return TangentVector(w.copy(), point(t))

        return Loop(point, deriv, metadata=f"straight loop, y0={y0}", identify=fold)

    def doubled_loop(p: np.ndarray) -> Loop:
        # out along the straight loop and back along its reverse; closes in
        # the lift, so its length is l(q) + l(reverse q)
        y0 = float(p[0])
        base_pt = np.array([x0, y0])
        w = np.array([a, -2.0 * y0])

        def point(t: float) -> BasePoint:
            t = t % 1.0
            s = cutoff(2.0 * t) if t < 0.5 else cutoff(2.0 - 2.0 * t)
            return BasePoint(base_pt + s * w, "klein")

        def deriv(t: float) -> TangentVector:
            t = t % 1.0
            if t < 0.5:
                ds = 2.0 * cutoff_deriv(2.0 * t)
            else:
                ds = -2.0 * cutoff_deriv(2.0 - 2.0 * t)
            return TangentVector(ds * w, point(t))

        return Loop(point, deriv, metadata=f"doubled straight loop, y0={y0}", identify=fold)

    grid = ParamGrid((GridAxis(-b / 4.0, b / 4.0, 17),))
    families = {
        "L": LoopFamily("L", grid, straight_loop),
        "Ldoubled": LoopFamily("Ldoubled", grid, doubled_loop),
    }
    ctx = RuleContext(
        intersection_table={("q", "qbar"): "pt"},
        iota_table={"pt": "T*Sigma_pt"},
    )
    return Scenario(
        id=f"klein(a={a},b={b},r={radius})",
        kind="non_orientable",
        params={"scenario": "klein", "a": a, "b": b, "radius": radius},
        domain=domain,
        families=families,
        targets=(
            TargetClass("[Sigma]", "T*Sigma_pt", "fundamental class pairs with a fiber"),
        ),
        symbolic_bindings={
            "E": BindingSelector("Ldoubled", "inf"),
            "l_q": BindingSelector("Ldoubled", "inf", scale=0.5),
            "l_qbar": BindingSelector("Ldoubled", "inf", scale=0.5),
        },
        rule_context=ctx,
        boundary_nonempty=False,
        notes=(
            "loop class restricted to straight lines in the flat structure; "
            "the straight-line infimum 2a sqrt(1) is the flat optimum, "
            "cross-checked against a coarse piecewise-linear grid search"
        ),
    )


def open_book_scenario(
    page_spec: str,
    f_spec: str,
    action_spec: str = "rotation",
    domain_spec: Optional[dict] = None,
) -> Scenario:
    """Rotation-invariant geometries with an explicit page/angle splitting.

    page 'interval' with a round profile gives the 2-sphere; page 'circle'
    with a trivial profile gives the flat 2-torus.
    """
    domain_spec = dict(domain_spec or {})
    if action_spec != "rotation":
        raise ScenarioParameterError("only the page-rotation action is supported")

    if page_spec == "interval":
        if f_spec != "round":
            raise ScenarioParameterError("interval pages require the round profile")
        radius = float(domain_spec.get("radius", 1.0))
        base = ellipsoid_scenario(2, 1.0)
        domain = codisk_domain(
            _sphere_base(2),
            MetricSpec("embedding-induced", lambda q: np.eye(3), radius),
            metadata=f"round 2-sphere codisk, radius {radius}",
        )
        ctx = base.rule_context
        return Scenario(
            id=f"open_book(interval,round,r={radius})",
            kind="open_book",
            params={"scenario": "open_book", "page": "interval", "radius": radius},
            domain=domain,
            families=base.families,
            targets=(
                TargetClass("[pt]", "PD(T*M)", "constant loops sweep the whole base"),
                TargetClass("[M]", "T*M_pt", "fundamental class pairs with a fiber"),
            ),
            symbolic_bindings=base.symbolic_bindings,
            rule_context=ctx,
            boundary_nonempty=True,
            symmetric=True,
            notes="the interval page with round profile closes up to the 2-sphere",
        )

    if page_spec == "circle":
        if f_spec != "trivial":
            raise ScenarioParameterError("circle pages require the trivial profile")
        radius = float(domain_spec.get("radius", 1.0))
        len_page = float(domain_spec.get("len_page", 1.0))
        len_fiber = float(domain_spec.get("len_fiber", 1.0))
        domain = flat_torus_domain(2, radius, (len_page, len_fiber))

        def fiber_loop(sign: int):
            def make(p: np.ndarray) -> Loop:
                u = float(p[0])

                def point(t: float) -> BasePoint:
                    return BasePoint(np.array([u, sign * t]), "torus")

                def deriv(t: float) -> TangentVector:
                    return TangentVector(np.array([0.0, float(sign)]), point(t))

                return Loop(
                    point,
                    deriv,
                    metadata=f"fiber loop at u={u}, sign={sign:+d}",
                    identify=lambda c: np.mod(c, 1.0),
                )

            return make

        grid = ParamGrid((GridAxis(0.0, 1.0, 8, periodic=True),))
        families = {
            "L+": LoopFamily("L+", grid, fiber_loop(+1)),
            "L-": LoopFamily("L-", grid, fiber_loop(-1)),
        }
        ctx = RuleContext(
            axioms=frozenset({"ACTION_IS_BV"}),
            iota_table={"id": "PD(T*M)", "pt": "T*M_pt", "orbit": "PD_dual(V)"},
            sweep_table={"pt": "orbit"},
            boundary_nonempty=False,
        )
        return Scenario(
            id=f"open_book(circle,trivial,r={radius},lp={len_page},lf={len_fiber})",
            kind="open_book",
            params={
                "scenario": "open_book",
                "page": "circle",
                "radius": radius,
                "len_page": len_page,
                "len_fiber": len_fiber,
            },
            domain=domain,
            families=families,
            targets=(
                TargetClass("[pt]", "PD(T*M)", "constant loops sweep the whole base"),
                TargetClass("[V]", "PD_dual(V)", "page class pairs with its dual"),
            ),
            symbolic_bindings={
                "E+": BindingSelector("L+", "sup"),
                "E-": BindingSelector("L-", "sup"),
                "e+": BindingSelector("L+", "inf"),
                "e-": BindingSelector("L-", "inf"),
            },
            rule_context=ctx,
            boundary_nonempty=False,
            symmetric=True,
            notes="circle page with trivial profile: the flat 2-torus",
        )

    raise ScenarioParameterError(f"unknown page spec {page_spec!r}")


# ---------------------------------------------------------------------------
# JSON round-tripping
# ---------------------------------------------------------------------------

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "scenario": {
            "enum": [
                "ellipsoid1",
                "ellipsoid2",
                "open_book",
                "product_torus",
                "camel",
                "klein",
            ]
        },
        "n": {"type": "integer", "minimum": 1},
        "a": {"type": "number", "exclusiveMinimum": 0},
        "b": {"type": "number", "exclusiveMinimum": 0},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "delta": {"type": "number", "exclusiveMinimum": 0},
        "k": {"type": "integer", "minimum": 1},
        "d": {"type": "integer", "minimum": 2},
        "radius": {"type": "number", "minimum": 0},
        "page": {"enum": ["interval", "circle"]},
        "len_page": {"type": "number", "exclusiveMinimum": 0},
        "len_fiber": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["scenario"],
    "additionalProperties": False,
}


def build_scenario(config: dict) -> Scenario:
    """Construct a scenario from a schema-validated configuration mapping."""
    _js_validate(config, SCENARIO_SCHEMA)
    name = config["scenario"]
    if name == "ellipsoid1":
        return ellipsoid_scenario(int(config.get("n", 2)), float(config.get("a", 1.0)))
    if name == "ellipsoid2":
        return ellipsoid2_scenario(int(config.get("n", 3)), float(config.get("a", 1.0)))
    if name == "camel":
        return camel_scenario(
            int(config.get("n", 2)),
            float(config.get("eps", 1.0)),
            float(config.get("delta", 0.1)),
        )
    if name == "product_torus":
        return product_torus_scenario(
            "pt",
            int(config.get("d", 2)),
            int(config.get("k", 1)),
            {"type": "codisk", "radius": float(config.get("radius", 1.0))},
        )
    if name == "klein":
        return klein_bottle_scenario(
            float(config.get("a", 1.0)),
            float(config.get("b", 1.0)),
            float(config.get("radius", 1.0)),
        )
    if name == "open_book":
        page = config.get("page", "interval")
        f_spec = "round" if page == "interval" else "trivial"
        return open_book_scenario(page, f_spec, "rotation", dict(config))
    raise ScenarioParameterError(f"unknown scenario {name!r}")


def scenario_config(s: Scenario) -> dict:
    """The configuration mapping that reconstructs ``s`` via build_scenario."""
    return dict(s.params)
