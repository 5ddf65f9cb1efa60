"""Turn scenarios into numeric width bounds with attached certificates.

The symbolic filtration of each certificate is resolved against the extremal
lengths of the scenario's loop families; the resolved number is the reported
upper bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .catalog import Scenario, TargetClass
from .errors import ScenarioParameterError
from .loops import ExtremalLengthReport, QuadratureSpec, RefineSpec, extremal_lengths
from .stralg import Certificate, check_certificate, derive_certificate


@dataclass(frozen=True, eq=False)
class CapacityBound:
    """A certified numeric upper bound on the width of ``target``."""

    scenario_id: str
    target: TargetClass
    upper_bound: float
    certificate: Certificate
    numeric_bindings: dict
    tolerance: float
    gr_symbol: str
    equality_known: bool = False
    equality_note: str = ""
    family_reports: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {
            "scenario": self.scenario_id,
            "target": self.target.name,
            "gr": self.gr_symbol,
            "upper_bound": self.upper_bound,
            "equality_known": self.equality_known,
            "equality_note": self.equality_note,
            "tolerance": self.tolerance,
            "bindings": dict(self.numeric_bindings),
            "grid_values": {
                name: {"grid_sup": r.grid_E, "grid_inf": r.grid_e, "sup": r.E, "inf": r.e}
                for name, r in self.family_reports.items()
            },
            "certificate": self.certificate.to_jsonable(),
        }


def resolve_bindings(
    scenario: Scenario,
    quad: Optional[QuadratureSpec] = None,
    refine: RefineSpec = RefineSpec(),
) -> tuple[dict, dict]:
    """Extremal lengths for every family, mapped through the scenario's
    symbolic binding selectors.  Returns (bindings, per-family reports)."""
    quad = quad or scenario.quad
    reports: dict[str, ExtremalLengthReport] = {
        name: extremal_lengths(scenario.domain, fam, quad, refine)
        for name, fam in scenario.families.items()
    }
    bindings = {}
    for name, sel in scenario.symbolic_bindings.items():
        rep = reports[sel.family]
        bindings[name] = sel.scale * (rep.E if sel.mode == "sup" else rep.e)
    return bindings, reports


def _make_bound(
    scenario: Scenario,
    target: TargetClass,
    cert: Certificate,
    bindings: dict,
    reports: dict,
) -> CapacityBound:
    report = check_certificate(cert)
    if not report.passed:
        raise ScenarioParameterError(
            f"derived certificate failed its own replay: {report.conclusion_message}"
        )
    value = cert.filtration.resolve(bindings)
    tol = sum(
        reports[scenario.symbolic_bindings[s].family].tolerance
        for s in cert.filtration.symbols
    )
    note = scenario.equality.get(target.name, "")
    return CapacityBound(
        scenario_id=scenario.id,
        target=target,
        upper_bound=value,
        certificate=cert,
        numeric_bindings={s: bindings[s] for s in cert.filtration.symbols},
        tolerance=tol,
        gr_symbol=f"Gr({target.name}, Omega)",
        equality_known=bool(note),
        equality_note=note,
        family_reports=reports,
    )


def _signed_min_bound(
    scenario: Scenario, target: TargetClass, bindings: dict, reports: dict
) -> CapacityBound:
    """Derive the bound for both rotation orientations and keep the smaller."""
    candidates = []
    for sign in (+1, -1):
        cert = derive_certificate(scenario, target, sign=sign)
        candidates.append(_make_bound(scenario, target, cert, bindings, reports))
    return min(candidates, key=lambda b: b.upper_bound)


def bound_open_book(
    scenario: Scenario,
    quad: Optional[QuadratureSpec] = None,
    refine: RefineSpec = RefineSpec(),
) -> tuple[CapacityBound, ...]:
    """The point-class bound plus the single-orientation bound: the latter
    applies to the fundamental class when the page has boundary and to the
    page class when it does not."""
    if scenario.kind not in ("ellipsoid1", "open_book"):
        raise ScenarioParameterError("bound_open_book needs an open-book style scenario")
    bindings, reports = resolve_bindings(scenario, quad, refine)
    out = []
    for target in scenario.targets:
        if target.name == "[pt]":
            cert = derive_certificate(scenario, target)
            out.append(_make_bound(scenario, target, cert, bindings, reports))
        else:
            out.append(_signed_min_bound(scenario, target, bindings, reports))
    return tuple(out)


def bound_product_torus(
    scenario: Scenario,
    quad: Optional[QuadratureSpec] = None,
    refine: RefineSpec = RefineSpec(),
) -> CapacityBound:
    if scenario.kind not in ("product_torus", "camel"):
        raise ScenarioParameterError("bound_product_torus needs a product-torus scenario")
    bindings, reports = resolve_bindings(scenario, quad, refine)
    target = scenario.target("[T^k]")
    cert = derive_certificate(scenario, target)
    return _make_bound(scenario, target, cert, bindings, reports)


def bound_non_orientable(
    scenario: Scenario,
    quad: Optional[QuadratureSpec] = None,
    refine: RefineSpec = RefineSpec(),
) -> CapacityBound:
    if scenario.kind != "non_orientable":
        raise ScenarioParameterError("bound_non_orientable needs a non-orientable scenario")
    bindings, reports = resolve_bindings(scenario, quad, refine)
    target = scenario.target("[Sigma]")
    cert = derive_certificate(scenario, target)
    return _make_bound(scenario, target, cert, bindings, reports)


def bound_ellipsoid2(
    scenario: Scenario,
    quad: Optional[QuadratureSpec] = None,
    refine: RefineSpec = RefineSpec(),
) -> tuple[CapacityBound, ...]:
    if scenario.kind != "ellipsoid2":
        raise ScenarioParameterError("bound_ellipsoid2 needs a diagonal-action scenario")
    bindings, reports = resolve_bindings(scenario, quad, refine)
    out = []
    for target in scenario.targets:
        cert = derive_certificate(scenario, target)
        out.append(_make_bound(scenario, target, cert, bindings, reports))
    return tuple(out)


def compute_bounds(
    scenario: Scenario,
    quad: Optional[QuadratureSpec] = None,
    refine: RefineSpec = RefineSpec(),
) -> tuple[CapacityBound, ...]:
    """All bounds the scenario kind supports."""
    if scenario.kind in ("ellipsoid1", "open_book"):
        return bound_open_book(scenario, quad, refine)
    if scenario.kind in ("product_torus", "camel"):
        return (bound_product_torus(scenario, quad, refine),)
    if scenario.kind == "non_orientable":
        return (bound_non_orientable(scenario, quad, refine),)
    if scenario.kind == "ellipsoid2":
        return bound_ellipsoid2(scenario, quad, refine)
    raise ScenarioParameterError(f"unknown scenario kind {scenario.kind!r}")


def camel_limit_report(n: int, eps: float, delta_grid) -> dict:
    """Bound table over a grid of widths delta, with the delta -> 0 value
    recovered by linear (Richardson) extrapolation from the two smallest
    grid entries."""
    deltas = sorted(float(d) for d in delta_grid)
    if len(deltas) < 2:
        raise ScenarioParameterError("need at least two delta values to extrapolate")
    if deltas[0] <= 0.0:
        raise ScenarioParameterError("delta values must be positive")
    rows = []
    from .catalog import camel_scenario

    for d in deltas:
        b = bound_product_torus(camel_scenario(n, eps, d))
        rows.append({"delta": d, "bound": b.upper_bound})
    d1, d2 = rows[0]["delta"], rows[1]["delta"]
    b1, b2 = rows[0]["bound"], rows[1]["bound"]
    extrapolated = b1 - d1 * (b2 - b1) / (d2 - d1)
    return {
        "n": n,
        "eps": eps,
        "rows": rows,
        "extrapolated": float(extrapolated),
    }
