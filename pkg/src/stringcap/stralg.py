"""Symbolic filtered loop-class calculus.

Classes carry a length-filtration threshold (numeric and/or symbolic).  Three
operations act on them: the concatenation-intersection product ``star``, the
loop-rotation operator ``delta`` and the constant-loop inclusion ``iota``.
Identities between these operations are encoded as rewrite rules; a chain of
rule applications that ends in a constant-loop identity is packaged as a
machine-checkable certificate whose total filtration bounds the width of the
target class.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import IncompatibleBindingError, MissingAxiomError


# ---------------------------------------------------------------------------
# Filtration expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class FiltExpr:
    """A filtration threshold: numeric constant plus a multiset of symbols."""

    const: float = 0.0
    symbols: tuple[str, ...] = ()

    def __add__(self, other: "FiltExpr") -> "FiltExpr":
        return FiltExpr(self.const + other.const, tuple(sorted(self.symbols + other.symbols)))

    def resolve(self, bindings: dict[str, float]) -> float:
        return self.const + sum(bindings[s] for s in self.symbols)

    @property
    def is_zero(self) -> bool:
        return self.const == 0.0 and not self.symbols

    def __str__(self) -> str:
        parts = [f"{self.const:g}"] if self.const else []
        parts.extend(self.symbols)
        return " + ".join(parts) if parts else "0"


def fsym(name: str) -> FiltExpr:
    return FiltExpr(0.0, (name,))


def fnum(x: float) -> FiltExpr:
    return FiltExpr(float(x), ())


def filt_leq(a: FiltExpr, b: FiltExpr) -> bool:
    """Symbolic a <= b: a's symbols form a sub-multiset of b's and the
    constants compare."""
    remaining = list(b.symbols)
    for s in a.symbols:
        if s in remaining:
            remaining.remove(s)
        else:
            return False
    return a.const <= b.const + 1e-15


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

class Term:
    """Base class for structured loop-class expressions."""


@dataclass(frozen=True, slots=True)
class ActionClass(Term):
    """Loop family swept by the circle action applied to a cycle label."""

    g: str
    sign: int  # +1 or -1

    def __str__(self) -> str:
        return f"A[{self.g},{'+' if self.sign > 0 else '-'}]"


@dataclass(frozen=True, slots=True)
class ConstantLoops(Term):
    cycle: str

    def __str__(self) -> str:
        return f"const[{self.cycle}]"


@dataclass(frozen=True, slots=True)
class LoopCycle(Term):
    """A plain loop family that is not an action orbit family."""

    label: str

    def __str__(self) -> str:
        return f"loop[{self.label}]"


@dataclass(frozen=True, slots=True)
class BVPreimage(Term):
    """A class B with Delta(B) equal to ``of``; justified by ``axiom``."""

    of: Term
    axiom: str  # ACTION_IS_BV or OB_BV2

    def __str__(self) -> str:
        return f"B[{self.of}]"


@dataclass(frozen=True, slots=True)
class Iota(Term):
    label: str
    cycle: str = "pt"

    def __str__(self) -> str:
        return f"iota[{self.label}]"


@dataclass(frozen=True, slots=True)
class Delta(Term):
    of: Term

    def __str__(self) -> str:
        return f"Delta({self.of})"


@dataclass(frozen=True, slots=True)
class Star(Term):
    factors: tuple[Term, ...]

    def __str__(self) -> str:
        return " * ".join(str(f) for f in self.factors)


@dataclass(frozen=True, slots=True)
class FilteredClass:
    """A term together with its filtration threshold."""

    term: Term
    filtration: FiltExpr
    param_dim: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.term} @ {self.filtration}"


# ---------------------------------------------------------------------------
# Rewrite-rule table
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class RewriteRule:
    id: str
    statement: str
    side_condition: str = ""


RULES: dict[str, RewriteRule] = {
    r.id: r
    for r in (
        RewriteRule(
            "CS1",
            "A[g1,+] * A[g2,-] = const[g1 cap g2], valid at the sum of the "
            "two sweep thresholds",
            "g1, g2 transverse; for rotated plain loops the intersection is "
            "read off the scenario's intersection table",
        ),
        RewriteRule(
            "CS2",
            "A[g1,s] * const[g2] = A[g1 cap g2, s], valid at the sweep "
            "threshold of g1",
            "g1, g2 transverse",
        ),
        RewriteRule(
            "CS3",
            "Delta(A[g,s]) = A[swept(g), s], same threshold",
        ),
        RewriteRule(
            "ACTION_IS_BV",
            "Delta(B[s]) = A[id,s] at the sweep threshold of the page "
            "rotation; B is supported on the doubled page",
            "open-book scenario registering the axiom",
        ),
        RewriteRule(
            "OB_BV2",
            "Delta(D) = C, where C represents the diagonal action class of "
            "the deformed open book, at the diagonal sweep threshold",
            "diagonal-action open-book scenario registering the axiom",
        ),
        RewriteRule(
            "HOPF_CONTRACT",
            "A[id,s] = const[id]: the diagonal circle action is homotopic "
            "to the trivial action through loops below the threshold",
            "4-axis structure with dim >= 3; threshold equals the diagonal "
            "orbit sweep value",
        ),
        RewriteRule(
            "STAR_COMM",
            "a * b = b * a; star factors are kept in canonical order",
        ),
        RewriteRule(
            "IOTA_CONST",
            "const[c] = iota[beta(c)]; a constant-loop class is the image "
            "of the dual cohomology label under the constant-loop inclusion",
            "a single orbit class contracts to a constant loop first when "
            "the scenario declares a nonempty page boundary",
        ),
    )
}


@dataclass(frozen=True, eq=False)
class RuleContext:
    """Scenario-supplied data the rules consult."""

    axioms: frozenset[str] = frozenset()
    intersection_table: dict = field(default_factory=dict)
    sweep_table: dict = field(default_factory=dict)
    iota_table: dict = field(default_factory=dict)
    boundary_nonempty: Optional[bool] = None

    def intersect(self, g1: str, g2: str) -> str:
        if g1 == "id":
            return g2
        if g2 == "id":
            return g1
        if (g1, g2) in self.intersection_table:
            return self.intersection_table[(g1, g2)]
        if (g2, g1) in self.intersection_table:
            return self.intersection_table[(g2, g1)]
        raise IncompatibleBindingError(f"no declared intersection for ({g1!r}, {g2!r})")

    def sweep(self, g: str) -> str:
        return self.sweep_table.get(g, f"zeta({g})")

    def iota_label(self, cycle: str) -> str:
        if cycle in self.iota_table:
            return self.iota_table[cycle]
        raise IncompatibleBindingError(f"no dual cohomology label declared for cycle {cycle!r}")


EMPTY_CONTEXT = RuleContext()


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def iota(beta_label: str, cycle: str = "pt") -> FilteredClass:
    """Constant-loop class of a cohomology label; valid at every positive
    filtration, recorded as threshold 0."""
    return FilteredClass(Iota(beta_label, cycle), fnum(0.0))


def delta(c: FilteredClass, ctx: RuleContext = EMPTY_CONTEXT) -> FilteredClass:
    """Loop-rotation operator.  Filtration is preserved; the parameter
    dimension grows by one when known.  Action classes rewrite eagerly, and
    registered BV-preimage axioms resolve immediately."""
    pd = None if c.param_dim is None else c.param_dim + 1
    t = c.term
    if isinstance(t, ActionClass):
        return FilteredClass(ActionClass(ctx.sweep(t.g), t.sign), c.filtration, pd)
    if isinstance(t, BVPreimage) and t.axiom in ctx.axioms:
        return FilteredClass(t.of, c.filtration, pd)
    return FilteredClass(Delta(t), c.filtration, pd)


def _flatten(t: Term) -> tuple[Term, ...]:
    return t.factors if isinstance(t, Star) else (t,)


def star(a: FilteredClass, b: FilteredClass, ctx: RuleContext = EMPTY_CONTEXT) -> FilteredClass:
    """Concatenation-intersection product; filtrations add, known patterns
    rewrite eagerly and generic products canonicalize to a sorted factor
    multiset (the product is commutative and associative)."""
    filt = a.filtration + b.filtration
    ta, tb = a.term, b.term

    # CS1 on opposite-sign action classes
    for x, y in ((ta, tb), (tb, ta)):
        if (
            isinstance(x, ActionClass)
            and isinstance(y, ActionClass)
            and x.sign > 0 > y.sign
        ):
            return FilteredClass(ConstantLoops(ctx.intersect(x.g, y.g)), filt)
    # CS1 on rotated plain loop families with a declared intersection
    if isinstance(ta, Delta) and isinstance(tb, Delta):
        ia, ib = ta.of, tb.of
        if isinstance(ia, LoopCycle) and isinstance(ib, LoopCycle):
            key = (ia.label, ib.label)
            rkey = (ib.label, ia.label)
            table = ctx.intersection_table
            if key in table or rkey in table:
                return FilteredClass(ConstantLoops(table.get(key, table.get(rkey))), filt)
    # CS2: action class against constant loops (or an iota class)
    for x, y in ((ta, tb), (tb, ta)):
        if isinstance(x, ActionClass) and isinstance(y, (ConstantLoops, Iota)):
            g2 = y.cycle
            return FilteredClass(ActionClass(ctx.intersect(x.g, g2), x.sign), filt)

    factors = tuple(sorted(_flatten(ta) + _flatten(tb), key=str))
    return FilteredClass(Star(factors), filt)


# ---------------------------------------------------------------------------
# Rule application (shared between derivation and replay)
# ---------------------------------------------------------------------------

def apply_rule(rule_id: str, inputs: tuple[FilteredClass, ...], ctx: RuleContext) -> FilteredClass:
    if rule_id == "ACTION_IS_BV" or rule_id == "OB_BV2":
        (c,) = inputs
        t = c.term
        if not (isinstance(t, BVPreimage) and t.axiom == rule_id):
            raise IncompatibleBindingError(f"{rule_id} expects a matching BV preimage")
        if rule_id not in ctx.axioms:
            raise MissingAxiomError(rule_id)
        return FilteredClass(t.of, c.filtration)
    if rule_id == "CS1":
        a, b = inputs
        out = star(a, b, ctx)
        if not isinstance(out.term, ConstantLoops):
            raise IncompatibleBindingError("CS1 inputs did not reduce to constant loops")
        return out
    if rule_id == "CS2":
        a, b = inputs
        out = star(a, b, ctx)
        if not isinstance(out.term, ActionClass):
            raise IncompatibleBindingError("CS2 inputs did not reduce to an action class")
        return out
    if rule_id == "CS3":
        (c,) = inputs
        if not isinstance(c.term, ActionClass):
            raise IncompatibleBindingError("CS3 expects an action class")
        return delta(c, ctx)
    if rule_id == "HOPF_CONTRACT":
        (c,) = inputs
        if "HOPF_CONTRACT" not in ctx.axioms:
            raise MissingAxiomError("HOPF_CONTRACT")
        if not (isinstance(c.term, ActionClass) and c.term.g == "id"):
            raise IncompatibleBindingError("HOPF_CONTRACT expects the full action class")
        return FilteredClass(ConstantLoops("id"), c.filtration)
    if rule_id == "IOTA_CONST":
        (c,) = inputs
        t = c.term
        if isinstance(t, ConstantLoops):
            return FilteredClass(Iota(ctx.iota_label(t.cycle), t.cycle), fnum(0.0))
        if isinstance(t, ActionClass) and t.g == "pt" and ctx.boundary_nonempty:
            # a single orbit contracts to a constant loop through the binding
            return FilteredClass(Iota(ctx.iota_label("pt"), "pt"), fnum(0.0))
        raise IncompatibleBindingError("IOTA_CONST expects a constant-loop class")
    if rule_id == "STAR_COMM":
        a, b = inputs
        return star(a, b, ctx)
    raise IncompatibleBindingError(f"unknown rule {rule_id!r}")


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CertificateStep:
    rule: str
    inputs: tuple[FilteredClass, ...]
    output: FilteredClass
    note: str = ""


@dataclass(frozen=True, eq=False)
class ConclusionFactor:
    kind: str  # "delta" | "iota"
    alpha: Union[FilteredClass, str]


@dataclass(frozen=True, eq=False)
class Certificate:
    """A validated rewrite derivation of iota(beta) = Delta(a1)*...*iota(a_{k+1})
    whose total filtration upper-bounds the width of the paired target."""

    scenario_id: str
    target_name: str
    target_pairing: str
    beta: str
    steps: tuple[CertificateStep, ...]
    factors: tuple[ConclusionFactor, ...]
    filtration: FiltExpr
    context: RuleContext
    note: str = ""

    def to_jsonable(self) -> dict:
        return {
            "scenario": self.scenario_id,
            "target": self.target_name,
            "beta": self.beta,
            "filtration": str(self.filtration),
            "steps": [
                {
                    "rule": s.rule,
                    "statement": RULES[s.rule].statement,
                    "inputs": [str(c) for c in s.inputs],
                    "output": str(s.output),
                    "note": s.note,
                }
                for s in self.steps
            ],
            "conclusion": {
                "lhs": f"iota[{self.beta}]",
                "rhs": [
                    f"Delta({f.alpha.term})" if f.kind == "delta" else f"iota[{f.alpha}]"
                    for f in self.factors
                ],
            },
            "note": self.note,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_jsonable(), indent=2, **kw)


class _Derivation:
    def __init__(self, ctx: RuleContext):
        self.ctx = ctx
        self.steps: list[CertificateStep] = []

    def apply(self, rule_id: str, *inputs: FilteredClass, note: str = "") -> FilteredClass:
        out = apply_rule(rule_id, tuple(inputs), self.ctx)
        self.steps.append(CertificateStep(rule_id, tuple(inputs), out, note))
        return out


@dataclass(frozen=True, eq=False)
class StepReport:
    index: int
    rule: str
    ok: bool
    message: str = ""


@dataclass(frozen=True, eq=False)
class ValidationReport:
    steps: tuple[StepReport, ...]
    conclusion_ok: bool
    conclusion_message: str = ""

    @property
    def passed(self) -> bool:
        return self.conclusion_ok and all(s.ok for s in self.steps)


def _is_axiomatic(c: FilteredClass) -> bool:
    t = c.term
    if isinstance(t, (BVPreimage, LoopCycle, ActionClass, Iota)):
        return True
    if isinstance(t, Delta) and isinstance(t.of, LoopCycle):
        return True
    return False


def check_certificate(cert: Certificate) -> ValidationReport:
    """Independent replay: re-execute every step against the rule table,
    re-derive filtrations from scratch and confirm the conclusion shape."""
    ctx = cert.context
    available: list[FilteredClass] = []
    reports: list[StepReport] = []
    for i, step in enumerate(cert.steps):
        ok = True
        msg = ""
        for inp in step.inputs:
            if not (_is_axiomatic(inp) or any(_same(inp, a) for a in available)):
                ok, msg = False, f"input {inp} is neither an axiom nor a prior output"
        if ok:
            try:
                out = apply_rule(step.rule, step.inputs, ctx)
            except Exception as exc:  # rule refused or axiom missing
                ok, msg = False, f"replay failed: {exc}"
            else:
                if not _same(out, step.output):
                    ok, msg = False, f"replayed output {out} differs from recorded {step.output}"
                elif not filt_leq(
                    out.filtration,
                    _sum_filt([c.filtration for c in step.inputs]),
                ):
                    ok, msg = False, "rule inflated the filtration threshold"
        reports.append(StepReport(i, step.rule, ok, msg))
        available.append(step.output)

    # conclusion shape: iota(beta) = Delta(a_1) * ... * Delta(a_k) * iota(a_{k+1})
    c_ok = True
    c_msg = ""
    deltas = [f for f in cert.factors if f.kind == "delta"]
    iotas = [f for f in cert.factors if f.kind == "iota"]
    bad = [f for f in cert.factors if f.kind not in ("delta", "iota")]
    if bad or not deltas or len(iotas) > 1:
        c_ok, c_msg = False, "conclusion factors are not of the required shape"
    else:
        total = _sum_filt([f.alpha.filtration for f in deltas])
        if total != cert.filtration:
            c_ok, c_msg = False, (
                f"conclusion filtration {cert.filtration} does not equal the sum "
                f"of the rotation-factor thresholds {total}"
            )
        elif any(f.alpha.filtration.is_zero for f in deltas):
            c_ok, c_msg = False, "a rotation factor carries a zero threshold"
        elif cert.target_pairing != cert.beta:
            c_ok, c_msg = False, "target's declared pairing does not match beta"
        else:
            final = cert.steps[-1].output if cert.steps else None
            if not (final and isinstance(final.term, Iota) and final.term.label == cert.beta):
                c_ok, c_msg = False, "derivation does not end in iota(beta)"
    return ValidationReport(tuple(reports), c_ok, c_msg)


def derive_certificate(scenario, target, sign: int = +1) -> Certificate:
    """Run the rewrite chain appropriate to the scenario kind and target and
    package it as a certificate.  ``scenario`` supplies the rule context
    (axioms, intersection/sweep/dual-label tables); ``sign`` selects the
    rotation orientation for the single-orientation open-book bounds."""
    ctx = scenario.rule_context
    d = _Derivation(ctx)
    kind = scenario.kind
    tname = target.name
    beta = target.declared_nonzero_pairing
    s_name = "+" if sign > 0 else "-"
    o_name = "-" if sign > 0 else "+"

    if kind in ("ellipsoid1", "open_book") and tname == "[pt]":
        b_plus = FilteredClass(BVPreimage(ActionClass("id", +1), "ACTION_IS_BV"), fsym("E+"))
        b_minus = FilteredClass(BVPreimage(ActionClass("id", -1), "ACTION_IS_BV"), fsym("E-"))
        a_plus = d.apply("ACTION_IS_BV", b_plus, note="rotation of the doubled page, positive orientation")
        a_minus = d.apply("ACTION_IS_BV", b_minus, note="rotation of the doubled page, negative orientation")
        const = d.apply("CS1", a_plus, a_minus)
        d.apply("IOTA_CONST", const)
        factors = (ConclusionFactor("delta", b_plus), ConclusionFactor("delta", b_minus))
        filt = fsym("E+") + fsym("E-")
    elif kind in ("ellipsoid1", "open_book") and tname in ("[M]", "[S^n]"):
        if not ctx.boundary_nonempty:
            raise IncompatibleBindingError(
                "the single-orientation bound needs a page with boundary"
            )
        b_s = FilteredClass(
            BVPreimage(ActionClass("id", sign), "ACTION_IS_BV"), fsym(f"E{s_name}")
        )
        a_s = d.apply("ACTION_IS_BV", b_s)
        a_pt = d.apply("CS2", a_s, iota("T*M_pt", "pt"), note="cut down to a single fiber")
        d.apply("IOTA_CONST", a_pt, note="the single orbit contracts through the binding")
        factors = (
            ConclusionFactor("delta", b_s),
            ConclusionFactor("iota", "T*M_pt"),
        )
        filt = fsym(f"E{s_name}")
    elif kind == "open_book" and tname == "[V]":
        if ctx.boundary_nonempty:
            raise IncompatibleBindingError("the page bound needs a closed page")
        a_pt = FilteredClass(ActionClass("pt", sign), fsym(f"e{s_name}"))
        orbit = d.apply("CS3", a_pt, note="rotating the shortest single orbit")
        b_o = FilteredClass(
            BVPreimage(ActionClass("id", -sign), "ACTION_IS_BV"), fsym(f"E{o_name}")
        )
        a_o = d.apply("ACTION_IS_BV", b_o)
        const = d.apply("CS1", orbit, a_o)
        d.apply("IOTA_CONST", const)
        factors = (ConclusionFactor("delta", a_pt), ConclusionFactor("delta", b_o))
        filt = fsym(f"e{s_name}") + fsym(f"E{o_name}")
    elif kind in ("product_torus", "camel") and tname == "[T^k]":
        a_minus = FilteredClass(ActionClass("slice-", -1), fsym("E-"))
        a_plus = FilteredClass(ActionClass("slice+k", +1), fsym("E+^k"))
        sw_minus = d.apply("CS3", a_minus, note="rotating the full negative family")
        sw_plus = d.apply("CS3", a_plus, note="rotating the constrained positive family")
        const = d.apply("CS1", sw_plus, sw_minus)
        d.apply("IOTA_CONST", const)
        factors = (ConclusionFactor("delta", a_minus), ConclusionFactor("delta", a_plus))
        filt = fsym("E-") + fsym("E+^k")
    elif kind == "non_orientable" and tname == "[Sigma]":
        dq = FilteredClass(LoopCycle("q"), fsym("l_q"))
        dqbar = FilteredClass(LoopCycle("qbar"), fsym("l_qbar"))
        const = d.apply(
            "CS1",
            delta(dq),
            delta(dqbar),
            note="an orientation-reversing loop meets its reverse in a point",
        )
        d.apply("IOTA_CONST", const)
        factors = (ConclusionFactor("delta", dq), ConclusionFactor("delta", dqbar))
        filt = fsym("l_q") + fsym("l_qbar")
    elif kind == "ellipsoid2" and tname in ("[pt]", "[S^n]"):
        b_diag = FilteredClass(BVPreimage(ActionClass("id", +1), "OB_BV2"), fsym("E_A"))
        a_diag = d.apply("OB_BV2", b_diag, note="rotation of the deformed diagonal family")
        const = d.apply(
            "HOPF_CONTRACT", a_diag, note="diagonal action contracts below the orbit length"
        )
        d.apply("IOTA_CONST", const)
        factors = (ConclusionFactor("delta", b_diag),)
        filt = fsym("E_A")
    else:
        raise IncompatibleBindingError(
            f"no derivation for scenario kind {kind!r} and target {tname!r}"
        )

    return Certificate(
        scenario_id=scenario.id,
        target_name=tname,
        target_pairing=beta,
        beta=beta,
        steps=tuple(d.steps),
        factors=factors,
        filtration=filt,
        context=ctx,
        note=(
            "thresholds are computed suprema; the strict/closed filtration "
            "distinction is below reported tolerance"
        ),
    )


def _same(a: FilteredClass, b: FilteredClass) -> bool:
    return a.term == b.term and a.filtration == b.filtration


def _sum_filt(filts) -> FiltExpr:
    total = fnum(0.0)
    for f in filts:
        total = total + f
    return total
