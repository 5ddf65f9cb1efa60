"""Exception types shared across the package."""


class StringcapError(Exception):
    """Base class for all package errors."""


class ChartMismatchError(StringcapError):
    """A point or vector lives in a chart the domain does not know about."""


class InvalidInputError(StringcapError):
    """NaN or otherwise malformed numeric input."""


class RankDeficientError(StringcapError):
    """Embedding Jacobian is rank deficient at the evaluation point."""


class AscentError(StringcapError):
    """Projected ascent did not converge; carries the best value found."""

    def __init__(self, message: str, best_value: float, residual: float):
        super().__init__(message)
        self.best_value = best_value
        self.residual = residual


class BasepointMismatchError(StringcapError):
    """Loop concatenation requires a shared basepoint."""


class InfiniteLengthError(StringcapError):
    """The support function is infinite along the sampled loop."""

    def __init__(self, message: str, t: float, params=None):
        super().__init__(message)
        self.t = t
        self.params = params


class LoopValidationError(StringcapError):
    """A loop violates closure or derivative-consistency requirements."""


class ScenarioParameterError(StringcapError):
    """Out-of-range or inconsistent scenario parameters."""


class MissingAxiomError(StringcapError):
    """A certificate derivation needs a rewrite axiom the scenario lacks."""

    def __init__(self, rule_id: str):
        super().__init__(f"scenario does not register the rewrite axiom {rule_id!r}")
        self.rule_id = rule_id


class IncompatibleBindingError(StringcapError):
    """Star product arguments have no declared transverse intersection."""
