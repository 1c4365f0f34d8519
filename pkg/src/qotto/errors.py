"""Exception hierarchy.

``InvalidParameters`` maps to CLI exit code 2, ``NumericalError`` to exit code 3.
"""


class QottoError(Exception):
    """Base class for all package errors."""


class InvalidParameters(QottoError, ValueError):
    """A physical parameter violates its invariant."""


class NoBoundStates(InvalidParameters):
    pass


class IndexOutOfSpectrum(InvalidParameters, IndexError):
    pass


class NotEngineRegime(QottoError):
    pass


class NotRefrigeratorRegime(QottoError):
    pass


class MetricUndefinedEverywhere(QottoError):
    pass


class NumericalError(QottoError, ArithmeticError):
    """Base for failures of the numerics rather than of the inputs."""


class DegenerateHypergeometric(NumericalError):
    pass


class NonConvergentTail(NumericalError):
    """The wavefunction has not decayed at the edge of the integration grid."""


class TruncationTooLarge(NumericalError):
    """Hot and cold level sets differ by more probability mass than allowed."""

    def __init__(self, loss, bound):
        super().__init__(f"truncation loss {loss:.3g} exceeds bound {bound:.3g}")
        self.loss = loss
        self.bound = bound


class NumericalBreakdown(NumericalError):
    """A closed-form denominator underflowed."""
