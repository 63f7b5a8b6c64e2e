"""Exception types shared across the toolkit.

Axiom failures carry a witness (the offending element or triple) so callers
can report exactly what broke instead of a bare boolean.
"""


class QuandleKitError(Exception):
    """Base class for all toolkit errors."""


class SizeExceeded(QuandleKitError):
    """A computation would exceed its hard size guard."""


class GuardExceeded(SizeExceeded):
    pass


class PointOutOfRange(QuandleKitError, IndexError):
    pass


class AxiomError(QuandleKitError, ValueError):
    """A quandle axiom failed; ``witness`` names the offending elements."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotLeftQuasigroup(AxiomError):
    pass


class NotIdempotent(AxiomError):
    pass


class NotLeftDistributive(AxiomError):
    pass


class UnsupportedParameters(QuandleKitError, ValueError):
    pass


class Singular(QuandleKitError, ValueError):
    pass


class NotAutomorphism(QuandleKitError, ValueError):
    pass


class NotInvariant(QuandleKitError, ValueError):
    pass


class NotSubgroup(QuandleKitError, ValueError):
    pass


class NotFixed(QuandleKitError, ValueError):
    pass


class NotClosed(QuandleKitError, ValueError):
    pass


class ReduciblePolynomial(QuandleKitError, ValueError):
    pass


class TNotInvertible(QuandleKitError, ValueError):
    pass


class BlockNotSubquandle(QuandleKitError, ValueError):
    pass


class NotNormalOrNotInDis(QuandleKitError, ValueError):
    pass


class Unsupported(QuandleKitError, ValueError):
    pass


class NotApplicable(QuandleKitError, ValueError):
    pass


class NotLatin(QuandleKitError, ValueError):
    pass


class GeneratorCondition(QuandleKitError, ValueError):
    pass


class CompatibilityViolation(QuandleKitError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedPair(QuandleKitError, ValueError):
    pass


class Infeasible(QuandleKitError, ValueError):
    """A search instance is impossible for a stated arithmetic reason."""

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason or message


class TheoremAssertionError(QuandleKitError, AssertionError):
    """An internal structure theorem cross-check failed.

    This always signals either a bug or a genuine discrepancy with the
    expected structure theory; it is never swallowed.
    """
