"""Exception hierarchy shared by every module.

Numerical failures (no bracket, no bound state, ...) derive from
``NumericalFailure``; the CLI maps them and ``IndefiniteConvexity`` (no bound
exists) to exit status 1. Other bad input derives from ``ValueError`` and
maps to exit status 2.
"""


class EnvelopeError(Exception):
    """Base class for all package errors."""


class NumericalFailure(EnvelopeError, ArithmeticError):
    pass


class BracketInvalid(EnvelopeError, ValueError):
    pass


class NoConvergence(NumericalFailure):
    pass


class NoBracketFound(NumericalFailure):
    """Bracket expansion ran past its span: objective monotone or unbounded."""


class NoSignChange(EnvelopeError, ValueError):
    pass


class NoRoot(NumericalFailure):
    pass


class DomainViolation(EnvelopeError, ValueError):
    pass


class DegenerateBase(EnvelopeError, ValueError):
    pass


class NonMonotone(EnvelopeError, ValueError):
    pass


class IndefiniteConvexity(EnvelopeError, ValueError):
    pass


class UnsupportedExponent(EnvelopeError, ValueError):
    pass


class NonAttractive(EnvelopeError, ValueError):
    pass


class UnboundedInner(NumericalFailure):
    """The inner inf/sup of a local-energy profile diverges."""


class TrialZero(EnvelopeError, ValueError):
    pass


class NoBoundState(NumericalFailure):
    pass


class TruncationTooSmall(NumericalFailure):
    pass


class ConfigError(EnvelopeError, ValueError):
    pass
