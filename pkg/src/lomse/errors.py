"""Exception hierarchy.

Errors split into two families so callers (and the CLI exit codes) can tell
bad input apart from numerical trouble.
"""


class LomseError(Exception):
    """Base class for every error raised by this package."""


class InadmissibleTriple(LomseError, ValueError):
    """(n, p, k) violates parity or is not in a Hopf family."""


class DegenerateAngle(LomseError, ValueError):
    """p * lambda^2 <= n, so the cone angle is not acute."""


class DomainError(LomseError, ValueError):
    """A geometric quantity was requested outside the open half plane r > 0."""


class NotAGraph(LomseError, ValueError):
    """A curve is not a graph rho(r): r is not strictly monotone."""


class WrongType(LomseError, ValueError):
    """The operation is only defined for the other cone type."""


class NumericalError(LomseError, RuntimeError):
    """Base class for failures of a numerical procedure."""


class StepSizeUnderflow(NumericalError):
    pass


class Divergence(NumericalError):
    pass


class NotOscillating(NumericalError):
    """Fewer loc crossings than requested were found on the integration window."""


class MonotonicityViolation(NumericalError):
    """A foliation leaf lost strict monotonicity of its slope on the sampled grid."""


class InternalInconsistency(LomseError, AssertionError):
    """Two independent routes to the same fact disagree. Always a bug."""
