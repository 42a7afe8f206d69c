"""Exception types shared across the package."""


class SfgError(Exception):
    """Base class for all errors raised by this package."""


class DegreeCapError(SfgError):
    """A polynomial operation exceeded the supported degree cap."""


class PolyFormatError(SfgError):
    """Malformed polynomial / rational-function text."""


class GraphFormatError(SfgError):
    """Malformed or inconsistent graph file content."""


class GraphStateError(SfgError):
    """A transform was applied to a graph in the wrong state."""


class LoopLimitError(SfgError):
    """Elementary-circuit enumeration exceeded the configured cap."""


class NoForwardPath(SfgError):
    """The closed graph has no term in the distinguished 1/G marker.

    There is no input-to-output path; the transfer function is identically
    zero. ``zero_transfer`` is set so callers may fall back to G = 0.
    """

    def __init__(self, message: str = "no forward path from input to output"):
        super().__init__(message)
        self.zero_transfer = True


class DegenerateDenominator(SfgError):
    """The symbol-free part of the closed-graph sum vanished entirely."""


class SingularAtSample(SfgError):
    """The node-equation system is numerically singular at the sample point."""


class SingularQuotient(SfgError):
    """A continued-fraction division hit a zero leading term."""


class EvaluationAtPole(SfgError):
    """Frequency-response evaluation landed on a pole."""
