"""Exception hierarchy shared by the library, service and CLI.

The four concrete classes partition error conditions the same way the CLI
partitions exit codes (curve=2, point=3, hypothesis=4, precision=5).
"""


class TwistHeightsError(Exception):
    """Base class for all library errors."""

    error_class = "input"


class CurveError(TwistHeightsError):
    """Invalid curve: singular, wrong form, or malformed coefficients."""

    error_class = "curve"


class PointError(TwistHeightsError):
    """Invalid point: off the curve, at infinity where affine is required."""

    error_class = "point"


class HypothesisError(TwistHeightsError):
    """A mathematical hypothesis or algorithm precondition is violated.

    Examples: discriminant not 6th-power-free, twisting integer not
    square-free, model non-minimal, series precondition broken.
    """

    error_class = "hypothesis"


class PrecisionError(TwistHeightsError):
    """Iteration or series failed to reach the working precision."""

    error_class = "precision"
