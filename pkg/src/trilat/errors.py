"""Exception hierarchy shared by all trilat modules."""


class TrilatError(Exception):
    """Base class for every error raised by the package."""


class DegenerateTriangle(TrilatError, ValueError):
    pass


class NegativeLength(TrilatError, ValueError):
    pass


class AxisOrder(TrilatError, ValueError):
    pass


class EmptyInput(TrilatError, ValueError):
    pass


class NotConvex(TrilatError, ValueError):
    pass


class NeedleTooLong(TrilatError, ValueError):
    pass


class ObtuseLatticeUnsupported(TrilatError, ValueError):
    pass


class BodyTooLarge(TrilatError):
    """The body does not fit into a lattice triangle for every orientation.

    ``margin`` is ``c - max c*(phi)`` and is negative.
    """

    def __init__(self, margin, message=None):
        self.margin = margin
        super().__init__(message or f"body violates the fit condition (margin {margin:.6g} < 0)")


class QuadratureFailure(TrilatError, ArithmeticError):
    pass


class NonConvergence(TrilatError, RuntimeError):
    """Support-map intersection search did not terminate; indicates a geometry bug."""


class SimulationError(TrilatError, RuntimeError):
    pass
