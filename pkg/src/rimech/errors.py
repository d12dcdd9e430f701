"""Exception hierarchy shared by every module of the package."""


class RIMechError(Exception):
    """Base class for all errors raised by :mod:`rimech`."""


class InvalidDimensionError(RIMechError, ValueError):
    pass


class DerivativeFailureError(RIMechError, ArithmeticError):
    pass


class DegenerateProbeError(RIMechError, ValueError):
    pass


class NotApplicableError(RIMechError):
    """Raised when the precondition of an equivalence theorem is not met.

    This is a finding about the input trajectory, not a fault; the report that
    would have been returned is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnderdeterminedSystemError(RIMechError):
    pass


class IntegrationDivergedError(RIMechError, FloatingPointError):
    pass


class GaugeDegenerateError(RIMechError, ValueError):
    pass


class SpaceLikeSegmentError(RIMechError, ValueError):
    pass


class ConstraintViolationError(RIMechError):
    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class NotAnIntegralError(RIMechError):
    pass


class SuperluminalStateError(RIMechError, ValueError):
    pass


class OffShellStateError(RIMechError, ValueError):
    pass


class WindowOutOfRangeError(RIMechError, ValueError):
    pass


class KindMismatchError(RIMechError, ValueError):
    pass


class ResolutionError(RIMechError, ValueError):
    """Grid too coarse to resolve the phase of a wave function."""


class DivisionDegenerateError(RIMechError, ZeroDivisionError):
    pass


class ScenarioError(RIMechError):
    pass


class ScenarioParseError(ScenarioError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ScenarioSchemaError(ScenarioError):
    """Raised with every schema violation found in one validation pass."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
