"""
Exception hierarchy for the evaluation engine.

InputError marks a request that can never succeed as given (bad literal,
bad parameter, unknown template). NumericalFailure marks a request that is
well formed but could not be carried through one of the pipeline steps;
the step name is kept on the exception so callers can report where it broke.
"""

from typing import Optional


class NSDError(Exception):
    """Base class for all nsdquad errors."""


class InputError(NSDError, ValueError):
    """Invalid request, parameter or literal."""


class NumericalFailure(NSDError, ArithmeticError):
    """A pipeline step failed numerically."""

    default_step = "engine"

    def __init__(self, message: str, step: Optional[str] = None):
        super().__init__(message)
        self.step = step or self.default_step

    def __str__(self) -> str:
        return f"[{self.step}] {super().__str__()}"


class RootFindingError(NumericalFailure):
    default_step = "roots"


class BallRadiusError(NumericalFailure):
    default_step = "balls"


class ExitSearchError(NumericalFailure):
    default_step = "exits"


class ContourTracingError(NumericalFailure):
    default_step = "trace"


class DeformationNotFoundError(NumericalFailure):
    default_step = "graph"

    def __init__(self, message: str = "deformation not found", step: Optional[str] = None):
        super().__init__(message, step)


class QuadratureFailure(NumericalFailure):
    default_step = "quadrature"


class OracleBudgetError(NumericalFailure):
    default_step = "oracle"

    def __init__(self, message: str = "oracle out of budget", step: Optional[str] = None):
        super().__init__(message, step)
