"""
Numerical Engine Module.

Polynomial phase utilities, non-oscillatory balls and exits, steepest
descent tracing, the deformation graph, quadrature and the evaluation
pipeline that ties them together.
"""

from .amplitude import Amplitude
from .errors import InputError, NSDError, NumericalFailure
from .evaluator import Endpoint, EvaluationRequest, EvaluationResult, evaluate, integrate
from .parameters import Parameters
from .polynomial import ComplexPolynomial

__all__ = [
    'Amplitude',
    'ComplexPolynomial',
    'Endpoint',
    'EvaluationRequest',
    'EvaluationResult',
    'InputError',
    'NSDError',
    'NumericalFailure',
    'Parameters',
    'evaluate',
    'integrate',
]
