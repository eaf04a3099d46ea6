"""
Reference Oracle Module.

Independent brute-force integrators used to check the engine in tests.
"""

from .reference import OracleResult, adaptive_finite, airy_series, reference_infinite

__all__ = [
    'OracleResult',
    'adaptive_finite',
    'airy_series',
    'reference_infinite',
]
