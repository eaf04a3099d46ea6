"""
Amplitude functions f(z).

Amplitudes cross process boundaries in grid runs, so they are plain picklable
objects rather than lambdas.
"""

from typing import Callable, Optional, Sequence, Union

import numpy as np

from modules.engine.errors import InputError

BUILTIN_AMPLITUDES = ("one", "sin", "cos", "exp")

_FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
}


class Amplitude:
    """Entire amplitude: a named builtin or a polynomial in descending coefficients."""

    __slots__ = ("kind", "coeffs")

    def __init__(self, kind: str = "one", coeffs: Optional[Sequence[complex]] = None):
        if kind not in BUILTIN_AMPLITUDES and kind != "poly":
            raise InputError(f"unknown amplitude {kind!r}; expected one of {BUILTIN_AMPLITUDES} or a polynomial")
        if kind == "poly":
            if not coeffs:
                raise InputError("polynomial amplitude needs at least one coefficient")
            self.coeffs = tuple(complex(c) for c in coeffs)
        else:
            self.coeffs = ()
        self.kind = kind

    @classmethod
    def one(cls) -> "Amplitude":
        return cls("one")

    @classmethod
    def polynomial(cls, descending: Sequence[complex]) -> "Amplitude":
        return cls("poly", descending)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "one":
            return np.ones_like(z)
        if self.kind == "poly":
            acc = np.zeros_like(z)
            for c in self.coeffs:
                acc = acc * z + c
            return acc
        return _FUNCTIONS[self.kind](z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Amplitude):
            return NotImplemented
        return self.kind == other.kind and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.kind, self.coeffs))

    def __repr__(self) -> str:
        if self.kind == "poly":
            return f"Amplitude.polynomial({list(self.coeffs)})"
        return f"Amplitude({self.kind!r})"

    def __reduce__(self):
        return (Amplitude, (self.kind, list(self.coeffs) or None))


AmplitudeLike = Union[Amplitude, Callable, None]


def as_amplitude(f: AmplitudeLike) -> Callable:
    """None means f = 1; callables are used as given."""
    if f is None:
        return Amplitude.one()
    if not callable(f):
        raise InputError(f"amplitude must be callable, got {type(f).__name__}")
    return f


def apply_amplitude(f: Callable, z: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of points, broadcasting scalar results."""
    z = np.asarray(z, dtype=complex)
    try:
        values = np.asarray(f(z), dtype=complex)
    except TypeError:
        values = np.array([complex(f(complex(point))) for point in z.ravel()]).reshape(z.shape)
    return np.broadcast_to(values, z.shape).astype(complex, copy=False)
