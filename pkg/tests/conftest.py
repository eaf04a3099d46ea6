import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from modules.engine.amplitude import Amplitude
from modules.engine.parameters import Parameters
from modules.engine.polynomial import ComplexPolynomial

AI_ZERO = 0.3550280538878172
AIRY_NORMALISATION = -1j / (2.0 * math.pi)
AIRY_ENDS = (-math.pi / 3.0, math.pi / 3.0)
PI_DIGITS_F = [2, 7, 1, 8, 2]
PI_DIGITS_G = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3]


def airy_phase(x: float) -> ComplexPolynomial:
    """-i (z^3/3 - x z); with amplitude 1/(2 pi i) the integral from inf(-pi/3) to inf(pi/3) is Ai(x)."""
    return ComplexPolynomial.from_descending([-1j / 3.0, 0.0, 1j * x, 0.0])


def airy_amplitude() -> Amplitude:
    return Amplitude.polynomial([AIRY_NORMALISATION])


@pytest.fixture
def digits_phase() -> ComplexPolynomial:
    return ComplexPolynomial.from_descending(PI_DIGITS_G)


@pytest.fixture
def digits_amplitude() -> Amplitude:
    return Amplitude.polynomial(PI_DIGITS_F)


@pytest.fixture
def params() -> Parameters:
    return Parameters(n_points=30)
