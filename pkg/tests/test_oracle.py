import ast
import math
from pathlib import Path

import pytest
from scipy.special import airy

from modules.engine.errors import InputError, OracleBudgetError
from modules.engine.evaluator import Endpoint
from modules.oracle import reference
from modules.oracle.reference import adaptive_finite, airy_series, reference_infinite
from tests.conftest import AI_ZERO, AIRY_ENDS, airy_amplitude, airy_phase


def test_straight_segment():
    result = adaptive_finite(None, [1, 0], 1.0, -1.0, 1.0)
    assert result.value == pytest.approx(2 * math.sin(1.0), abs=1e-13)
    assert result.panels >= 1


def test_empty_segment():
    result = adaptive_finite(None, [1, 0], 5.0, 0.3j, 0.3j)
    assert result.value == 0j and result.panels == 0


def test_oscillatory_segment():
    # integral of cos(z) e^{i 20 z} over [0, 1] in closed form
    omega = 20.0

    def antiderivative(z):
        return 0.5 * ((math.e ** (1j * (omega + 1) * z)) / (1j * (omega + 1))
                      + (math.e ** (1j * (omega - 1) * z)) / (1j * (omega - 1)))

    exact = antiderivative(1.0) - antiderivative(0.0)
    value = adaptive_finite(lambda z: (math.e ** (1j * z) + math.e ** (-1j * z)) / 2, [1, 0], omega, 0.0, 1.0).value
    assert value == pytest.approx(exact, abs=1e-13)


def test_budget_is_enforced():
    with pytest.raises(OracleBudgetError):
        adaptive_finite(None, [1, 0], 1e7, -1.0, 1.0)


def test_airy_series_at_zero():
    assert airy_series(0.0).real == pytest.approx(3 ** (-2 / 3) / math.gamma(2 / 3), rel=1e-14)
    assert airy_series(0.0).real == pytest.approx(AI_ZERO, rel=1e-14)


@pytest.mark.parametrize("x", [-5.0, -2.5, -1.0, 0.5, 1.0, 3.0])
def test_airy_series_matches_scipy(x):
    assert airy_series(x).real == pytest.approx(airy(x)[0], rel=1e-12, abs=1e-15)


def test_airy_series_range():
    with pytest.raises(InputError):
        airy_series(9.0)
    with pytest.raises(InputError):
        airy_series(float("nan"))


@pytest.mark.parametrize("x,tol", [(0.0, 1e-10), (1.0, 1e-10), (-5.0, 1e-9)])
def test_infinite_contour_reproduces_airy(x, tol):
    result = reference_infinite(
        airy_amplitude(), airy_phase(x), 1.0, Endpoint.infinite(AIRY_ENDS[0]), Endpoint.infinite(AIRY_ENDS[1])
    )
    assert abs(result.value - airy_series(x)) <= tol


def test_single_infinite_endpoint():
    # integral of e^{iz} from 0 to i infinity, direction snapped onto pi/2
    forward = reference_infinite(None, [1, 0], 1.0, 0.0, Endpoint.infinite(math.pi / 2 + 0.3))
    assert forward.value == pytest.approx(1j, abs=1e-12)
    backward = reference_infinite(None, [1, 0], 1.0, Endpoint.infinite(math.pi / 2), 0.0)
    assert backward.value == pytest.approx(-1j, abs=1e-12)


def test_same_valley_gives_zero():
    result = reference_infinite(None, airy_phase(0.0), 1.0, Endpoint.infinite(1.0), Endpoint.infinite(1.1))
    assert result.value == 0j


def test_oracle_depends_only_on_engine_errors():
    tree = ast.parse(Path(reference.__file__).read_text(encoding="utf-8"))
    internal = {
        node.module
        for node in ast.walk(tree)
        if isinstance(node, ast.ImportFrom) and node.module and node.module.startswith("modules")
    }
    plain = [
        alias.name
        for node in ast.walk(tree)
        if isinstance(node, ast.Import)
        for alias in node.names
        if alias.name.startswith("modules")
    ]
    assert internal == {"modules.engine.errors"}
    assert plain == []
