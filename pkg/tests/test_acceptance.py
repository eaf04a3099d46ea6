"""
End-to-end accuracy and cost checks on the classical test integrals:
Airy, digits of pi, z^9 monomial, coalescence, Pearcey and swallowtail.
"""

import statistics
import time

import numpy as np
import pytest
from scipy.special import airy

from modules.engine.amplitude import Amplitude
from modules.engine.evaluator import Endpoint, EvaluationRequest, evaluate
from modules.engine.grid_processor import GridProcessor
from modules.engine.parameters import Parameters
from modules.engine.polynomial import ComplexPolynomial
from modules.engine.processor_utils import GridAxis, build_bench_jobs, build_grid_jobs
from modules.engine.templates import coalescence_template, load_phase_template
from modules.oracle.reference import adaptive_finite, airy_series, reference_infinite
from tests.conftest import AIRY_ENDS, PI_DIGITS_F, PI_DIGITS_G, airy_amplitude, airy_phase

pytestmark = pytest.mark.acceptance

MONOMIAL = ComplexPolynomial.from_descending([1, 0, 0, 0, 0, 0, 0, 0, 0, 0])
FINITE_ENDS = (Endpoint.finite(-1.0), Endpoint.finite(1.0))


def _engine(g, omega, n, f=None, ends=FINITE_ENDS, keep_nodes=False):
    request = EvaluationRequest(ends[0], ends[1], g, omega, Parameters(n_points=n), f)
    return evaluate(request, keep_nodes=keep_nodes)


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


def test_airy_is_uniformly_accurate():
    ends = (Endpoint.infinite(AIRY_ENDS[0]), Endpoint.infinite(AIRY_ENDS[1]))
    worst = 0.0
    started = time.perf_counter()
    for x in np.linspace(-10.0, 4.0, 141):
        value = _engine(airy_phase(x), 1.0, 30, airy_amplitude(), ends).value
        exact = airy_series(x) if abs(x) <= 8.0 else complex(airy(x)[0])
        worst = max(worst, abs(value - exact))
    assert worst <= 1e-11
    assert time.perf_counter() - started < 10.0


def test_airy_beyond_the_series_range_matches_the_ray_oracle():
    ends = (Endpoint.infinite(AIRY_ENDS[0]), Endpoint.infinite(AIRY_ENDS[1]))
    for x in (-9.0, -10.0):
        value = _engine(airy_phase(x), 1.0, 30, airy_amplitude(), ends).value
        reference = reference_infinite(airy_amplitude(), airy_phase(x), 1.0, *ends).value
        assert abs(value - reference) <= 1e-9


@pytest.mark.parametrize("omega", [0.01, 1.0, 5.0, 50.0])
def test_digits_of_pi_matches_the_oracle(omega):
    g = ComplexPolynomial.from_descending(PI_DIGITS_G)
    f = Amplitude.polynomial(PI_DIGITS_F)
    value = _engine(g, omega, 40, f).value
    reference = adaptive_finite(f, g, omega, -1.0, 1.0, tol=1e-12).value
    assert _relative(value, reference) <= 1e-8


@pytest.mark.parametrize("omega", [1e3, 1e4])
def test_monomial_with_order_eight_stationary_point(omega):
    f = Amplitude("sin")
    value = _engine(MONOMIAL, omega, 50, f).value
    reference = adaptive_finite(f, MONOMIAL, omega, -1.0, 1.0, tol=1e-12).value
    assert _relative(value, reference) <= 1e-10


@pytest.mark.slow
def test_monomial_at_high_frequency_is_self_consistent():
    f = Amplitude("sin")
    coarse = _engine(MONOMIAL, 1e5, 50, f)
    fine = _engine(MONOMIAL, 1e5, 200, f)
    assert _relative(coarse.value, fine.value) <= 1e-10
    # both endpoint contours and the ball around the origin contribute
    assert coarse.contributing >= 3
    assert any(abs(ball.center) <= ball.radius for ball in coarse.region.balls)


@pytest.mark.parametrize("r", [1.0, 0.5, 0.35, 1e-2, 1e-4, 0.0])
def test_coalescing_stationary_points(r):
    template = coalescence_template(6)
    g = template.phase(r=r)
    coarse = _engine(g, template.omega, 50).value
    fine = _engine(g, template.omega, 200).value
    assert _relative(coarse, fine) <= 1e-6


@pytest.mark.slow
def test_cost_does_not_grow_with_frequency():
    g = ComplexPolynomial.from_descending(PI_DIGITS_G)
    f = Amplitude.polynomial(PI_DIGITS_F)
    omegas = [10.0, 1e2, 1e3, 1e4]
    jobs = build_bench_jobs(*FINITE_ENDS, g, f, omegas, [40], 5, lambda n: Parameters(n_points=n))
    rows = GridProcessor(max_workers=1).bench(jobs)
    seconds = [row[4] for row in rows]
    n_total = {row[0]: row[3] for row in rows}
    assert seconds[-1] <= 2.0 * statistics.median(seconds)
    assert n_total[1e4] <= n_total[10.0]


CONVERGENCE_CASES = {
    "digits_of_pi": lambda: (
        ComplexPolynomial.from_descending(PI_DIGITS_G), 50.0, Amplitude.polynomial(PI_DIGITS_F), FINITE_ENDS,
    ),
    "monomial": lambda: (MONOMIAL, 1e3, Amplitude("sin"), FINITE_ENDS),
    "coalescence": lambda: (coalescence_template(6).phase(r=0.35), 1000.0, None, FINITE_ENDS),
    "airy": lambda: (
        airy_phase(-1.0), 1.0, airy_amplitude(),
        (Endpoint.infinite(AIRY_ENDS[0]), Endpoint.infinite(AIRY_ENDS[1])),
    ),
}


def _case_value(name, n, type2_rule="laguerre"):
    g, omega, f, (a, b) = CONVERGENCE_CASES[name]()
    params = Parameters(n_points=n, type2_rule=type2_rule)
    return evaluate(EvaluationRequest(a, b, g, omega, params, f)).value


@pytest.mark.parametrize("name", sorted(CONVERGENCE_CASES))
def test_error_decreases_with_n(name):
    reference = _case_value(name, 200)
    floor = 1e-14 * max(1.0, abs(reference))
    errors = [abs(_case_value(name, n) - reference) for n in (5, 10, 20, 40)]
    for coarse, fine in zip(errors, errors[1:]):
        assert fine < coarse or fine <= floor, errors
    assert errors[-1] <= 1e-12 * max(1.0, abs(reference))


@pytest.mark.parametrize("name", sorted(CONVERGENCE_CASES))
def test_truncated_legendre_agrees_with_laguerre(name):
    laguerre = _case_value(name, 40, "laguerre")
    legendre = _case_value(name, 40, "legendre")
    assert abs(laguerre - legendre) <= 1e-10 * max(1.0, abs(laguerre))


def test_antisymmetry_on_random_contours():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        degree = int(rng.integers(2, 7))
        g = ComplexPolynomial(rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1))
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        omega = float(10 ** rng.uniform(0, 2))
        params = Parameters(n_points=20)
        forward = evaluate(EvaluationRequest(Endpoint.finite(a), Endpoint.finite(b), g, omega, params)).value
        backward = evaluate(EvaluationRequest(Endpoint.finite(b), Endpoint.finite(a), g, omega, params)).value
        assert abs(forward + backward) <= 1e-12 * abs(forward)


def _steepest_descent_cases():
    ends = (Endpoint.infinite(AIRY_ENDS[0]), Endpoint.infinite(AIRY_ENDS[1]))
    yield _engine(airy_phase(-3.0), 1.0, 30, airy_amplitude(), ends, keep_nodes=True)
    yield _engine(ComplexPolynomial.from_descending(PI_DIGITS_G), 50.0, 40,
                  Amplitude.polynomial(PI_DIGITS_F), keep_nodes=True)
    yield _engine(MONOMIAL, 1e4, 50, Amplitude("sin"), keep_nodes=True)
    yield _engine(coalescence_template(6).phase(r=0.35), 1000.0, 50, keep_nodes=True)


def test_real_part_of_phase_is_constant_along_contour_nodes():
    for result in _steepest_descent_cases():
        delta_fine = result.paths[0].setup.delta_fine if result.paths else 1e-13
        for record in result.contributions:
            if record.skipped or record.contour_type == 1:
                continue
            path = record.leg.edge.path
            values = result.ctx.g(record.nodes)
            drift = np.abs(values.real - path.g_origin.real)
            assert np.all(drift <= 10 * delta_fine * np.maximum(1.0, np.abs(values)))


def _cuspoid_points(name, points):
    template = load_phase_template(name)
    for x, y in points:
        g = template.phase(x=x, y=y)
        a, b = template.endpoint_pair(g)
        value = _engine(g, template.omega, 50, ends=(a, b)).value
        reference = reference_infinite(None, g, template.omega, a, b, tol=1e-8).value
        assert abs(value - reference) <= 1e-6, (x, y)


def test_pearcey_spot_checks():
    _cuspoid_points("pearcey", [(-2.0, -1.0), (0.0, 0.0), (1.5, -2.5), (-0.5, 2.0), (2.5, 1.0)])


def test_swallowtail_spot_checks():
    _cuspoid_points("swallowtail", [(-1.0, -1.0), (0.0, 0.0), (1.0, 0.5), (2.0, -2.0), (-2.0, 2.0)])


@pytest.mark.slow
def test_full_pearcey_grid_is_fast():
    template = load_phase_template("pearcey")
    jobs = build_grid_jobs(template, GridAxis(-8.0, 8.0, 100), GridAxis(-8.0, 8.0, 100), Parameters(n_points=50))
    started = time.perf_counter()
    results = GridProcessor().run(jobs)
    elapsed = time.perf_counter() - started
    assert all(r.ok for r in results)
    assert elapsed < 120.0
