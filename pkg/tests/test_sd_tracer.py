import cmath
import logging
import math

import numpy as np
import pytest

from modules.engine.errors import ContourTracingError, InputError, NSDError
from modules.engine.parameters import Parameters
from modules.engine.phase_geometry import (
    NonOscBall,
    NonOscRegion,
    PhaseContext,
    amalgamate,
    exits,
    no_return_threshold,
    stationary_balls,
    stationary_points,
)
from modules.engine.polynomial import ComplexPolynomial
from modules.engine.sd_tracer import (
    Entrance,
    TracerSetup,
    Valley,
    refine_point,
    refine_points,
    trace,
)

SQUARE = ComplexPolynomial.from_descending([1, 0, 0])


def _setup(g, omega=1.0, region=None, **kwargs):
    ctx = PhaseContext.build(g, omega)
    points = stationary_points(ctx)
    if region is None:
        region = NonOscRegion(tuple(stationary_balls(points, ctx, 2 * math.pi, 16)))
    return TracerSetup(ctx, region, no_return_threshold(ctx), points, **kwargs)


def test_trace_from_real_axis_reaches_first_valley():
    path = trace(3.0, _setup(SQUARE))
    assert isinstance(path.terminal, Valley)
    assert path.terminal.angle == pytest.approx(math.pi / 4)
    assert path.ends_in_valley
    assert path.mesh[0] == 0.0 and path.points[0] == 3.0
    assert all(b > a for a, b in zip(path.mesh, path.mesh[1:]))


def test_traced_points_follow_the_exact_contour():
    # g(h(p)) = 9 + ip  =>  h(p) = sqrt(9 + ip)
    setup = _setup(SQUARE)
    path = trace(3.0, setup)
    for p, h in zip(path.mesh, path.points):
        exact = cmath.sqrt(9 + 1j * p)
        assert abs(h - exact) <= 10 * setup.delta_coarse * setup.distance(h)


def test_refined_points_keep_real_part_of_phase():
    setup = _setup(SQUARE)
    path = trace(3.0, setup)
    ps = np.linspace(0.0, 5 * path.p_max, 25)
    hs = refine_points(path, ps)
    g0 = SQUARE(3.0)
    for p, h in zip(ps, hs):
        value = SQUARE(complex(h))
        assert abs(value.real - g0.real) <= 10 * setup.delta_fine * max(1.0, abs(value))
        assert value.imag == pytest.approx(p, abs=10 * setup.delta_fine * max(1.0, abs(value)))


def test_refine_point_extends_valley_contours():
    path = trace(3.0, _setup(SQUARE))
    p_max = path.p_max
    h = refine_point(path, 40 * p_max)
    assert path.p_max >= 40 * p_max
    assert h == pytest.approx(cmath.sqrt(9 + 40j * p_max), rel=1e-12)


def test_refine_point_edge_values():
    path = trace(3.0, _setup(SQUARE))
    assert refine_point(path, 0.0) == 3.0
    with pytest.raises(InputError):
        refine_point(path, -1.0)


def test_negative_parameter_is_a_package_error():
    path = trace(3.0, _setup(SQUARE))
    with pytest.raises(NSDError):
        refine_points(path, [0.5, -0.5])


def test_trace_ends_on_a_ball_in_its_way():
    # the first step (dp = 1.8) lands near sqrt(9 + 1.8i)
    centre = cmath.sqrt(9 + 1.8j)
    region = NonOscRegion((NonOscBall(centre, 0.2),))
    setup = _setup(SQUARE, region=region)
    path = trace(3.0, setup)
    assert isinstance(path.terminal, Entrance)
    assert path.terminal.ball == 0
    point = path.terminal.point
    assert abs(point - centre) <= 0.2 * (1 + 1e-12)
    value = SQUARE(point)
    assert abs(value.real - 9.0) <= 10 * setup.delta_fine * abs(value)
    assert value.imag == pytest.approx(path.p_max, rel=1e-12)


def test_refine_point_clamps_at_the_entrance():
    region = NonOscRegion((NonOscBall(cmath.sqrt(9 + 1.8j), 0.2),))
    path = trace(3.0, _setup(SQUARE, region=region))
    end = refine_point(path, path.p_max)
    assert refine_point(path, 3 * path.p_max) == pytest.approx(end, abs=1e-14)


def test_clamping_is_logged(caplog, monkeypatch):
    monkeypatch.setattr(logging.getLogger("nsdquad"), "propagate", True)
    caplog.set_level(logging.DEBUG, logger="nsdquad")
    region = NonOscRegion((NonOscBall(cmath.sqrt(9 + 1.8j), 0.2),))
    path = trace(3.0, _setup(SQUARE, region=region))
    refine_point(path, 2 * path.p_max)
    assert "clamping" in caplog.text
    caplog.clear()
    refine_point(path, 0.5 * path.p_max)
    assert "clamping" not in caplog.text


def test_trace_from_a_stationary_point_fails():
    with pytest.raises(ContourTracingError):
        trace(0.0, _setup(SQUARE, region=NonOscRegion(())))


def test_step_cap_is_enforced():
    with pytest.raises(ContourTracingError):
        trace(3.0, _setup(ComplexPolynomial.from_descending([1, 100, 0]), max_steps=1))


def test_from_parameters_copies_tolerances():
    ctx = PhaseContext.build(SQUARE, 2.0)
    params = Parameters(n_points=10, delta_ode=0.05, delta_coarse=1e-3, delta_fine=1e-12, max_trace_steps=7)
    setup = TracerSetup.from_parameters(ctx, NonOscRegion(()), no_return_threshold(ctx), [0.0], params)
    assert (setup.delta_ode, setup.delta_coarse, setup.delta_fine, setup.max_steps) == (0.05, 1e-3, 1e-12, 7)
    assert setup.distance(3 + 4j) == pytest.approx(5.0)


def test_contours_from_exits_terminate_for_a_sextic():
    g = ComplexPolynomial.from_descending([1, 0, -2j, 0.5, 0, 1, 0])
    ctx = PhaseContext.build(g, 10.0)
    points = stationary_points(ctx)
    params = Parameters(n_points=20)
    region = amalgamate(stationary_balls(points, ctx, params.c_ball, params.n_ball), params.delta_ball_for(6))
    setup = TracerSetup.from_parameters(ctx, region, no_return_threshold(ctx), points, params)
    for exit_point in exits(region, ctx):
        path = trace(exit_point.location, setup)
        assert path.p_max > 0
        if isinstance(path.terminal, Valley):
            assert path.terminal.angle in ctx.valleys
        else:
            assert 0 <= path.terminal.ball < len(region.balls)
