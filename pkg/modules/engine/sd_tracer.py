"""
Steepest-descent contour tracing.

A contour from eta is parametrised by g(h(p)) = g(eta) + i p. Tracing uses
forward Euler on h' = i / g'(h) with a Newton corrector at coarse tolerance;
quadrature later re-solves the same equation at fine tolerance at whatever
p values it needs.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from modules.engine.errors import ContourTracingError, InputError
from modules.engine.phase_geometry import (
    NonOscRegion,
    NoReturnData,
    PhaseContext,
    no_return_valley,
)
from modules.engine.polynomial import evaluate
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Entrance:
    ball: int
    point: complex


@dataclass(frozen=True)
class Valley:
    angle: float


Terminal = Union[Entrance, Valley]


@dataclass
class TracerSetup:
    """Everything a trace needs besides its starting point."""

    ctx: PhaseContext
    region: NonOscRegion
    no_return: NoReturnData
    stationary_points: Sequence[complex]
    delta_ode: float = 0.1
    delta_coarse: float = 1e-2
    delta_fine: float = 1e-13
    max_steps: int = 100_000
    max_newton: int = 50

    def __post_init__(self):
        self.stationary_points = tuple(complex(xi) for xi in self.stationary_points)

    @classmethod
    def from_parameters(cls, ctx, region, no_return, stationary_points, params) -> "TracerSetup":
        return cls(
            ctx=ctx,
            region=region,
            no_return=no_return,
            stationary_points=stationary_points,
            delta_ode=params.delta_ode,
            delta_coarse=params.delta_coarse,
            delta_fine=params.delta_fine,
            max_steps=params.max_trace_steps,
            max_newton=params.max_newton_iterations,
        )

    def distance(self, z: complex) -> float:
        """dist(z, stationary points); infinite when there are none."""
        if not self.stationary_points:
            return math.inf
        return min(abs(z - xi) for xi in self.stationary_points)


@dataclass
class SDPath:
    """Discretised contour. Only refine_point may extend it."""

    origin: complex
    mesh: List[float]
    points: List[complex]
    terminal: Terminal
    setup: TracerSetup = field(repr=False, compare=False)
    g_origin: complex = field(default=0j, repr=False)

    @property
    def p_max(self) -> float:
        return self.mesh[-1]

    @property
    def ends_in_valley(self) -> bool:
        return isinstance(self.terminal, Valley)

    def arc_length(self) -> float:
        pts = np.asarray(self.points)
        return float(np.sum(np.abs(np.diff(pts)))) if pts.size > 1 else 0.0


def _step_length(setup: TracerSetup, h: complex) -> float:
    ctx = setup.ctx
    slope = abs(evaluate(ctx.dg, h))
    curvature = abs(evaluate(ctx.d2g, h))
    d = setup.distance(h)
    if slope == 0.0 or d == 0.0:
        raise ContourTracingError(f"contour reached a stationary point near {h}")
    stability = 2.0 * slope ** 2 / curvature if curvature > 0 else math.inf
    proximity = slope * d
    bound = min(stability, proximity)
    if math.isinf(bound):
        # linear phase: no stationary points and no curvature
        bound = slope * max(1.0, abs(h))
    return setup.delta_ode * bound


def _newton(setup: TracerSetup, guess: complex, target: complex, tolerance, label: str) -> complex:
    """Solve g(h) = target from guess; tolerance(h) gives the increment bound."""
    ctx = setup.ctx
    h = guess
    for _ in range(setup.max_newton):
        slope = evaluate(ctx.dg, h)
        if slope == 0:
            raise ContourTracingError(f"{label}: Newton iterate hit a stationary point near {h}")
        step = (evaluate(ctx.g, h) - target) / slope
        h -= step
        if not (math.isfinite(h.real) and math.isfinite(h.imag)):
            raise ContourTracingError(f"{label}: Newton iteration diverged")
        if abs(step) < tolerance(h):
            return h
    raise ContourTracingError(f"{label}: Newton corrector did not converge in {setup.max_newton} iterations")


def _advance(setup: TracerSetup, g_origin: complex, p: float, h: complex):
    """One predictor-corrector step from (p, h)."""
    dp = _step_length(setup, h)
    p_next = p + dp
    predicted = h + dp * 1j / evaluate(setup.ctx.dg, h)
    corrected = _newton(
        setup,
        predicted,
        g_origin + 1j * p_next,
        lambda z: setup.delta_coarse * setup.distance(z),
        "trace",
    )
    return p_next, corrected


def trace(eta: complex, setup: TracerSetup) -> SDPath:
    """
    Trace the contour from eta until it enters a ball or a region of no return.

    Ball entry is tested on closed balls in index order; the final point of
    an entering contour is re-solved at delta_fine.
    """
    eta = complex(eta)
    ctx = setup.ctx
    g_origin = evaluate(ctx.g, eta)
    mesh = [0.0]
    points = [eta]
    p, h = 0.0, eta

    for _ in range(setup.max_steps):
        p, h = _advance(setup, g_origin, p, h)
        mesh.append(p)
        points.append(h)

        ball = setup.region.ball_containing(h)
        if ball is not None:
            refined = _newton(
                setup, h, g_origin + 1j * p,
                lambda z: setup.delta_fine * max(1.0, abs(z)),
                "entrance",
            )
            points[-1] = refined
            return SDPath(eta, mesh, points, Entrance(ball=ball, point=refined), setup, g_origin)

        valley = no_return_valley(h, ctx, setup.no_return)
        if valley is not None:
            return SDPath(eta, mesh, points, Valley(angle=valley), setup, g_origin)

    raise ContourTracingError(f"contour from {eta} failed to terminate within {setup.max_steps} steps")


def extend(path: SDPath, p_target: float) -> None:
    """Resume tracing past the terminal until the mesh covers p_target."""
    setup = path.setup
    steps = 0
    while path.mesh[-1] < p_target:
        if steps >= setup.max_steps:
            raise ContourTracingError(f"extension of contour from {path.origin} exceeded {setup.max_steps} steps")
        p, h = _advance(setup, path.g_origin, path.mesh[-1], path.points[-1])
        path.mesh.append(p)
        path.points.append(h)
        steps += 1


def _interpolate(path: SDPath, p: float) -> complex:
    mesh = np.asarray(path.mesh)
    pts = np.asarray(path.points)
    return complex(np.interp(p, mesh, pts.real), np.interp(p, mesh, pts.imag))


def refine_point(path: SDPath, p: float, delta_fine: Optional[float] = None) -> complex:
    """
    h(p) on the contour to fine tolerance.

    Starts Newton from the piecewise-linear interpolant of the traced mesh,
    extending valley-bound contours first when p lies beyond their end.
    The increment bound is delta_fine * max(1, |h|).
    """
    if p < 0:
        raise InputError(f"contour parameter must be non-negative, got {p}")
    if p == 0:
        return path.origin
    tol = path.setup.delta_fine if delta_fine is None else delta_fine

    if p > path.mesh[-1]:
        if path.ends_in_valley:
            extend(path, p)
        else:
            logger.debug("clamping p=%.6g to the traced end %.6g at %s", p, path.mesh[-1], path.terminal)
            p = path.mesh[-1]

    guess = _interpolate(path, p)
    return _newton(
        path.setup, guess, path.g_origin + 1j * p,
        lambda z: tol * max(1.0, abs(z)),
        "refine",
    )


def refine_points(path: SDPath, ps: Sequence[float], delta_fine: Optional[float] = None) -> np.ndarray:
    """refine_point over several parameters, extending the contour once for the largest."""
    ps = np.asarray(ps, dtype=float)
    if ps.size and path.ends_in_valley and ps.max() > path.mesh[-1]:
        extend(path, float(ps.max()))
    return np.array([refine_point(path, float(p), delta_fine) for p in ps], dtype=complex)
