"""
Evaluation pipeline.

evaluate() snaps infinite endpoints onto valleys, tries the small-frequency
straight-line shortcut, handles linear phases exactly, and otherwise runs the
full deformation: stationary points, balls, exits, traced contours, graph,
shortest path and quadrature.
"""

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from modules.engine.amplitude import AmplitudeLike, as_amplitude
from modules.engine.deformation_graph import (
    DeformationGraph,
    Edge,
    EdgeKind,
    Endpoint,
    OrientedEdge,
    QuasiSDDeformation,
    Vertex,
    VertexKind,
    build_graph,
    orient,
    reverse,
    shortest_path,
)
from modules.engine.errors import InputError, NumericalFailure
from modules.engine.parameters import Parameters
from modules.engine.phase_geometry import (
    ExitPoint,
    NonOscRegion,
    NoReturnData,
    PhaseContext,
    amalgamate,
    angular_distance,
    ball_radius,
    exits,
    no_return_threshold,
    stationary_balls,
    stationary_points,
)
from modules.engine.polynomial import ComplexPolynomial
from modules.engine.quadrature import ContourContribution, assemble, gauss_laguerre, total_nodes
from modules.engine.sd_tracer import SDPath, TracerSetup, Valley, trace
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)

# Closed-sector slack when snapping an infinite endpoint onto a valley
SNAP_TOLERANCE = 1e-12

BRANCH_SMALL_OMEGA = "small_omega"
BRANCH_LINEAR = "linear"
BRANCH_FULL = "full"


@dataclass(frozen=True)
class EvaluationRequest:
    a: Endpoint
    b: Endpoint
    g: ComplexPolynomial
    omega: float
    params: Parameters
    f: Callable = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "f", as_amplitude(self.f))


@dataclass(frozen=True)
class StraightLinePlan:
    """Single Gauss-Legendre segment used when the endpoint balls overlap."""

    z0: complex
    z1: complex
    radius_a: float
    radius_b: float


@dataclass
class EvaluationResult:
    value: complex
    n_total: int
    contributions: List[ContourContribution]
    deformation: QuasiSDDeformation
    region: NonOscRegion
    diagnostics: Dict[str, float]
    branch: str = BRANCH_FULL
    endpoints: Tuple[Endpoint, Endpoint] = ()
    stationary_points: Tuple[complex, ...] = ()
    exits: Tuple[ExitPoint, ...] = ()
    paths: Tuple[SDPath, ...] = ()
    graph: Optional[DeformationGraph] = None
    no_return: Optional[NoReturnData] = None
    ctx: Optional[PhaseContext] = None

    @property
    def contributing(self) -> int:
        return sum(1 for c in self.contributions if not c.skipped)

    @property
    def skipped(self) -> int:
        return sum(1 for c in self.contributions if c.skipped)

    def reversed(self) -> "EvaluationResult":
        """The same integral walked b -> a."""
        flipped = []
        for c in reversed(self.contributions):
            leg = OrientedEdge(c.leg.edge, -c.leg.sign, c.leg.end, c.leg.start)
            flipped.append(replace(c, leg=leg, value=-c.value))
        return replace(
            self,
            value=-self.value,
            contributions=flipped,
            deformation=reverse(self.deformation),
            endpoints=(self.endpoints[1], self.endpoints[0]) if self.endpoints else (),
        )

    def summary(self) -> Dict[str, Any]:
        return {
            "branch": self.branch,
            "n_total": self.n_total,
            "contours": len(self.contributions),
            "contributing": self.contributing,
            "skipped": self.skipped,
            "balls": len(self.region.balls),
            "traced": len(self.paths),
            **{f"seconds_{key}": value for key, value in self.diagnostics.items()},
        }


@contextmanager
def _step(name: str, timings: Dict[str, float]):
    """Time a pipeline step and tag numerical failures with its name."""
    started = time.perf_counter()
    try:
        yield
    except NumericalFailure as exc:
        exc.step = name
        raise
    finally:
        timings[name] = timings.get(name, 0.0) + time.perf_counter() - started


def snap_infinite_endpoint(theta: float, ctx: PhaseContext) -> float:
    """
    Valley whose closed sector |theta - v| <= pi/(2J) holds theta.

    Valleys are tried in ascending order, so the smallest matching angle wins.
    """
    if theta is None or not math.isfinite(theta):
        raise InputError(f"infinite endpoint angle must be a finite number, got {theta}")
    half_width = math.pi / (2 * ctx.degree)
    for v in ctx.valleys:
        if angular_distance(theta - v) <= half_width + SNAP_TOLERANCE:
            return v
    raise InputError(
        f"infinite endpoint angle {theta} lies outside every valley sector "
        f"(valleys {[round(v, 12) for v in ctx.valleys]}, half-width {half_width})"
    )


def _snap(endpoint: Endpoint, ctx: PhaseContext) -> Endpoint:
    if endpoint.is_infinite:
        return Endpoint(angle=snap_infinite_endpoint(endpoint.angle, ctx))
    if not (math.isfinite(endpoint.value.real) and math.isfinite(endpoint.value.imag)):
        raise InputError(f"finite endpoint must be finite, got {endpoint.value}")
    return endpoint


def small_omega_check(a: complex, b: complex, ctx: PhaseContext, params: Parameters) -> Optional[StraightLinePlan]:
    """Straight-line plan when the balls around a and b overlap (|a - b| < r_a + r_b)."""
    r_a = ball_radius(a, ctx, params.c_ball, params.n_ball)
    r_b = ball_radius(b, ctx, params.c_ball, params.n_ball)
    if abs(a - b) < r_a + r_b:
        return StraightLinePlan(z0=complex(a), z1=complex(b), radius_a=r_a, radius_b=r_b)
    return None


def _canonical_key(endpoint: Endpoint) -> Tuple[int, float, float]:
    if endpoint.is_infinite:
        return (1, endpoint.angle, 0.0)
    return (0, endpoint.value.real, endpoint.value.imag)


def _run_assembly(req: EvaluationRequest, ctx: PhaseContext, deformation: QuasiSDDeformation,
                  timings: Dict[str, float], keep_nodes: bool):
    with _step("quadrature", timings):
        return assemble(
            deformation,
            req.f,
            ctx,
            req.params.n_points,
            delta_quad=req.params.delta_quad,
            delta_fine=req.params.delta_fine,
            type2_rule=req.params.type2_rule,
            keep_nodes=keep_nodes,
        )


def _straight_line_result(req, ctx, a: Endpoint, b: Endpoint, plan: StraightLinePlan,
                          timings, keep_nodes) -> EvaluationResult:
    graph = DeformationGraph()
    u = graph.add_vertex(Vertex(VertexKind.FINITE_ENDPOINT, plan.z0))
    v = graph.add_vertex(Vertex(VertexKind.FINITE_ENDPOINT, plan.z1))
    graph.add_edge(Edge(EdgeKind.BALL_LINE, u, v, length=abs(plan.z1 - plan.z0)))
    graph.endpoint_vertices = (u, v)
    deformation = orient(graph, [0], u)

    value, contributions = _run_assembly(req, ctx, deformation, timings, keep_nodes)
    logger.debug("small-frequency shortcut: r_a=%.6g r_b=%.6g |a-b|=%.6g",
                 plan.radius_a, plan.radius_b, abs(plan.z1 - plan.z0))
    return EvaluationResult(
        value=value,
        n_total=total_nodes(contributions),
        contributions=contributions,
        deformation=deformation,
        region=NonOscRegion(balls=()),
        diagnostics=timings,
        branch=BRANCH_SMALL_OMEGA,
        endpoints=(a, b),
        graph=graph,
        ctx=ctx,
    )


def linear_phase_evaluate(req: EvaluationRequest, keep_nodes: bool = False,
                          ctx: Optional[PhaseContext] = None) -> EvaluationResult:
    """
    Linear phase: every contour is the exact ray h(p) = eta + i p / alpha_1.

    Each finite endpoint contributes one integral toward the single valley;
    the b side enters with a minus sign.
    """
    timings: Dict[str, float] = {}
    ctx = ctx or PhaseContext.build(req.g, req.omega)
    if ctx.degree != 1:
        raise InputError("linear_phase_evaluate needs a degree-1 phase")
    a, b = _snap(req.a, ctx), _snap(req.b, ctx)
    valley = ctx.valleys[0]
    alpha1 = complex(req.g.coeffs[1])

    setup = TracerSetup.from_parameters(ctx, NonOscRegion(balls=()), NoReturnData(0.0), (), req.params)
    p_end = (gauss_laguerre(req.params.n_points).nodes[-1] + 1.0) / ctx.omega

    graph = DeformationGraph()
    valley_id = graph.add_vertex(Vertex(VertexKind.VALLEY, complex(math.cos(valley), math.sin(valley)), angle=valley))
    ids = []
    paths = []
    for endpoint in (a, b):
        if endpoint.is_infinite:
            ids.append(valley_id)
            continue
        eta = endpoint.value
        vid = graph.add_vertex(Vertex(VertexKind.FINITE_ENDPOINT, eta))
        ids.append(vid)
        if any(path.origin == eta for path in paths):
            continue
        path = SDPath(
            origin=eta,
            mesh=[0.0, p_end],
            points=[eta, eta + 1j * p_end / alpha1],
            terminal=Valley(angle=valley),
            setup=setup,
            g_origin=req.g(eta),
        )
        paths.append(path)
        graph.add_edge(Edge(EdgeKind.SD_CONTOUR, vid, valley_id, length=abs(p_end / alpha1), path=path))
    graph.endpoint_vertices = tuple(ids)

    start, end = ids
    chain = shortest_path(graph, start, end)
    deformation = orient(graph, chain, start)
    value, contributions = _run_assembly(req, ctx, deformation, timings, keep_nodes)
    return EvaluationResult(
        value=value,
        n_total=total_nodes(contributions),
        contributions=contributions,
        deformation=deformation,
        region=NonOscRegion(balls=()),
        diagnostics=timings,
        branch=BRANCH_LINEAR,
        endpoints=(a, b),
        paths=tuple(paths),
        graph=graph,
        no_return=NoReturnData(0.0),
        ctx=ctx,
    )


def _full_deformation(req, ctx, a: Endpoint, b: Endpoint, timings, keep_nodes) -> EvaluationResult:
    params = req.params

    with _step("roots", timings):
        points = stationary_points(ctx)
    with _step("balls", timings):
        balls = stationary_balls(points, ctx, params.c_ball, params.n_ball)
        region = amalgamate(balls, params.delta_ball_for(ctx.degree))
    with _step("exits", timings):
        exit_points = exits(region, ctx)
        no_return = no_return_threshold(ctx)

    setup = TracerSetup.from_parameters(ctx, region, no_return, points, params)
    with _step("trace", timings):
        paths = [trace(e.location, setup) for e in exit_points]
        for endpoint in (a, b):
            if endpoint.is_infinite or region.contains(endpoint.value):
                continue
            if any(path.origin == endpoint.value for path in paths):
                continue
            paths.append(trace(endpoint.value, setup))

    with _step("graph", timings):
        graph = build_graph(region, exit_points, (a, b), ctx.valleys, paths)
        start, end = graph.endpoint_vertices
        chain = shortest_path(graph, start, end)
        deformation = orient(graph, chain, start)

    value, contributions = _run_assembly(req, ctx, deformation, timings, keep_nodes)

    logger.debug(
        "full deformation: %d stationary points, %d balls (%d removed), %d exits, %d contours traced, "
        "graph %d vertices / %d edges, path %d edges",
        len(points), len(region.balls), len(region.removed), len(exit_points), len(paths),
        len(graph.vertices), len(graph.edges), len(chain),
    )
    return EvaluationResult(
        value=value,
        n_total=total_nodes(contributions),
        contributions=contributions,
        deformation=deformation,
        region=region,
        diagnostics=timings,
        branch=BRANCH_FULL,
        endpoints=(a, b),
        stationary_points=tuple(complex(p) for p in points),
        exits=tuple(exit_points),
        paths=tuple(paths),
        graph=graph,
        no_return=no_return,
        ctx=ctx,
    )


def _evaluate_ordered(req: EvaluationRequest, ctx: PhaseContext, a: Endpoint, b: Endpoint,
                      keep_nodes: bool) -> EvaluationResult:
    timings: Dict[str, float] = {}

    if not a.is_infinite and not b.is_infinite:
        with _step("small_omega", timings):
            plan = small_omega_check(a.value, b.value, ctx, req.params)
        if plan is not None:
            return _straight_line_result(req, ctx, a, b, plan, timings, keep_nodes)

    if ctx.degree == 1:
        result = linear_phase_evaluate(replace(req, a=a, b=b), keep_nodes=keep_nodes, ctx=ctx)
        result.diagnostics = {**timings, **result.diagnostics}
        return result

    return _full_deformation(req, ctx, a, b, timings, keep_nodes)


def evaluate(req: EvaluationRequest, keep_nodes: bool = False) -> EvaluationResult:
    """
    Approximate the integral of f e^{i omega g} from req.a to req.b.

    The deformation is always built with the endpoints in a canonical order;
    a request in the opposite order returns the reversed result, so swapping
    the endpoints negates the value exactly.
    """
    if not (isinstance(req.omega, (int, float)) and math.isfinite(req.omega) and req.omega > 0):
        raise InputError(f"omega must be a positive finite number, got {req.omega}")
    if req.g.degree() < 1:
        raise InputError("phase must have degree at least 1")
    req.params.validate()

    ctx = PhaseContext.build(req.g, req.omega)
    a, b = _snap(req.a, ctx), _snap(req.b, ctx)

    if _canonical_key(b) < _canonical_key(a):
        return _evaluate_ordered(req, ctx, b, a, keep_nodes).reversed()
    return _evaluate_ordered(req, ctx, a, b, keep_nodes)


def integrate(
    a: complex,
    b: complex,
    f: AmplitudeLike,
    g_descending: Sequence[complex],
    omega: float,
    n_points: int,
    infinite: Tuple[bool, bool] = (False, False),
    **overrides: Any,
) -> complex:
    """
    Positional call form returning only the value.

    `a`/`b` are points, or angles when the matching `infinite` flag is set;
    the phase is given highest degree first. Keyword overrides go to
    Parameters (c_ball, n_ball, delta_ball, delta_ode, delta_coarse,
    delta_fine, delta_quad, type2_rule).
    """
    ends = [
        Endpoint.infinite(float(value)) if flag else Endpoint.finite(complex(value))
        for value, flag in zip((a, b), infinite)
    ]
    params = Parameters(n_points=int(n_points)).with_overrides(**overrides)
    request = EvaluationRequest(
        a=ends[0],
        b=ends[1],
        g=ComplexPolynomial.from_descending(g_descending),
        omega=float(omega),
        params=params,
        f=f,
    )
    return evaluate(request).value


__all__ = [
    "Endpoint",
    "EvaluationRequest",
    "EvaluationResult",
    "StraightLinePlan",
    "evaluate",
    "integrate",
    "linear_phase_evaluate",
    "small_omega_check",
    "snap_infinite_endpoint",
]
