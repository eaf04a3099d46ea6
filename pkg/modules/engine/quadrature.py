"""
Gaussian rules and contour quadrature.

Type 1: straight segment inside the non-oscillatory region (Gauss-Legendre).
Type 2: contour to a valley (Gauss-Laguerre, or truncated Gauss-Legendre).
Type 3: contour to an entrance (possibly truncated Gauss-Legendre).

All contour integrals along a steepest-descent path use the rescaled variable
pt = omega * p, in which the exponential factor is exactly e^{-pt}.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from modules.engine.amplitude import apply_amplitude
from modules.engine.deformation_graph import EdgeKind, OrientedEdge, QuasiSDDeformation, VertexKind
from modules.engine.errors import InputError, QuadratureFailure
from modules.engine.phase_geometry import PhaseContext
from modules.engine.polynomial import evaluate
from modules.engine.sd_tracer import SDPath, refine_points
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)

# Truncation threshold used when skipping is disabled (delta_quad = 0)
TRUNCATION_FLOOR = 1e-16
_NEWTON_SWEEPS = 3
_RESCALE = 1e100


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray


@dataclass
class ContourContribution:
    leg: OrientedEdge
    value: complex = 0j
    skipped: bool = False
    nodes_used: int = 0
    contour_type: int = 1
    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex), repr=False)

    @property
    def sign(self) -> int:
        return self.leg.sign


def _freeze(*arrays: np.ndarray) -> None:
    for array in arrays:
        array.setflags(write=False)


def _legendre_values(n: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_{n-1}(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p, p_prev


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> QuadratureRule:
    """
    N-point Gauss-Legendre rule on [-1, 1].

    Golub-Welsch eigen-solve followed by Newton sweeps on P_N; weights from
    2 / ((1 - x^2) P_N'(x)^2).
    """
    if n < 1:
        raise InputError(f"rule size must be positive, got {n}")
    if n == 1:
        nodes, weights = np.array([0.0]), np.array([2.0])
        _freeze(nodes, weights)
        return QuadratureRule(nodes, weights)

    k = np.arange(1, n)
    off_diagonal = k / np.sqrt(4.0 * k * k - 1.0)
    x = eigh_tridiagonal(np.zeros(n), off_diagonal, eigvals_only=True)

    for _ in range(_NEWTON_SWEEPS):
        p, p_prev = _legendre_values(n, x)
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        x = x - p / dp

    x = 0.5 * (x - x[::-1])
    p, p_prev = _legendre_values(n, x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])

    _freeze(x, w)
    return QuadratureRule(x, w)


def _laguerre_values(n: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    L_n(x), L_{n-1}(x) divided by exp(log_scale), and log_scale.

    Values are rescaled on the fly so large nodes do not overflow.
    """
    p_prev = np.ones_like(x)
    p = 1.0 - x
    log_scale = np.zeros_like(x)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1 - x) * p - k * p_prev) / (k + 1)
        big = np.abs(p) > _RESCALE
        if np.any(big):
            p[big] /= _RESCALE
            p_prev[big] /= _RESCALE
            log_scale[big] += math.log(_RESCALE)
    return p, p_prev, log_scale


@lru_cache(maxsize=None)
def gauss_laguerre(n: int) -> QuadratureRule:
    """
    N-point Gauss-Laguerre rule for weight e^{-t} on [0, inf).

    Golub-Welsch eigen-solve, Newton sweeps on L_N, weights
    1 / (x L_N'(x)^2) evaluated in log space.
    """
    if n < 1:
        raise InputError(f"rule size must be positive, got {n}")
    if n == 1:
        nodes, weights = np.array([1.0]), np.array([1.0])
        _freeze(nodes, weights)
        return QuadratureRule(nodes, weights)

    diagonal = 2.0 * np.arange(n) + 1.0
    off_diagonal = np.arange(1, n, dtype=float)
    x = eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True)

    for _ in range(_NEWTON_SWEEPS):
        p, p_prev, _ = _laguerre_values(n, x)
        dp = n * (p - p_prev) / x
        x = x - p / dp

    p, p_prev, log_scale = _laguerre_values(n, x)
    dp = n * (p - p_prev) / x
    log_w = -np.log(x) - 2.0 * (np.log(np.abs(dp)) + log_scale)
    w = np.exp(log_w)

    _freeze(x, w)
    return QuadratureRule(x, w)


def type1(z0: complex, z1: complex, f: Callable, ctx: PhaseContext, n: int) -> complex:
    """Gauss-Legendre on the straight segment z0 -> z1."""
    if z0 == z1:
        return 0j
    rule = gauss_legendre(n)
    z = 0.5 * ((z1 - z0) * rule.nodes + (z0 + z1))
    integrand = apply_amplitude(f, z) * np.exp(1j * ctx.omega * evaluate(ctx.g, z))
    return complex(0.5 * (z1 - z0) * np.sum(rule.weights * integrand))


def _transformed_amplitude(path: SDPath, f: Callable, ctx: PhaseContext, pt: np.ndarray, delta_fine: float):
    """i f(h) / g'(h) at p = pt / omega, with the refined points."""
    h = refine_points(path, pt / ctx.omega, delta_fine)
    values = 1j * apply_amplitude(f, h) / evaluate(ctx.dg, h)
    return values, h


def _prefactor(path: SDPath, ctx: PhaseContext) -> complex:
    return complex(np.exp(1j * ctx.omega * path.g_origin) / ctx.omega)


def type2_laguerre(path: SDPath, f: Callable, ctx: PhaseContext, n: int, delta_fine: float,
                   keep_nodes: Optional[List] = None) -> complex:
    """(e^{i omega g(eta)} / omega) sum_m w_m ft(t_m) with Gauss-Laguerre nodes."""
    rule = gauss_laguerre(n)
    values, h = _transformed_amplitude(path, f, ctx, rule.nodes, delta_fine)
    if keep_nodes is not None:
        keep_nodes.append(h)
    return _prefactor(path, ctx) * complex(np.sum(rule.weights * values))


def truncation_length(path: SDPath, ctx: PhaseContext, delta_quad: float, log_m: float) -> float:
    """L = -log(delta_quad M / |e^{i omega g(eta)}|); log_m is log M."""
    threshold = delta_quad if delta_quad > 0 else TRUNCATION_FLOOR
    return -(math.log(threshold) + log_m - ctx.log_magnitude(path.origin))


def _truncated_legendre(path: SDPath, f: Callable, ctx: PhaseContext, n: int, length: float,
                        delta_fine: float, keep_nodes: Optional[List]) -> complex:
    if length <= 0:
        return 0j
    rule = gauss_legendre(n)
    pt = 0.5 * length * (rule.nodes + 1.0)
    values, h = _transformed_amplitude(path, f, ctx, pt, delta_fine)
    if keep_nodes is not None:
        keep_nodes.append(h)
    return 0.5 * length * _prefactor(path, ctx) * complex(np.sum(rule.weights * values * np.exp(-pt)))


def type2_legendre(path: SDPath, f: Callable, ctx: PhaseContext, n: int, delta_quad: float, scale: float,
                   delta_fine: Optional[float] = None, keep_nodes: Optional[List] = None,
                   log_scale: Optional[float] = None) -> complex:
    """Gauss-Legendre on [0, L] in the rescaled variable; scale is M (or pass log_scale = log M)."""
    log_m = math.log(scale) if log_scale is None else log_scale
    length = truncation_length(path, ctx, delta_quad, log_m)
    return _truncated_legendre(path, f, ctx, n, length, _fine(path, delta_fine), keep_nodes)


def type3(path: SDPath, f: Callable, ctx: PhaseContext, n: int, delta_quad: float, scale: float,
          delta_fine: Optional[float] = None, keep_nodes: Optional[List] = None,
          log_scale: Optional[float] = None) -> complex:
    """
    As type2_legendre with P = min(omega p_max, L).

    P = omega p_max covers the whole traced contour, ending on the refined
    entrance.
    """
    log_m = math.log(scale) if log_scale is None else log_scale
    length = min(ctx.omega * path.p_max, truncation_length(path, ctx, delta_quad, log_m))
    return _truncated_legendre(path, f, ctx, n, length, _fine(path, delta_fine), keep_nodes)


def _fine(path: SDPath, delta_fine: Optional[float]) -> float:
    return path.setup.delta_fine if delta_fine is None else delta_fine


_SCALE_KINDS = (VertexKind.STATIONARY, VertexKind.FINITE_ENDPOINT, VertexKind.EXIT)


def log_contribution_scale(deformation: QuasiSDDeformation, ctx: PhaseContext) -> float:
    """log M, with M the largest |e^{i omega g}| over stationary/endpoint/exit vertices on the path."""
    indices = deformation.path_vertices()
    vertices = [deformation.vertices[i] for i in indices]
    chosen = [v for v in vertices if v.kind in _SCALE_KINDS]
    if not chosen:
        chosen = [v for v in vertices if v.is_finite]
    if not chosen:
        return 0.0
    return max(ctx.log_magnitude(v.location) for v in chosen)


def contribution_scale(deformation: QuasiSDDeformation, ctx: PhaseContext) -> float:
    """M = max |e^{i omega g(xi)}| over the path's stationary points, endpoints and exits."""
    return math.exp(log_contribution_scale(deformation, ctx))


def _finite_ends(leg: OrientedEdge, deformation: QuasiSDDeformation) -> List[complex]:
    ends = [deformation.vertices[leg.edge.u], deformation.vertices[leg.edge.v]]
    return [vertex.location for vertex in ends if vertex.is_finite]


def classify(leg: OrientedEdge) -> int:
    """1 for ball lines, 2 for contours to valleys, 3 for contours to entrances."""
    if leg.edge.kind is EdgeKind.BALL_LINE:
        return 1
    return 2 if leg.edge.path.ends_in_valley else 3


def assemble(
    deformation: QuasiSDDeformation,
    f: Callable,
    ctx: PhaseContext,
    n: int,
    delta_quad: float = 1e-16,
    delta_fine: float = 1e-13,
    type2_rule: str = "laguerre",
    keep_nodes: bool = False,
) -> Tuple[complex, List[ContourContribution]]:
    """
    Sum signed contributions over the deformation.

    A contour is skipped unless one of its finite ends has
    |e^{i omega g}| / M > delta_quad.
    """
    if type2_rule not in ("laguerre", "legendre"):
        raise InputError(f"unknown type-2 rule {type2_rule!r}")
    if not deformation.legs:
        return 0j, []

    log_m = log_contribution_scale(deformation, ctx)
    log_cut = math.log(delta_quad) if delta_quad > 0 else -math.inf
    with np.errstate(over="ignore"):
        scale = float(np.exp(log_m))

    total = 0j
    contributions: List[ContourContribution] = []
    for leg in deformation.legs:
        kind = classify(leg)
        record = ContourContribution(leg=leg, contour_type=kind)
        ends = _finite_ends(leg, deformation)
        if not any(ctx.log_magnitude(z) - log_m > log_cut for z in ends):
            record.skipped = True
            contributions.append(record)
            continue

        nodes: Optional[List] = [] if keep_nodes else None
        try:
            if kind == 1:
                a = deformation.vertices[leg.edge.u].location
                b = deformation.vertices[leg.edge.v].location
                value = type1(a, b, f, ctx, n)
                if keep_nodes:
                    rule = gauss_legendre(n)
                    nodes.append(0.5 * ((b - a) * rule.nodes + (a + b)))
            elif kind == 2 and type2_rule == "laguerre":
                value = type2_laguerre(leg.edge.path, f, ctx, n, delta_fine, nodes)
            elif kind == 2:
                value = type2_legendre(leg.edge.path, f, ctx, n, delta_quad, scale, delta_fine, nodes, log_m)
            else:
                value = type3(leg.edge.path, f, ctx, n, delta_quad, scale, delta_fine, nodes, log_m)
        except (FloatingPointError, ZeroDivisionError) as exc:
            raise QuadratureFailure(f"type {kind} contour evaluation failed: {exc}") from exc

        record.value = leg.sign * value
        record.nodes_used = n
        if nodes:
            record.nodes = np.concatenate(nodes)
        total += record.value
        contributions.append(record)

    return total, contributions


def total_nodes(contributions: Sequence[ContourContribution]) -> int:
    return sum(c.nodes_used for c in contributions)
