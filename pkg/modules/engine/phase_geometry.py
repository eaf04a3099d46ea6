"""
Geometry derived from the phase before any contour is traced.

Valleys at infinity, non-oscillatory balls around stationary points (with
amalgamation of near-coincident balls), exits on the ball boundaries and the
region of no return around each valley.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from modules.engine.errors import BallRadiusError, ExitSearchError, InputError, RootFindingError
from modules.engine.polynomial import (
    ComplexPolynomial,
    derivative,
    evaluate,
    roots,
    smallest_positive_real_root,
    taylor_shift,
)

TWO_PI = 2.0 * math.pi
# Accept s = e^{i theta} roots within this distance of the unit circle
UNIT_CIRCLE_TOL = 1e-6
# Offset used to classify a minimum when the second derivative vanishes
DEGENERATE_OFFSET = 1e-4
# Two exits closer than this (in angle) on the same ball are the same exit
EXIT_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class PhaseContext:
    """Phase g with its first two derivatives, the frequency and the valleys."""

    g: ComplexPolynomial
    dg: ComplexPolynomial
    d2g: ComplexPolynomial
    omega: float
    degree: int
    valleys: Tuple[float, ...]
    abs_coeffs: Tuple[float, ...] = field(repr=False)

    @classmethod
    def build(cls, g: ComplexPolynomial, omega: float) -> "PhaseContext":
        if g.degree() < 1:
            raise InputError("phase must have degree at least 1")
        if not math.isfinite(omega) or omega < 0:
            raise InputError(f"frequency must be finite and non-negative, got {omega}")
        dg = derivative(g)
        return cls(
            g=g,
            dg=dg,
            d2g=derivative(dg) if dg.degree() >= 1 else ComplexPolynomial([0.0]),
            omega=float(omega),
            degree=g.degree(),
            valleys=tuple(valleys(g)),
            abs_coeffs=tuple(float(abs(c)) for c in g.coeffs),
        )

    def log_magnitude(self, z: complex) -> float:
        """log |e^{i omega g(z)}| = -omega Im g(z)."""
        return -self.omega * evaluate(self.g, z).imag

    def exponential(self, z):
        return np.exp(1j * self.omega * evaluate(self.g, z))


@dataclass(frozen=True)
class NonOscBall:
    center: complex
    radius: float

    def contains(self, z: complex, closed: bool = True) -> bool:
        d = abs(z - self.center)
        return d <= self.radius if closed else d < self.radius


@dataclass(frozen=True)
class NonOscRegion:
    """Surviving balls plus the stationary points removed by amalgamation."""

    balls: Tuple[NonOscBall, ...]
    removed: Tuple[Tuple[complex, int], ...] = ()

    def __len__(self) -> int:
        return len(self.balls)

    def ball_containing(self, z: complex) -> Optional[int]:
        """Index of the first closed ball holding z, or None."""
        for index, ball in enumerate(self.balls):
            if abs(z - ball.center) <= ball.radius:
                return index
        return None

    def contains(self, z: complex) -> bool:
        return self.ball_containing(z) is not None


@dataclass(frozen=True)
class ExitPoint:
    location: complex
    owner: int
    angle: float


@dataclass(frozen=True)
class NoReturnData:
    r_star: float


def valleys(g: ComplexPolynomial) -> List[float]:
    """Valley centre angles ((2(m-1) + 1/2) pi - arg alpha_J) / J mod 2 pi, ascending."""
    J = g.degree()
    if J < 1:
        raise InputError("valleys need a phase of degree at least 1")
    arg_lead = cmath.phase(g.leading)
    angles = [((2 * (m - 1) + 0.5) * math.pi - arg_lead) / J % TWO_PI for m in range(1, J + 1)]
    return sorted(angles)


def angular_distance(theta: float) -> float:
    """min over integers m of |theta - 2 pi m|, in [0, pi]."""
    return abs((theta + math.pi) % TWO_PI - math.pi)


def _shifted_increment(g: ComplexPolynomial, xi: complex) -> np.ndarray:
    """Ascending coefficients of g(xi + delta) - g(xi)."""
    b = taylor_shift(g, xi)
    b[0] = 0.0
    return b


def ball_radius(xi: complex, ctx: PhaseContext, c_ball: float, n_ball: int) -> float:
    """
    Ray approximation of the non-oscillatory radius at xi.

    On each of n_ball rays the radius is the first positive crossing of
    omega^2 |g(xi + r e^{i phi}) - g(xi)|^2 = c_ball^2; the ball radius is
    the largest of these.
    """
    b = _shifted_increment(ctx.g, xi)
    k = np.arange(len(b))
    best: Optional[float] = None
    for n in range(1, n_ball + 1):
        direction = cmath.exp(1j * TWO_PI * n / n_ball)
        q = b * direction ** k
        u = (ctx.omega ** 2) * np.convolve(q, np.conj(q)).real
        u[0] -= c_ball ** 2
        r = smallest_positive_real_root(u)
        if r is not None and (best is None or r > best):
            best = r
    if best is None:
        raise BallRadiusError(f"no positive radius found on any ray around {xi}")
    return best


def ball_separation(first: NonOscBall, second: NonOscBall) -> float:
    """d = |xi1 - xi2| / max(r1, r2)."""
    return abs(first.center - second.center) / max(first.radius, second.radius)


def amalgamate(balls: Sequence[NonOscBall], delta_ball: float) -> NonOscRegion:
    """
    Remove stationary points whose balls nearly coincide.

    While the closest pair has d < delta_ball, drop the member with the
    smaller radius (equal radii: the later one in input order). Removed
    points remember which surviving ball covers them.
    """
    alive = list(range(len(balls)))
    absorbed_by = {}

    while len(alive) > 1:
        closest = None
        for a_pos in range(len(alive)):
            for b_pos in range(a_pos + 1, len(alive)):
                i, j = alive[a_pos], alive[b_pos]
                d = ball_separation(balls[i], balls[j])
                if closest is None or d < closest[0]:
                    closest = (d, i, j)
        d, i, j = closest
        if d >= delta_ball:
            break
        ri, rj = balls[i].radius, balls[j].radius
        if ri < rj:
            loser, keeper = i, j
        elif rj < ri:
            loser, keeper = j, i
        else:
            loser, keeper = max(i, j), min(i, j)
        alive.remove(loser)
        absorbed_by[loser] = keeper

    survivors = {original: position for position, original in enumerate(alive)}
    kept = tuple(balls[i] for i in alive)

    removed = []
    for loser in sorted(absorbed_by):
        keeper = absorbed_by[loser]
        while keeper not in survivors:
            keeper = absorbed_by[keeper]
        point = balls[loser].center
        cover = survivors[keeper]
        if not kept[cover].contains(point):
            inside = [pos for pos, ball in enumerate(kept) if ball.contains(point)]
            if inside:
                cover = min(inside, key=lambda pos: abs(point - kept[pos].center) / kept[pos].radius)
        removed.append((point, cover))

    return NonOscRegion(balls=kept, removed=tuple(removed))


def _circle_minima(ball: NonOscBall, ctx: PhaseContext) -> List[float]:
    """Angles of local minima of -Im g along the ball boundary."""
    J = ctx.degree
    b = _shifted_increment(ctx.g, ball.center)
    k = np.arange(len(b))
    c = k * b * ball.radius ** k

    # Re(sum_k c_k s^k) = 0 on |s| = 1, cleared into a degree 2J polynomial
    trig = np.zeros(2 * J + 1, dtype=complex)
    for order in range(1, J + 1):
        trig[J + order] += c[order]
        trig[J - order] += np.conj(c[order])

    candidates = np.roots(trig[::-1])
    angles = []
    for s in candidates:
        if abs(abs(s) - 1.0) < UNIT_CIRCLE_TOL:
            angles.append(cmath.phase(s) % TWO_PI)
    angles.sort()

    def phi(theta: float) -> float:
        return -evaluate(ctx.g, ball.center + ball.radius * cmath.exp(1j * theta)).imag

    scale = float(np.max(np.abs(c))) if c.size else 1.0
    minima: List[float] = []
    for theta in angles:
        if minima and angular_distance(theta - minima[-1]) < EXIT_MERGE_TOL:
            continue
        curvature = float(np.imag(np.sum(k * c * np.exp(1j * k * theta))))
        if abs(curvature) > 1e-10 * scale:
            is_minimum = curvature > 0
        else:
            here = phi(theta)
            is_minimum = phi(theta - DEGENERATE_OFFSET) >= here and phi(theta + DEGENERATE_OFFSET) >= here
        if is_minimum:
            minima.append(theta)
    if len(minima) > 1 and angular_distance(minima[0] - minima[-1]) < EXIT_MERGE_TOL:
        minima.pop()
    return minima


def exits(region: NonOscRegion, ctx: PhaseContext) -> List[ExitPoint]:
    """Local minima of -Im g on each ball boundary, minus those strictly inside another ball."""
    if not region.balls:
        raise InputError("exits need a non-empty region")
    found: List[ExitPoint] = []
    for owner, ball in enumerate(region.balls):
        minima = _circle_minima(ball, ctx)
        if not minima:
            raise ExitSearchError(f"no boundary minima on ball {owner} centred at {ball.center}")
        for theta in minima:
            z = ball.center + ball.radius * cmath.exp(1j * theta)
            covered = any(
                other != owner and abs(z - region.balls[other].center) < region.balls[other].radius
                for other in range(len(region.balls))
            )
            if not covered:
                found.append(ExitPoint(location=z, owner=owner, angle=theta))
    return found


def no_return_margin(r: float, theta: float, ctx: PhaseContext) -> float:
    """G(r, theta) = J|a_J| r^{J-1} min(1/sqrt 2, cos J theta) - sum_j j|a_j| r^{j-1}."""
    J = ctx.degree
    a = ctx.abs_coeffs
    lead = J * a[J] * r ** (J - 1) * min(1.0 / math.sqrt(2.0), math.cos(J * theta))
    tail = sum(j * a[j] * r ** (j - 1) for j in range(1, J))
    return lead - tail


def no_return_threshold(ctx: PhaseContext) -> NoReturnData:
    """Positive root r_* of G(r, pi/(4J)) = 0, or 0 when the lower terms vanish."""
    J = ctx.degree
    a = ctx.abs_coeffs
    if J < 2 or all(a[j] == 0 for j in range(1, J)):
        return NoReturnData(r_star=0.0)
    # ascending in r: -j|a_j| at r^{j-1}, J|a_J|/sqrt 2 at r^{J-1}
    coeffs = [-j * a[j] for j in range(1, J)] + [J * a[J] / math.sqrt(2.0)]
    r_star = smallest_positive_real_root(np.array(coeffs))
    if r_star is None:
        raise RootFindingError("region-of-no-return threshold has no positive root", step="no_return")
    return NoReturnData(r_star=r_star)


def in_no_return_region(z: complex, valley: float, ctx: PhaseContext, data: NoReturnData) -> bool:
    """Radius test, then sector test, then the sign of G."""
    r = abs(z)
    if r < data.r_star or r == 0.0:
        return False
    theta = angular_distance(cmath.phase(z) - valley)
    if theta >= math.pi / (2 * ctx.degree):
        return False
    return no_return_margin(r, theta, ctx) > 0


def no_return_valley(z: complex, ctx: PhaseContext, data: NoReturnData) -> Optional[float]:
    """The valley whose region of no return holds z, if any."""
    for v in ctx.valleys:
        if in_no_return_region(z, v, ctx, data):
            return v
    return None


def stationary_balls(points: Sequence[complex], ctx: PhaseContext, c_ball: float, n_ball: int) -> List[NonOscBall]:
    """One ball per stationary point, in input order."""
    return [NonOscBall(center=complex(xi), radius=ball_radius(xi, ctx, c_ball, n_ball)) for xi in points]


def stationary_points(ctx: PhaseContext) -> np.ndarray:
    """Roots of g'."""
    if ctx.dg.degree() < 1:
        return np.zeros(0, dtype=complex)
    return roots(ctx.dg)
