"""
Brute-force reference integrals.

Used by the test-suite to check the engine. Nothing here follows steepest
descent contours: finite pieces are straight segments integrated with an
adaptive Gauss-Kronrod (7, 15) pair, and infinite endpoints are reached along
straight rays pointing into their valleys. Only the shared exception
classes are imported from the engine package.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Tuple

import mpmath
import numpy as np

from modules.engine.errors import InputError, OracleBudgetError

# QUADPACK G7K15 abscissae (descending, last is the centre) and weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
GAUSS_WEIGHTS = np.zeros(15)
for _k, _i in enumerate((1, 3, 5)):
    GAUSS_WEIGHTS[_i] = GAUSS_WEIGHTS[14 - _i] = _WG[_k]
GAUSS_WEIGHTS[7] = _WG[3]

MAX_PANELS = 2 ** 20
MAX_PHASE_VARIATION = 1e6
# log |integrand| drop at which a ray is cut
TAIL_EXPONENT = 45.0
AIRY_SERIES_LIMIT = 8.0
ROUNDOFF_FACTOR = 50.0 * np.finfo(float).eps


@dataclass(frozen=True)
class OracleResult:
    value: complex
    error_estimate: float
    panels: int

    def __neg__(self) -> "OracleResult":
        return OracleResult(-self.value, self.error_estimate, self.panels)

    def __add__(self, other: "OracleResult") -> "OracleResult":
        return OracleResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.panels + other.panels,
        )


def _descending(g: Any) -> np.ndarray:
    """Descending coefficients from a sequence or from anything with descending()."""
    if hasattr(g, "descending"):
        coeffs = np.asarray(g.descending(), dtype=complex)
    else:
        coeffs = np.asarray(g, dtype=complex)
    nonzero = np.flatnonzero(coeffs)
    if nonzero.size == 0:
        raise InputError("phase has no nonzero coefficient")
    return coeffs[nonzero[0]:]


def _apply(f: Optional[Callable], z: np.ndarray) -> np.ndarray:
    if f is None:
        return np.ones_like(z)
    try:
        values = np.asarray(f(z), dtype=complex)
    except TypeError:
        values = np.array([complex(f(complex(w))) for w in z.ravel()]).reshape(z.shape)
    return np.broadcast_to(values, z.shape)


def _phase_variation(coeffs: np.ndarray, omega: float, z0: complex, z1: complex) -> float:
    t = np.linspace(0.0, 1.0, 2049)
    re_g = np.polyval(coeffs, z0 + t * (z1 - z0)).real
    return omega * float(np.sum(np.abs(np.diff(re_g))))


def adaptive_finite(f: Optional[Callable], g: Any, omega: float, z0: complex, z1: complex,
                    tol: float = 1e-12) -> OracleResult:
    """
    Integrate f e^{i omega g} along the segment z0 -> z1.

    Panels are bisected until each one's Kronrod/Gauss discrepancy is below
    tol divided by the current panel count.
    """
    z0, z1 = complex(z0), complex(z1)
    if z0 == z1:
        return OracleResult(0j, 0.0, 0)
    coeffs = _descending(g)
    variation = _phase_variation(coeffs, omega, z0, z1)
    if variation > MAX_PHASE_VARIATION:
        raise OracleBudgetError(f"oracle out of budget: phase varies by {variation:.3g} radians on the segment")

    direction = z1 - z0
    initial = int(min(max(1, math.ceil(variation / math.pi)), 2 ** 16))
    edges = np.linspace(0.0, 1.0, initial + 1)
    lo, hi = edges[:-1], edges[1:]

    total = 0j
    error = 0.0
    accepted = 0
    floor = None
    while lo.size:
        if accepted + lo.size > MAX_PANELS:
            raise OracleBudgetError("oracle out of budget")
        half = 0.5 * (hi - lo)
        t = (0.5 * (hi + lo))[:, None] + half[:, None] * NODES[None, :]
        z = z0 + t * direction
        integrand = _apply(f, z) * np.exp(1j * omega * np.polyval(coeffs, z))
        scale = half * direction
        kronrod = scale * (integrand @ KRONROD_WEIGHTS)
        gauss = scale * (integrand @ GAUSS_WEIGHTS)
        discrepancy = np.abs(kronrod - gauss)

        if floor is None:
            # round-off level of the integrand's L1 norm
            floor = ROUNDOFF_FACTOR * float(np.sum(np.abs(scale) * (np.abs(integrand) @ KRONROD_WEIGHTS)))
        bound = max(tol, floor) / (accepted + lo.size)
        done = (discrepancy <= bound) | (half < 1e-15)
        total += complex(np.sum(kronrod[done]))
        error += float(np.sum(discrepancy[done]))
        accepted += int(np.count_nonzero(done))

        mid = 0.5 * (lo[~done] + hi[~done])
        lo, hi = np.concatenate([lo[~done], mid]), np.concatenate([mid, hi[~done]])

    return OracleResult(total, error, accepted)


def _valleys(coeffs: np.ndarray) -> np.ndarray:
    degree = coeffs.size - 1
    lead = cmath.phase(coeffs[0])
    return np.array([((2 * m + 0.5) * math.pi - lead) / degree % (2 * math.pi) for m in range(degree)])


def _nearest_valley(angle: float, coeffs: np.ndarray) -> float:
    valleys = _valleys(coeffs)
    distance = np.abs((angle - valleys + math.pi) % (2 * math.pi) - math.pi)
    return float(valleys[int(np.argmin(distance))])


def _split(endpoint: Any) -> Tuple[bool, complex]:
    """(is_infinite, value or angle) for Endpoint-like objects or plain numbers."""
    if getattr(endpoint, "is_infinite", False):
        return True, float(endpoint.angle)
    if hasattr(endpoint, "value"):
        return False, complex(endpoint.value)
    return False, complex(endpoint)


def _log_magnitude(f, coeffs, omega, z: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(_apply(f, z))) - omega * np.polyval(coeffs, z).imag


def _ray_length(f, coeffs, omega, base: complex, angle: float) -> float:
    """Distance along the ray at which the integrand has dropped by e^-45 (plus a length margin)."""
    direction = cmath.exp(1j * angle)
    t = 1.0
    while t < 2.0 ** 40:
        samples = base + np.linspace(0.0, t, 513) * direction
        logs = _log_magnitude(f, coeffs, omega, samples)
        peak = float(np.max(logs[np.isfinite(logs)])) if np.any(np.isfinite(logs)) else 0.0
        if logs[-1] < peak - TAIL_EXPONENT - math.log(max(t, 1.0)) and np.all(np.diff(logs[-16:]) < 0):
            return t
        t *= 2.0
    raise OracleBudgetError(f"integrand does not decay along the ray at angle {angle}")


def _ray(f, coeffs, omega, base: complex, angle: float, tol: float) -> OracleResult:
    length = _ray_length(f, coeffs, omega, base, angle)
    return adaptive_finite(f, coeffs, omega, base, base + length * cmath.exp(1j * angle), tol)


def reference_infinite(f: Optional[Callable], g: Any, omega: float, a: Any, b: Any,
                       tol: float = 1e-12) -> OracleResult:
    """
    Reference value with one or both endpoints at infinity.

    Infinite endpoints are snapped to the nearest valley. With both at
    infinity the contour is two rays out of the origin; with one finite
    endpoint it is a single ray from that point.
    """
    coeffs = _descending(g)
    a_inf, a_val = _split(a)
    b_inf, b_val = _split(b)

    if not a_inf and not b_inf:
        return adaptive_finite(f, coeffs, omega, a_val, b_val, tol)
    if a_inf and b_inf:
        va, vb = _nearest_valley(a_val, coeffs), _nearest_valley(b_val, coeffs)
        if va == vb:
            return OracleResult(0j, 0.0, 0)
        return _ray(f, coeffs, omega, 0j, vb, tol) + (-_ray(f, coeffs, omega, 0j, va, tol))
    if b_inf:
        return _ray(f, coeffs, omega, a_val, _nearest_valley(b_val, coeffs), tol)
    return -_ray(f, coeffs, omega, b_val, _nearest_valley(a_val, coeffs), tol)


def airy_series(x: float) -> complex:
    """Ai(x) from its Maclaurin series, summed at 40 digits."""
    if not math.isfinite(x) or abs(x) > AIRY_SERIES_LIMIT:
        raise InputError(f"airy_series needs |x| <= {AIRY_SERIES_LIMIT}, got {x}")
    with mpmath.workdps(40):
        x = mpmath.mpf(x)
        cube = x ** 3
        c1 = mpmath.mpf(3) ** (-mpmath.mpf(2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
        c2 = mpmath.mpf(3) ** (-mpmath.mpf(1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
        term_f, term_g = mpmath.mpf(1), x
        sum_f, sum_g = term_f, term_g
        k = 0
        cutoff = mpmath.mpf(10) ** -17
        while True:
            term_f *= cube / ((3 * k + 2) * (3 * k + 3))
            term_g *= cube / ((3 * k + 3) * (3 * k + 4))
            sum_f += term_f
            sum_g += term_g
            k += 1
            if abs(term_f) <= cutoff * abs(sum_f) and abs(term_g) <= cutoff * max(abs(sum_g), 1):
                break
        return complex(float(c1 * sum_f - c2 * sum_g), 0.0)
