"""
Complex polynomial arithmetic and root finding.

Coefficients are stored in ascending order (alpha_0 .. alpha_J). Roots come
from the eigenvalues of the companion matrix followed by a single Newton
polish per root.
"""

from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from modules.engine.errors import InputError, RootFindingError
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)

# Imaginary-part tolerance for accepting a computed root as real
REAL_ROOT_TOL = 1e-8
# Bisection fallback doubles the search radius up to this bound
MAX_SEARCH_RADIUS = 2.0 ** 60

ArrayLike = Union[complex, float, np.ndarray]


class ComplexPolynomial:
    """Immutable polynomial with complex coefficients in ascending order."""

    __slots__ = ("coeffs", "_terms")

    def __init__(self, coeffs: Iterable[complex]):
        c = np.atleast_1d(np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                                     dtype=complex)).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        nonzero = np.flatnonzero(c)
        c = c[: nonzero[-1] + 1].copy() if nonzero.size else np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self.coeffs = c
        # Reversed python complex tuple for fast scalar Horner
        self._terms = tuple(complex(v) for v in c[::-1])

    @classmethod
    def from_descending(cls, coeffs: Sequence[complex]) -> "ComplexPolynomial":
        """Build from the descending order used on the command line."""
        return cls(list(coeffs)[::-1])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return self.degree() == 0 and self.coeffs[0] == 0

    def descending(self) -> np.ndarray:
        return self.coeffs[::-1].copy()

    def __call__(self, z: ArrayLike) -> ArrayLike:
        return evaluate(self, z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"ComplexPolynomial({[complex(c) for c in self.coeffs]})"

    def __reduce__(self):
        return (ComplexPolynomial, (self.coeffs.tolist(),))


def evaluate(p: ComplexPolynomial, z: ArrayLike) -> ArrayLike:
    """
    Horner evaluation of p at z.

    Scalars stay in python complex arithmetic; arrays are evaluated
    element-wise with numpy.
    """
    if np.isscalar(z):
        acc = 0j
        for c in p._terms:
            acc = acc * z + c
        return acc

    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p._terms:
        acc = acc * z + c
    return acc


def derivative(p: ComplexPolynomial) -> ComplexPolynomial:
    """Coefficients j*alpha_j shifted down one degree."""
    if p.degree() == 0:
        logger.warning("derivative of a constant polynomial requested; returning zero polynomial")
        return ComplexPolynomial([0.0])
    j = np.arange(1, len(p.coeffs))
    return ComplexPolynomial(p.coeffs[1:] * j)


def taylor_shift(p: ComplexPolynomial, xi: complex) -> np.ndarray:
    """
    Ascending coefficients b_k of p(xi + delta) as a polynomial in delta.

    Repeated synthetic division; b_0 equals p(xi).
    """
    a = [complex(c) for c in p.coeffs]
    n = len(a) - 1
    xi = complex(xi)
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] += xi * a[j + 1]
    return np.array(a, dtype=complex)


def _coefficient_scale(p: ComplexPolynomial) -> float:
    return float(max(1.0, np.max(np.abs(p.coeffs))))


def roots(p: ComplexPolynomial) -> np.ndarray:
    """
    All degree(p) roots with multiplicity.

    Companion-matrix eigenvalues (numpy QR iteration) with one Newton
    polish per root; the polish is kept only if it lowers the residual.
    """
    if p.is_zero():
        raise InputError("roots of the zero polynomial are undefined")
    if p.degree() == 0:
        return np.zeros(0, dtype=complex)

    try:
        found = np.roots(p.descending())
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(f"companion eigenvalue iteration did not converge: {exc}") from exc

    found = np.asarray(found, dtype=complex)
    if found.size != p.degree() or not np.all(np.isfinite(found)):
        raise RootFindingError("companion eigenvalue iteration returned non-finite roots")

    dp = derivative(p)
    polished = np.empty_like(found)
    for k, rho in enumerate(found):
        rho = complex(rho)
        value = evaluate(p, rho)
        slope = evaluate(dp, rho)
        if value != 0 and slope != 0:
            candidate = rho - value / slope
            if abs(evaluate(p, candidate)) <= abs(value):
                rho = candidate
        polished[k] = rho
    return polished


def residual_bound(p: ComplexPolynomial, rho: complex) -> float:
    """Residual bound accepted for a polished root."""
    return 1e-10 * _coefficient_scale(p) * (1.0 + abs(rho)) ** p.degree()


def _as_real_coefficients(p: Union[ComplexPolynomial, Sequence[float], np.ndarray]) -> np.ndarray:
    coeffs = p.coeffs if isinstance(p, ComplexPolynomial) else np.asarray(p)
    coeffs = np.real_if_close(np.asarray(coeffs, dtype=complex), tol=1e6)
    coeffs = np.asarray(np.real(coeffs), dtype=float)
    nonzero = np.flatnonzero(coeffs)
    return coeffs[: nonzero[-1] + 1] if nonzero.size else np.zeros(1)


def _bisection_root(coeffs: np.ndarray) -> Optional[float]:
    """Bracket a sign change by doubling from 1, then bisect."""
    # roots at the origin are not positive; divide them out
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if coeffs.size < 2:
        return None
    poly = np.polynomial.Polynomial(coeffs)
    with np.errstate(over="ignore", invalid="ignore"):
        f0 = poly(0.0)
        radius = 1.0
        while radius <= MAX_SEARCH_RADIUS:
            f_r = poly(radius)
            if np.isfinite(f_r) and np.sign(f_r) != np.sign(f0):
                return float(brentq(poly, 0.0, radius, xtol=1e-15 * radius, rtol=4 * np.finfo(float).eps))
            radius *= 2.0
    return None


def smallest_positive_real_root(p: Union[ComplexPolynomial, Sequence[float], np.ndarray]) -> Optional[float]:
    """
    Smallest root with |Im| < 1e-8 (1 + |Re|) and Re > 0, or None.

    Falls back to sign-change bisection when the eigen-solve fails or finds
    no admissible root.
    """
    coeffs = _as_real_coefficients(p)
    if coeffs.size < 2:
        return None

    try:
        candidates = np.roots(coeffs[::-1])
        candidates = candidates[np.isfinite(candidates)]
    except np.linalg.LinAlgError:
        candidates = np.zeros(0, dtype=complex)

    admissible = [
        float(np.real(c))
        for c in np.atleast_1d(candidates)
        if np.real(c) > 0 and abs(np.imag(c)) < REAL_ROOT_TOL * (1.0 + abs(np.real(c)))
    ]
    if admissible:
        return min(admissible)

    return _bisection_root(coeffs)
