"""
Phase templates for parameterised families of integrals.

A template stores the phase (highest degree first) with each coefficient a
short sum of terms scale * param**power, plus the integration endpoints and
frequency. Definitions live in data/templates/*.json; custom templates are
assembled from base/x/y coefficient vectors on the command line.
"""

import cmath
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from modules.engine.errors import InputError
from modules.engine.evaluator import Endpoint
from modules.engine.polynomial import ComplexPolynomial
from modules.loader.data_loader import list_data_files, load_template


@dataclass(frozen=True)
class Term:
    scale: complex
    param: Optional[str] = None
    power: int = 1

    def value(self, values: Mapping[str, float]) -> complex:
        if self.param is None:
            return self.scale
        try:
            return self.scale * values[self.param] ** self.power
        except KeyError:
            raise InputError(f"template parameter {self.param!r} has no value") from None


def _pearcey_caustic(x: float, y: float, z: float) -> float:
    return y + 1.5 * abs(x) ** (2.0 / 3.0)


def _swallowtail_caustic(x: float, y: float, z: float) -> float:
    return (
        400 * x ** 3 - 360 * x ** 2 * z ** 2 - 135 * y ** 4 - 27 * y ** 2 * z ** 3
        + 540 * x * y ** 2 * z + 81 * x * z ** 4
    )


def _aij_caustic(x: float, y: float, z: float) -> float:
    return y + 4.0 * x ** 3 / 27.0


def _first_parameter(x: float, y: float, z: float) -> float:
    return x


# Zero exactly where g' and g'' share a root
CAUSTICS = {
    "pearcey": _pearcey_caustic,
    "swallowtail": _swallowtail_caustic,
    "aij": _aij_caustic,
    "airy": _first_parameter,
    "coalescence": _first_parameter,
}


def _complex(raw: Any) -> complex:
    if isinstance(raw, (list, tuple)):
        if len(raw) != 2:
            raise InputError(f"complex value must be [re, im], got {raw}")
        return complex(float(raw[0]), float(raw[1]))
    return complex(raw)


def _parse_term(raw: Mapping[str, Any]) -> Term:
    return Term(
        scale=_complex(raw.get("scale", 1.0)),
        param=raw.get("param"),
        power=int(raw.get("power", 1)),
    )


def valley_angle(index: int, leading: complex, degree: int) -> float:
    """Centre of valley number `index` (1-based) for a phase with this leading coefficient."""
    if not 1 <= index <= degree:
        raise InputError(f"valley index must lie in 1..{degree}, got {index}")
    return ((2 * (index - 1) + 0.5) * math.pi - cmath.phase(leading)) / degree % (2.0 * math.pi)


@dataclass(frozen=True)
class PhaseTemplate:
    name: str
    parameters: Tuple[str, ...]
    coefficients: Tuple[Tuple[Term, ...], ...]
    endpoints: Tuple[Dict[str, Any], Dict[str, Any]]
    omega: float = 1.0
    description: str = ""
    caustic: Optional[str] = None
    defaults: Dict[str, float] = field(default_factory=dict)
    prefactor: complex = 1.0

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PhaseTemplate":
        try:
            coefficients = tuple(tuple(_parse_term(term) for term in entry) for entry in data["coefficients"])
            endpoints = tuple(data["endpoints"])
            name = data["name"]
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed template definition: {e}") from e
        if len(endpoints) != 2:
            raise InputError("template needs exactly two endpoints")
        if len(coefficients) < 2:
            raise InputError("template phase must have degree at least 1")
        return cls(
            name=name,
            parameters=tuple(data.get("parameters", ())),
            coefficients=coefficients,
            endpoints=endpoints,
            omega=float(data.get("omega", 1.0)),
            description=data.get("description", ""),
            caustic=data.get("caustic"),
            defaults={key: float(value) for key, value in data.get("defaults", {}).items()},
            prefactor=_complex(data.get("prefactor", 1.0)),
        )

    @classmethod
    def custom(
        cls,
        base: Sequence[complex],
        gx: Sequence[complex] = (),
        gy: Sequence[complex] = (),
        endpoints: Tuple[Endpoint, Endpoint] = (Endpoint.finite(-1.0), Endpoint.finite(1.0)),
        omega: float = 1.0,
    ) -> "PhaseTemplate":
        """Phase base + x * gx + y * gy, vectors aligned at the constant term."""
        width = max(len(base), len(gx), len(gy))

        def padded(vector):
            return [0j] * (width - len(vector)) + [complex(c) for c in vector]

        rows = []
        for b, cx, cy in zip(padded(base), padded(gx), padded(gy)):
            terms = []
            if b:
                terms.append(Term(b))
            if cx:
                terms.append(Term(cx, "x"))
            if cy:
                terms.append(Term(cy, "y"))
            rows.append(tuple(terms))

        def as_entry(endpoint: Endpoint) -> Dict[str, Any]:
            if endpoint.is_infinite:
                return {"infinite": endpoint.angle}
            return {"finite": [endpoint.value.real, endpoint.value.imag]}

        return cls(
            name="custom",
            parameters=("x", "y"),
            coefficients=tuple(rows),
            endpoints=(as_entry(endpoints[0]), as_entry(endpoints[1])),
            omega=float(omega),
        )

    def _values(self, values: Mapping[str, float]) -> Dict[str, float]:
        merged = dict(self.defaults)
        merged.update({key: value for key, value in values.items() if value is not None})
        return merged

    def phase_coefficients(self, **values: float) -> List[complex]:
        """Descending coefficients at the given parameter values."""
        merged = self._values(values)
        return [sum((term.value(merged) for term in entry), 0j) for entry in self.coefficients]

    def phase(self, **values: float) -> ComplexPolynomial:
        g = ComplexPolynomial.from_descending(self.phase_coefficients(**values))
        if g.degree() < 1:
            raise InputError(f"template {self.name!r} gives a constant phase at {values}")
        return g

    def endpoint_pair(self, g: Optional[ComplexPolynomial] = None,
                      valleys: Optional[Tuple[int, int]] = None) -> Tuple[Endpoint, Endpoint]:
        """
        Resolve the stored endpoints.

        {"valley": "i"} / {"valley": "j"} pick entries of `valleys` (1-based
        valley numbers); the phase `g` fixes the valley geometry.
        """
        resolved = []
        for entry in self.endpoints:
            if "finite" in entry:
                resolved.append(Endpoint.finite(_complex(entry["finite"])))
            elif "infinite" in entry:
                resolved.append(Endpoint.infinite(float(entry["infinite"])))
            elif "valley" in entry:
                if valleys is None or g is None:
                    raise InputError(f"template {self.name!r} needs valley indices (--ij)")
                index = valleys[0] if entry["valley"] == "i" else valleys[1]
                resolved.append(Endpoint.infinite(valley_angle(int(index), g.leading, g.degree())))
            else:
                raise InputError(f"unknown endpoint entry {entry}")
        return resolved[0], resolved[1]

    def caustic_residual(self, x: float, y: float = 0.0, z: float = 0.0) -> float:
        """Signed residual of the coalescence set; zero where stationary points merge."""
        if self.caustic not in CAUSTICS:
            raise InputError(f"template {self.name!r} has no caustic formula")
        return CAUSTICS[self.caustic](x, y, z)


def coalescence_template(order: int) -> PhaseTemplate:
    """z^{p+1}/(p+1) - r^p z on [-1, 1]: p stationary points on |z| = r merging at r = 0."""
    if order < 1:
        raise InputError(f"coalescence order must be positive, got {order}")
    rows: List[Tuple[Term, ...]] = [(Term(1.0 / (order + 1)),)]
    rows += [()] * (order - 1)
    rows += [(Term(-1.0, "r", order),), ()]
    return PhaseTemplate(
        name="coalescence",
        parameters=("r",),
        coefficients=tuple(rows),
        endpoints=({"finite": [-1.0, 0.0]}, {"finite": [1.0, 0.0]}),
        omega=1000.0,
        description=f"order-{order} coalescence at the origin",
        caustic="coalescence",
    )


def modulated_wave(value: complex, x0: float, k: float) -> complex:
    """Outer-variable wave value * e^{i k x0}."""
    return value * cmath.exp(1j * k * x0)


def outer_to_inner(x0: float, y0: float, k: float) -> Tuple[float, float]:
    """(x, y) = (k^{1/5} x0, k^{3/5} y0)."""
    return k ** 0.2 * x0, k ** 0.6 * y0


def available_templates(data_path: Optional[Path] = None) -> List[str]:
    return [Path(name).stem for name in list_data_files("templates", "*.json", data_path=data_path)]


def load_phase_template(name: str, data_path: Optional[Path] = None) -> PhaseTemplate:
    if name not in available_templates(data_path):
        raise InputError(f"unknown template {name!r}; available: {', '.join(available_templates(data_path))}")
    data = load_template(name, data_path=data_path)
    if data is None:
        raise InputError(f"template {name!r} could not be read")
    return PhaseTemplate.from_dict(data)
