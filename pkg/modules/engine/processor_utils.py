"""
Per-point jobs for grid and bench runs.

These must be module-level and picklable for use with multiprocessing.Pool:
a job is a plain tuple and the worker rebuilds the request inside the
child process.
"""

import time
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from modules.engine.errors import InputError, NSDError
from modules.engine.evaluator import Endpoint, EvaluationRequest, evaluate
from modules.engine.parameters import Parameters
from modules.engine.polynomial import ComplexPolynomial
from modules.engine.templates import PhaseTemplate, modulated_wave, outer_to_inner

GRID_HEADER = "x,y,re,im"
BENCH_HEADER = "omega,N,value_re,value_im,n_total,seconds"


@dataclass(frozen=True)
class GridAxis:
    lo: float
    hi: float
    n: int

    def values(self) -> np.ndarray:
        if self.n == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class PointResult:
    index: int
    x: float
    y: float
    value: complex
    n_total: int = 0
    seconds: float = 0.0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def parse_axis(text: str) -> GridAxis:
    """'lo:hi:n' -> GridAxis."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"range must look like lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"range must look like lo:hi:n, got {text!r}") from None
    if n < 1:
        raise InputError(f"range needs at least one point, got {text!r}")
    return GridAxis(lo, hi, n)


def build_grid_jobs(
    template: PhaseTemplate,
    x_axis: GridAxis,
    y_axis: GridAxis,
    params: Parameters,
    f: Any = None,
    fixed: Optional[Dict[str, float]] = None,
    valleys: Optional[Tuple[int, int]] = None,
    outer_k: Optional[float] = None,
) -> List[tuple]:
    """
    One job per grid point, row-major with x varying fastest.

    The grid axes bind the template's first two parameters; `fixed` supplies
    the rest. With outer_k the axes are outer variables (x0, y0).
    """
    names = list(template.parameters) or ["x", "y"]
    x_name = names[0]
    y_name = names[1] if len(names) > 1 else None
    if y_name is None and y_axis.n > 1:
        raise InputError(f"template {template.name!r} has a single parameter; use a y-range with n = 1")

    jobs = []
    xs, ys = x_axis.values(), y_axis.values()
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            inner_x, inner_y = (x, y) if outer_k is None else outer_to_inner(x, y, outer_k)
            values = dict(fixed or {})
            values[x_name] = float(inner_x)
            if y_name is not None:
                values[y_name] = float(inner_y)
            g = template.phase(**values)
            a, b = template.endpoint_pair(g, valleys)
            jobs.append((
                iy * len(xs) + ix,
                float(x),
                float(y),
                a,
                b,
                tuple(g.descending()),
                template.omega,
                f,
                params,
                outer_k,
                template.prefactor,
            ))
    return jobs


def evaluate_grid_point(args: tuple) -> PointResult:
    """
    Evaluate one grid job.

    Module-level and picklable; failures come back as PointResult.error so
    one bad point does not stop the grid.
    """
    index, x, y, a, b, g_descending, omega, f, params, outer_k, prefactor = args
    started = time.perf_counter()
    try:
        request = EvaluationRequest(
            a=a,
            b=b,
            g=ComplexPolynomial.from_descending(g_descending),
            omega=omega,
            params=params,
            f=f,
        )
        result = evaluate(request)
    except NSDError as e:
        return PointResult(index, x, y, complex("nan+nanj"), error=str(e))

    value = prefactor * result.value
    if outer_k is not None:
        value = modulated_wave(value, x, outer_k)
    return PointResult(index, x, y, value, result.n_total, time.perf_counter() - started)


def build_bench_jobs(
    a: Endpoint,
    b: Endpoint,
    g: ComplexPolynomial,
    f: Any,
    omegas: Sequence[float],
    n_values: Sequence[int],
    repeats: int,
    parameters_for,
) -> List[tuple]:
    """Every (omega, N) combination, omega varying slowest; parameters_for(N) builds Parameters."""
    return [
        (a, b, tuple(g.descending()), f, float(omega), parameters_for(int(n)), int(repeats))
        for omega in omegas
        for n in n_values
    ]


def evaluate_bench_case(args: tuple) -> Tuple[float, int, complex, int, float]:
    """Average wall time of `repeats` evaluations of one (omega, N) pair."""
    a, b, g_descending, f, omega, params, repeats = args
    request = EvaluationRequest(
        a=a, b=b, g=ComplexPolynomial.from_descending(g_descending), omega=omega, params=params, f=f
    )
    elapsed = 0.0
    result = None
    for _ in range(max(repeats, 1)):
        started = time.perf_counter()
        result = evaluate(request)
        elapsed += time.perf_counter() - started
    return omega, params.n_points, result.value, result.n_total, elapsed / max(repeats, 1)


def format_value(value: complex) -> str:
    """'RE IM' with 17 significant digits."""
    return f"{value.real:.16e} {value.imag:.16e}"


def format_grid_record(result: PointResult) -> str:
    return f"{result.x!r},{result.y!r},{result.value.real:.16e},{result.value.imag:.16e}"


def format_bench_record(row: Tuple[float, int, complex, int, float]) -> str:
    omega, n, value, n_total, seconds = row
    return f"{omega!r},{n},{value.real:.16e},{value.imag:.16e},{n_total},{seconds:.6e}"


def grid_lines(results: Iterable[PointResult]) -> List[str]:
    return [GRID_HEADER] + [format_grid_record(r) for r in sorted(results, key=lambda r: r.index)]
