"""
Argument parsing for the nsdquad command line.

Coefficient lists are given highest degree first, comma separated, each
entry a Python complex literal ("1", "-0.5", "2j", "1-3j").
"""

import argparse
import math
from typing import List, Optional, Sequence, Tuple

from modules.config.strings import t
from modules.engine.amplitude import BUILTIN_AMPLITUDES, Amplitude
from modules.engine.deformation_graph import Endpoint
from modules.engine.errors import InputError
from modules.engine.parameters import TYPE2_RULES

GRID_TEMPLATES = ("pearcey", "swallowtail", "aij", "airy", "coalescence", "custom")

# Flags whose value may legitimately start with "-"
_VALUE_FLAGS = {
    "--a", "--b", "--g", "--g-x", "--g-y", "--f-poly", "--omega", "--omega-list",
    "--x-range", "--y-range", "--z", "--outer-k",
}


def parse_complex(text: str) -> complex:
    token = text.strip().replace(" ", "")
    if not token:
        raise InputError("empty number")
    try:
        value = complex(token)
    except ValueError:
        raise InputError(f"malformed number {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise InputError(f"number must be finite, got {text!r}")
    return value


def parse_coefficients(text: str) -> List[complex]:
    """'c_J,...,c_0' -> [c_J, ..., c_0]."""
    parts = text.split(",")
    if not parts or any(not part.strip() for part in parts):
        raise InputError(f"malformed coefficient list {text!r}")
    return [parse_complex(part) for part in parts]


def parse_endpoint(text: str) -> Endpoint:
    """'re,im' (or a single real) for finite points; 'inf:ANGLE' for infinite ones."""
    token = text.strip()
    if token.lower().startswith("inf:"):
        try:
            angle = float(token[4:])
        except ValueError:
            raise InputError(f"malformed infinite endpoint {text!r}") from None
        if not math.isfinite(angle):
            raise InputError(f"infinite endpoint angle must be finite, got {text!r}")
        return Endpoint.infinite(angle)
    parts = token.split(",")
    if len(parts) == 1:
        return Endpoint.finite(parse_complex(parts[0]))
    if len(parts) != 2:
        raise InputError(f"malformed endpoint {text!r}; expected 're,im' or 'inf:ANGLE'")
    try:
        return Endpoint.finite(complex(float(parts[0]), float(parts[1])))
    except ValueError:
        raise InputError(f"malformed endpoint {text!r}; expected 're,im' or 'inf:ANGLE'") from None


def parse_float_list(text: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise InputError(f"malformed number list {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise InputError(f"numbers must be finite in {text!r}")
    return values


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise InputError(f"malformed integer list {text!r}") from None


def parse_valley_pair(text: str) -> Tuple[int, int]:
    """'i,j' (or 'ij' for single digits) -> (i, j)."""
    token = text.replace(" ", "")
    parts = token.split(",") if "," in token else list(token)
    if len(parts) != 2:
        raise InputError(f"valley pair must look like 'i,j', got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise InputError(f"valley pair must look like 'i,j', got {text!r}") from None


def parse_amplitude(name: Optional[str], poly: Optional[str]) -> Amplitude:
    if poly is not None:
        return Amplitude.polynomial(parse_coefficients(poly))
    return Amplitude(name or "one")


def attach_values(argv: Sequence[str]) -> List[str]:
    """Rewrite '--flag -1,0' as '--flag=-1,0' so argparse does not read the value as an option."""
    out: List[str] = []
    items = list(argv)
    i = 0
    while i < len(items):
        token = items[i]
        if token in _VALUE_FLAGS and i + 1 < len(items) and items[i + 1].startswith("-") \
                and not items[i + 1].startswith("--"):
            out.append(f"{token}={items[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--settings", default=None, help="settings JSON file (default: data/config/settings.json)")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging and diagnostics on stderr")


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("parameter overrides")
    group.add_argument("--type2-rule", choices=TYPE2_RULES, default=None)
    group.add_argument("--c-ball", type=float, default=None)
    group.add_argument("--n-ball", type=int, default=None)
    group.add_argument("--delta-ball", type=float, default=None)
    group.add_argument("--delta-ode", type=float, default=None)
    group.add_argument("--delta-coarse", type=float, default=None)
    group.add_argument("--delta-fine", type=float, default=None)
    group.add_argument("--delta-quad", type=float, default=None)


def _add_amplitude(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--f", choices=BUILTIN_AMPLITUDES, default=None, help="builtin amplitude (default: one)")
    group.add_argument("--f-poly", default=None, help="polynomial amplitude, descending coefficients")


def _add_evaluation(parser: argparse.ArgumentParser, with_omega: bool = True, with_n: bool = True) -> None:
    parser.add_argument("--a", required=True, help="start: 're,im' or 'inf:ANGLE'")
    parser.add_argument("--b", required=True, help="end: 're,im' or 'inf:ANGLE'")
    parser.add_argument("--g", required=True, help="phase coefficients, highest degree first")
    if with_omega:
        parser.add_argument("--omega", type=float, required=True)
    if with_n:
        parser.add_argument("--N", dest="n_points", type=int, required=True)
    _add_amplitude(parser)
    _add_overrides(parser)
    _add_common(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nsdquad",
        description=t("prog_description"),
        epilog=t("coefficient_order_note"),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    eval_parser = sub.add_parser("eval", help="evaluate one integral")
    _add_evaluation(eval_parser)

    deformation = sub.add_parser("deformation", help="evaluate and write the deformation document")
    _add_evaluation(deformation)
    deformation.add_argument("--out", required=True)

    grid = sub.add_parser("grid", help="evaluate a phase template on a grid")
    grid.add_argument("--template", required=True, help=f"one of {', '.join(GRID_TEMPLATES)}")
    grid.add_argument("--x-range", required=True, help="lo:hi:n")
    grid.add_argument("--y-range", default="0:0:1", help="lo:hi:n")
    grid.add_argument("--N", dest="n_points", type=int, required=True)
    grid.add_argument("--out", required=True)
    grid.add_argument("--z", type=float, default=None, help="swallowtail slice")
    grid.add_argument("--ij", default=None, help="valley pair for aij, e.g. 3,2")
    grid.add_argument("--outer-k", type=float, default=None, help="aij: outer variables with wave number K")
    grid.add_argument("--order", type=int, default=None, help="coalescence order p")
    grid.add_argument("--g", default=None, help="custom: base coefficients")
    grid.add_argument("--g-x", default=None, help="custom: coefficients multiplying x")
    grid.add_argument("--g-y", default=None, help="custom: coefficients multiplying y")
    grid.add_argument("--a", default=None, help="custom: start endpoint")
    grid.add_argument("--b", default=None, help="custom: end endpoint")
    grid.add_argument("--omega", type=float, default=None, help="override the template frequency")
    grid.add_argument("--workers", type=int, default=None)
    _add_amplitude(grid)
    _add_overrides(grid)
    _add_common(grid)

    bench = sub.add_parser("bench", help="time evaluations over omega and N")
    _add_evaluation(bench, with_omega=False, with_n=False)
    bench.add_argument("--omega-list", required=True, help="comma separated")
    bench.add_argument("--n-list", required=True, help="comma separated")
    bench.add_argument("--repeats", type=int, default=1)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--out", default=None, help="write records here instead of stdout")

    return parser


def overrides_from(args: argparse.Namespace) -> dict:
    return {
        "type2_rule": args.type2_rule,
        "c_ball": args.c_ball,
        "n_ball": args.n_ball,
        "delta_ball": args.delta_ball,
        "delta_ode": args.delta_ode,
        "delta_coarse": args.delta_coarse,
        "delta_fine": args.delta_fine,
        "delta_quad": args.delta_quad,
    }
