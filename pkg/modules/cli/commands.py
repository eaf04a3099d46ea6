"""
Command handlers for the nsdquad command line.

Each run_* takes parsed arguments and returns an exit code:
0 on success, 2 on input errors, 3 on numerical failures.
"""

import argparse
import sys
import traceback
from dataclasses import replace
from typing import Optional, Sequence, TextIO

from modules.cli.arguments import (
    GRID_TEMPLATES,
    attach_values,
    build_parser,
    overrides_from,
    parse_amplitude,
    parse_coefficients,
    parse_endpoint,
    parse_float_list,
    parse_int_list,
    parse_valley_pair,
)
from modules.cli.deformation_writer import write_document
from modules.config.settings import Settings, load_settings
from modules.config.strings import get_strings, t
from modules.engine.errors import InputError, NSDError, NumericalFailure
from modules.engine.evaluator import EvaluationRequest, EvaluationResult, evaluate
from modules.engine.grid_processor import GridProcessor
from modules.engine.polynomial import ComplexPolynomial
from modules.engine.processor_utils import build_bench_jobs, build_grid_jobs, format_value, parse_axis
from modules.engine.templates import PhaseTemplate, coalescence_template, load_phase_template
from modules.utils.log_utils import configure_logging, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _settings(args: argparse.Namespace) -> Settings:
    if args.settings:
        return load_settings(args.settings)
    return load_settings()


def build_request(args: argparse.Namespace, settings: Settings) -> EvaluationRequest:
    """Map evaluation flags onto an EvaluationRequest; validation happens here, before any computation."""
    params = settings.parameters(args.n_points, **overrides_from(args)).validate()
    return EvaluationRequest(
        a=parse_endpoint(args.a),
        b=parse_endpoint(args.b),
        g=ComplexPolynomial.from_descending(parse_coefficients(args.g)),
        omega=args.omega,
        params=params,
        f=parse_amplitude(args.f, args.f_poly),
    )


def _print_diagnostics(result: EvaluationResult, stream: TextIO) -> None:
    print(t("diag_header"), file=stream)
    for key, value in result.summary().items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(t("diag_line", key=key, value=value), file=stream)


def run_eval(args: argparse.Namespace, settings: Settings) -> int:
    request = build_request(args, settings)
    result = evaluate(request)
    print(format_value(result.value))
    if args.verbose:
        _print_diagnostics(result, sys.stderr)
    return EXIT_OK


def run_deformation(args: argparse.Namespace, settings: Settings) -> int:
    ok, message = GridProcessor.validate_output_path(args.out)
    if not ok:
        raise InputError(message)
    request = build_request(args, settings)
    result = evaluate(request, keep_nodes=True)
    write_document(args.out, request, result)
    print(format_value(result.value))
    if args.verbose:
        _print_diagnostics(result, sys.stderr)
    logger.info(get_strings().written(args.out))
    return EXIT_OK


def _grid_template(args: argparse.Namespace) -> PhaseTemplate:
    if args.template not in GRID_TEMPLATES:
        raise InputError(t("error_unknown_template", name=args.template, available=", ".join(GRID_TEMPLATES)))
    if args.template == "custom":
        if args.g is None:
            raise InputError("custom template needs --g")
        endpoints = (
            parse_endpoint(args.a) if args.a else parse_endpoint("-1,0"),
            parse_endpoint(args.b) if args.b else parse_endpoint("1,0"),
        )
        return PhaseTemplate.custom(
            parse_coefficients(args.g),
            parse_coefficients(args.g_x) if args.g_x else (),
            parse_coefficients(args.g_y) if args.g_y else (),
            endpoints=endpoints,
            omega=args.omega if args.omega is not None else 1.0,
        )
    if args.template == "coalescence" and args.order is not None:
        return coalescence_template(args.order)
    return load_phase_template(args.template)


def run_grid(args: argparse.Namespace, settings: Settings) -> int:
    template = _grid_template(args)
    if args.omega is not None and template.name != "custom":
        template = replace(template, omega=float(args.omega))
    ok, message = GridProcessor.validate_output_path(args.out)
    if not ok:
        raise InputError(message)

    x_axis, y_axis = parse_axis(args.x_range), parse_axis(args.y_range)
    params = settings.parameters(args.n_points, **overrides_from(args)).validate()
    fixed = {"z": args.z} if args.z is not None else {}
    valleys = parse_valley_pair(args.ij) if args.ij else None
    if args.outer_k is not None and template.name != "aij":
        raise InputError("--outer-k applies to the aij template only")

    jobs = build_grid_jobs(
        template, x_axis, y_axis, params,
        f=parse_amplitude(args.f, args.f_poly),
        fixed=fixed,
        valleys=valleys,
        outer_k=args.outer_k,
    )

    strings = get_strings()
    step = max(1, len(jobs) // 10)

    def progress(percent: float, done: int, total: int) -> None:
        if done % step == 0 or done == total:
            logger.info(strings.grid_progress(done, total))

    processor = GridProcessor(
        max_workers=args.workers if args.workers is not None else settings.max_workers,
        chunksize=settings.grid_chunksize,
    )
    results = processor.run(jobs, progress=progress)
    processor.write_grid(args.out, results)
    logger.info(strings.written(args.out))

    failed = sum(1 for r in results if not r.ok)
    if failed:
        print(t("error_numerical", error=f"{failed} of {len(results)} grid points failed"), file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def run_bench(args: argparse.Namespace, settings: Settings) -> int:
    if args.out:
        ok, message = GridProcessor.validate_output_path(args.out)
        if not ok:
            raise InputError(message)
    omegas = parse_float_list(args.omega_list)
    n_values = parse_int_list(args.n_list)
    if args.repeats < 1:
        raise InputError("--repeats must be at least 1")
    overrides = overrides_from(args)
    for n in n_values:
        settings.parameters(n, **overrides).validate()

    jobs = build_bench_jobs(
        parse_endpoint(args.a),
        parse_endpoint(args.b),
        ComplexPolynomial.from_descending(parse_coefficients(args.g)),
        parse_amplitude(args.f, args.f_poly),
        omegas,
        n_values,
        args.repeats,
        lambda n: settings.parameters(n, **overrides),
    )
    processor = GridProcessor(max_workers=args.workers, chunksize=1)
    lines = processor.bench_lines(processor.bench(jobs))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "eval": run_eval,
    "grid": run_grid,
    "deformation": run_deformation,
    "bench": run_bench,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the chosen command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(attach_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    settings = _settings(args)
    configure_logging("DEBUG" if args.verbose else settings.log_level)

    try:
        return COMMANDS[args.command](args, settings)
    except InputError as e:
        print(get_strings().input_error(e), file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        return EXIT_INPUT
    except NumericalFailure as e:
        print(get_strings().numerical_error(e), file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        return EXIT_NUMERICAL
    except NSDError as e:
        print(get_strings().numerical_error(e), file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as e:
        print(t("error_output_path", error=e), file=sys.stderr)
        return EXIT_INPUT
