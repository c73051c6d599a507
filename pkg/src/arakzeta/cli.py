from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple, TypeVar

import sympy
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress

from . import ffzeta
from .cache import DEFAULT_CACHE
from .classspace import build_grid
from .config import RunConfig, RunSettings, load_config
from .fielddata import NumberFieldData, resolve_field_spec
from .models import ArakZetaError, DomainError, InputError, InvariantViolation, VerificationStats
from .oscint import C_integral, asymptotic_ratio
from .utils import format_real, load_yaml_file, parse_complex_range
from .validation import ValidationIssue, validate_config_data
from .verifier import Verifier
from .zeta_nf import L_H1, ZetaEvalParams, zeta_normalized, zeta_Xk

LOGGER = logging.getLogger(__name__)
CONSOLE = Console()
LOG_CONSOLE = Console(stderr=True)
LOG_LEVEL_CHOICES = ["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"]
LOG_RECORD_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

ZETA_HEADER = ["s_re", "s_im", "w_re", "w_im", "value_re", "value_im", "est_error"]
NF_FUNCTIONS = {"zeta_xk": zeta_Xk, "zeta": zeta_normalized, "l_h1": L_H1}

_TRUE_VALUES = {"1", "true", "yes", "on"}
_FALSE_VALUES = {"0", "false", "no", "off"}

T = TypeVar("T")
R = TypeVar("R")


class UsageError(InputError):
    """Command line could not be parsed."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _parse_env_bool(value: Optional[str]) -> Optional[bool]:
    if value is None:
        return None
    lowered = value.strip().lower()
    if lowered in _TRUE_VALUES:
        return True
    if lowered in _FALSE_VALUES:
        return False
    return None


def _env_bool(name: str) -> Optional[bool]:
    return _parse_env_bool(os.getenv(name))


def _env_int(name: str) -> Tuple[Optional[int], bool]:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return None, False
    try:
        return int(raw), False
    except ValueError:
        return None, True


def _range_argument(text: str) -> List[complex]:
    try:
        return parse_complex_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _default_config() -> Optional[Path]:
    raw = os.getenv("ARAKZETA_CONFIG")
    return Path(raw) if raw else None


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        type=Path,
        default=_default_config(),
        help="Optional YAML settings file (default $ARAKZETA_CONFIG)",
    )
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default $ARAKZETA_THREADS or 1)")
    parser.add_argument("--grid", type=int, default=None, help="Grid points per torus dimension")
    parser.add_argument("--theta-tol", type=float, default=None, help="Tolerance of the theta series")
    parser.add_argument("--t-tol", type=float, default=None, help="Tolerance of the t-quadrature")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging on the console")
    parser.add_argument(
        "--log-level",
        choices=LOG_LEVEL_CHOICES,
        help="Log level for the log file (default INFO, or DEBUG when --verbose)",
    )
    parser.add_argument(
        "--console-level",
        choices=LOG_LEVEL_CHOICES,
        help="Log level for console output (defaults to --log-level)",
    )
    parser.add_argument("--log-file", type=Path, help="Write a log file (default $ARAKZETA_LOG_FILE, none if unset)")


def _add_output_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", type=Path, help="CSV destination (default stdout)")


def _parse_ffzeta_args(arguments: List[str]) -> argparse.Namespace:
    parser = _ArgumentParser(prog="arakzeta ffzeta", description="Exact two-variable zeta of a curve")
    parser.add_argument("--curve", required=True, help="builtin:p1:q, builtin:ell:q:N or file:path")
    parser.add_argument("--s", type=_range_argument, help="Optional s range START[:STOP:COUNT] to tabulate")
    parser.add_argument("--w", type=_range_argument, help="Optional w range START[:STOP:COUNT] to tabulate")
    _add_output_argument(parser)
    _add_common_arguments(parser)
    namespace = parser.parse_args(arguments)
    if (namespace.s is None) != (namespace.w is None):
        parser.error("--s and --w must be given together")
    return namespace


def _parse_nfzeta_args(arguments: List[str]) -> argparse.Namespace:
    parser = _ArgumentParser(prog="arakzeta nfzeta", description="Tabulate two-variable zeta values of a field")
    parser.add_argument("--field", required=True, help="builtin:Q, builtin:quad:m or file:path")
    parser.add_argument("--s", type=_range_argument, required=True, help="s range START[:STOP:COUNT]")
    parser.add_argument("--w", type=_range_argument, required=True, help="w range START[:STOP:COUNT]")
    parser.add_argument("--function", choices=sorted(NF_FUNCTIONS), default="zeta_xk", help="Function to tabulate")
    _add_output_argument(parser)
    _add_common_arguments(parser)
    return parser.parse_args(arguments)


def _parse_invariants_args(arguments: List[str]) -> argparse.Namespace:
    parser = _ArgumentParser(prog="arakzeta invariants", description="Lattice invariants a, b, nu over a grid")
    parser.add_argument("--field", required=True, help="builtin:Q, builtin:quad:m or file:path")
    _add_output_argument(parser)
    _add_common_arguments(parser)
    return parser.parse_args(arguments)


def _parse_oscint_args(arguments: List[str]) -> argparse.Namespace:
    parser = _ArgumentParser(prog="arakzeta oscint", description="C(s) and its asymptotic ratio")
    parser.add_argument("--field", required=True, help="builtin:Q, builtin:quad:m or file:path")
    parser.add_argument("--s", type=_range_argument, required=True, help="s range START[:STOP:COUNT]")
    _add_output_argument(parser)
    _add_common_arguments(parser)
    return parser.parse_args(arguments)


def _parse_regprod_args(arguments: List[str]) -> argparse.Namespace:
    parser = _ArgumentParser(prog="arakzeta regprod", description="Run the regularized-product checks")
    parser.add_argument("--curve", action="append", default=[], help="Curve for the P^1 style check (repeatable)")
    _add_common_arguments(parser)
    return parser.parse_args(arguments)


def _parse_verify_args(arguments: List[str]) -> argparse.Namespace:
    parser = _ArgumentParser(prog="arakzeta verify", description="Run the full consistency suite")
    parser.add_argument("--field", help="Field to verify (field checks are skipped without one)")
    parser.add_argument("--curve", action="append", default=[], help="Curve to verify (repeatable)")
    _add_common_arguments(parser)
    return parser.parse_args(arguments)


def _parse_validate_args(arguments: List[str]) -> argparse.Namespace:
    parser = _ArgumentParser(prog="arakzeta validate-config", description="Validate an arakzeta settings file")
    parser.add_argument(
        "--config",
        type=Path,
        default=_default_config(),
        help="Path to the YAML settings file (default $ARAKZETA_CONFIG)",
    )
    parser.add_argument("--show-trace", action="store_true", help="Print exception tracebacks when validation fails")
    namespace = parser.parse_args(arguments)
    if namespace.config is None:
        parser.error("--config is required when $ARAKZETA_CONFIG is unset")
    return namespace


_PARSERS: Dict[str, Callable[[List[str]], argparse.Namespace]] = {
    "ffzeta": _parse_ffzeta_args,
    "nfzeta": _parse_nfzeta_args,
    "invariants": _parse_invariants_args,
    "oscint": _parse_oscint_args,
    "regprod": _parse_regprod_args,
    "verify": _parse_verify_args,
    "validate-config": _parse_validate_args,
}


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    arguments = list(sys.argv[1:] if argv is None else argv)
    if not arguments or arguments[0] not in _PARSERS:
        given = arguments[0] if arguments else "nothing"
        raise UsageError(f"expected a subcommand ({', '.join(_PARSERS)}), got {given}")
    namespace = _PARSERS[arguments[0]](arguments[1:])
    namespace.command = arguments[0]
    return namespace


def _resolve_previous_log_path(log_file: Path) -> Path:
    if log_file.suffix:
        return log_file.with_suffix(f"{log_file.suffix}.previous")
    return log_file.with_name(f"{log_file.name}.previous")


def _resolve_level(name: str) -> int:
    return getattr(logging, name.upper(), logging.INFO)


def configure_logging(
    log_level_name: str,
    log_file: Optional[Path] = None,
    console_level_name: Optional[str] = None,
) -> None:
    log_level = _resolve_level(log_level_name)
    console_level = _resolve_level(console_level_name or log_level_name)

    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
        try:
            handler.close()
        except Exception:  # pragma: no cover
            pass

    formatter = logging.Formatter(LOG_RECORD_FORMAT, LOG_DATE_FORMAT)

    rotated: Optional[Path] = None
    levels = [console_level]
    if log_file is not None:
        log_file = log_file.resolve()
        log_file.parent.mkdir(parents=True, exist_ok=True)
        previous_log = _resolve_previous_log_path(log_file)
        if previous_log.exists():
            previous_log.unlink()
        if log_file.exists():
            log_file.replace(previous_log)
            rotated = previous_log
        file_handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)
        levels.append(log_level)

    plain_console_env = _env_bool("PLAIN_CONSOLE_LOGS")
    rich_console_env = _env_bool("RICH_CONSOLE_LOGS")
    if plain_console_env is True:
        use_rich_console = False
    elif rich_console_env is True:
        use_rich_console = True
    else:
        use_rich_console = LOG_CONSOLE.is_terminal

    console_handler: logging.Handler
    if use_rich_console:
        console_handler = RichHandler(console=LOG_CONSOLE, rich_tracebacks=True, markup=False)
    else:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
    console_handler.setLevel(console_level)
    root_logger.addHandler(console_handler)
    root_logger.setLevel(min(levels))

    logging.captureWarnings(True)

    if rotated is not None:
        LOGGER.debug("Rotated previous log to %s", rotated)
    if log_file is not None:
        LOGGER.info(
            "Logging to %s (file level %s, console level %s, console style %s)",
            log_file,
            logging.getLevelName(log_level),
            logging.getLevelName(console_level),
            "rich" if use_rich_console else "plain",
        )


def _override_positive_int(current: Optional[int], env_name: str, cli_value: Optional[int], name: str) -> Optional[int]:
    value = current
    env_value, invalid = _env_int(env_name)
    if invalid:
        LOGGER.warning("Invalid integer for %s: %s", env_name, os.getenv(env_name))
    if env_value is not None:
        value = env_value
    if cli_value is not None:
        value = cli_value
    if value is not None and value < 1:
        raise InputError(f"'{name}' must be a positive integer")
    return value


def apply_runtime_overrides(settings: RunSettings, args: argparse.Namespace) -> None:
    """CLI flags beat environment variables, which beat the settings file."""
    settings.threads = _override_positive_int(settings.threads, "ARAKZETA_THREADS", args.threads, "threads")
    grid = _override_positive_int(settings.grid, "ARAKZETA_GRID", args.grid, "grid")
    if grid is not None:
        settings.grid = grid

    for name in ("theta_tol", "t_tol"):
        value = getattr(args, name, None)
        if value is None:
            continue
        if not 0 < value <= 1e-3:
            raise InputError(f"'{name}' must lie in (0, 1e-3]")
        setattr(settings, name, value)

    if args.log_file:
        settings.log_file = args.log_file
    else:
        log_file_env = os.getenv("ARAKZETA_LOG_FILE")
        if log_file_env:
            settings.log_file = Path(log_file_env)


def _load_settings(args: argparse.Namespace) -> RunSettings:
    if args.config is None:
        return RunSettings()
    if not args.config.exists():
        raise InputError(f"Configuration file {args.config} does not exist")
    try:
        return load_config(args.config)
    except ValueError as exc:
        raise InputError(f"Failed to load configuration: {exc}") from exc


def _build_run_config(args: argparse.Namespace, settings: RunSettings) -> RunConfig:
    curves = getattr(args, "curve", None)
    if isinstance(curves, str):
        curves = [curves]
    try:
        return RunConfig(
            subcommand=args.command,
            settings=settings,
            field_spec=getattr(args, "field", None),
            curve_specs=list(curves or []),
            s_values=list(getattr(args, "s", None) or []),
            w_values=list(getattr(args, "w", None) or []),
            function=getattr(args, "function", "zeta_xk"),
            output=getattr(args, "output", None),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _configure_from_args(args: argparse.Namespace, settings: RunSettings) -> None:
    verbose = args.verbose
    if not verbose:
        env_verbose = _env_bool("ARAKZETA_VERBOSE")
        if env_verbose is not None:
            verbose = env_verbose

    log_level_env = os.getenv("ARAKZETA_LOG_LEVEL")
    console_level_env = os.getenv("ARAKZETA_CONSOLE_LEVEL")
    resolved_log_level = args.log_level or log_level_env or ("DEBUG" if verbose else "INFO")
    resolved_console_level: Optional[str]
    if args.console_level:
        resolved_console_level = args.console_level
    elif console_level_env:
        resolved_console_level = console_level_env
    elif verbose:
        resolved_console_level = "DEBUG"
    else:
        resolved_console_level = "WARNING"

    configure_logging(resolved_log_level.upper(), settings.log_file, resolved_console_level.upper())


def _map_rows(func: Callable[[T], R], items: Sequence[T], threads: Optional[int], label: str) -> List[R]:
    """Evaluate ``func`` over ``items`` in parallel; results keep the input order."""
    results: List[R] = []
    with Progress(console=LOG_CONSOLE, disable=not LOGGER.isEnabledFor(logging.DEBUG)) as progress:
        task_id = progress.add_task(label, total=len(items))
        with ThreadPoolExecutor(max_workers=threads or 1) as executor:
            futures = [executor.submit(func, item) for item in items]
            for future in futures:
                results.append(future.result())
                progress.advance(task_id, 1)
    return results


def _write_rows(handle: TextIO, header: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_real(value) if isinstance(value, float) else value for value in row])


def write_csv(header: Sequence[str], rows: Sequence[Sequence[object]], output: Optional[Path]) -> None:
    if output is None:
        _write_rows(sys.stdout, header, rows)
        sys.stdout.flush()
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with output.open("w", encoding="utf-8", newline="") as handle:
        _write_rows(handle, header, rows)
    LOGGER.info("Wrote %d row(s) to %s", len(rows), output)


def _complex_columns(value: complex) -> List[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def _grid_points(run: RunConfig) -> List[Tuple[complex, complex]]:
    return [(s, w) for s in run.s_values for w in run.w_values]


def _require_field(run: RunConfig) -> NumberFieldData:
    if run.field_spec is None:
        raise UsageError(f"{run.subcommand} needs --field")
    return resolve_field_spec(run.field_spec)


def run_ffzeta(run: RunConfig) -> int:
    curve = ffzeta.resolve_curve_spec(run.curve_specs[0])
    zeta = ffzeta.zeta_two_var(curve)
    summary = ffzeta.curve_summary(curve)
    polys = ffzeta.extract_P(zeta, curve.genus)
    total = sympy.collect(
        sympy.expand(sum((poly.as_expr() * ffzeta.T**i for i, poly in enumerate(polys)), sympy.Integer(0))),
        ffzeta.T,
    )
    holds, index = ffzeta.check_functional_equation(zeta, curve.genus)
    residual = ffzeta.functional_equation_residual(zeta, curve.genus)

    if run.s_values:
        rows = _map_rows(
            lambda point: _complex_columns(point[0])
            + _complex_columns(point[1])
            + _complex_columns(ffzeta.zeta_sw_ff(curve, point[0], point[1]))
            + [0.0],
            _grid_points(run),
            run.settings.threads,
            "Tabulating",
        )
        write_csv(ZETA_HEADER, rows, run.output)
        return EXIT_OK if holds and residual == 0 else EXIT_FAILURE

    CONSOLE.print(f"[bold]{summary['curve']}[/bold]")
    for i, text in enumerate(summary["P"]):
        CONSOLE.print(f"  P_{i}(u) = {text}", markup=False)
    CONSOLE.print(f"  P(T, u) = {total}", markup=False)
    CONSOLE.print(
        f"  Z(T, q) = ({summary['classical_numerator']}) / ({summary['classical_denominator']})",
        markup=False,
    )
    if holds and residual == 0:
        CONSOLE.print("[bold green]Functional equation holds exactly.[/bold green]")
        return EXIT_OK
    where = f"at P_{index}" if index is not None else f"residual {residual}"
    CONSOLE.print(f"[bold red]Functional equation fails {where}.[/bold red]")
    return EXIT_FAILURE


def run_nfzeta(run: RunConfig) -> int:
    field = _require_field(run)
    params = ZetaEvalParams.from_settings(field, run.settings)
    func = NF_FUNCTIONS[run.function]
    LOGGER.info("Tabulating %s over %d point(s) for %s", run.function, len(_grid_points(run)), field)

    def evaluate(point: Tuple[complex, complex]) -> List[float]:
        s, w = point
        result = func(field, params, s, w)
        return _complex_columns(s) + _complex_columns(w) + _complex_columns(result.value) + [float(result.est_error)]

    rows = _map_rows(evaluate, _grid_points(run), run.settings.threads, "Tabulating")
    write_csv(ZETA_HEADER, rows, run.output)
    return EXIT_OK


def run_invariants(run: RunConfig) -> int:
    field = _require_field(run)
    grid = build_grid(field, run.settings.grid)
    invariants = DEFAULT_CACHE.invariants(field, grid, run.settings.band, run.settings.threads)
    header = ["class_index"] + [f"theta_{i + 1}" for i in range(field.unit_rank_r)] + ["weight", "a", "b", "nu"]
    weights = [weight for entries in grid.classes for _, weight in entries]
    rows = [
        [
            point.class_index,
            *(float(value) for value in point.theta),
            float(weight),
            float(item.a),
            float(item.b),
            item.nu,
        ]
        for point, weight, item in zip(grid.points, weights, invariants)
    ]
    write_csv(header, rows, run.output)
    return EXIT_OK


def run_oscint(run: RunConfig) -> int:
    field = _require_field(run)
    grid = build_grid(field, run.settings.grid)
    # fill the cache once so rows only reduce over cached invariants
    DEFAULT_CACHE.invariants(field, grid, run.settings.band, run.settings.threads)

    def evaluate(s: complex) -> List[float]:
        value = C_integral(field, grid, s, band=run.settings.band)
        ratio = asymptotic_ratio(field, grid, s, band=run.settings.band)
        return _complex_columns(s) + _complex_columns(value) + _complex_columns(ratio)

    rows = _map_rows(evaluate, run.s_values, run.settings.threads, "Integrating")
    write_csv(["s_re", "s_im", "C_re", "C_im", "ratio_re", "ratio_im"], rows, run.output)
    return EXIT_OK


def _print_stats(title: str, stats: VerificationStats) -> None:
    CONSOLE.print(f"[bold]{title}[/bold]: {stats.passed} passed, {stats.failed} failed, {stats.errored} errored")
    if stats.failures:
        CONSOLE.print(f"[bold red]{len(stats.failures)} check(s) did not pass:[/bold red]")
        for item in stats.failures:
            CONSOLE.print(f"  • {item}", markup=False)
    else:
        CONSOLE.print("[bold green]All checks passed.[/bold green]")
    if stats.warnings:
        CONSOLE.print(f"[yellow]{len(stats.warnings)} warning(s):[/yellow]")
        for item in stats.warnings:
            CONSOLE.print(f"  • {item}", markup=False)


def _curves(run: RunConfig) -> Optional[List[ffzeta.CurveData]]:
    if not run.curve_specs:
        return None
    return [ffzeta.resolve_curve_spec(spec) for spec in run.curve_specs]


def run_regprod(run: RunConfig) -> int:
    verifier = Verifier(run.settings, curves=_curves(run))
    stats = verifier.run(groups={"regprod"})
    _print_stats("Regularized products", stats)
    return EXIT_OK if stats.all_passed else EXIT_FAILURE


def run_verify(run: RunConfig) -> int:
    field = resolve_field_spec(run.field_spec) if run.field_spec else None
    verifier = Verifier(run.settings, field=field, curves=_curves(run))
    stats = verifier.run()
    _print_stats(f"Verification ({field})" if field is not None else "Verification", stats)
    return EXIT_OK if stats.all_passed else EXIT_FAILURE


def run_validate_config(args: argparse.Namespace) -> int:
    config_path: Path = args.config
    if not config_path.exists():
        CONSOLE.print(f"[bold red]Configuration file not found: {config_path}[/bold red]")
        return EXIT_FAILURE

    try:
        data = load_yaml_file(config_path)
    except Exception as exc:  # noqa: BLE001
        CONSOLE.print(f"[bold red]Failed to load configuration: {exc}[/bold red]")
        if getattr(args, "show_trace", False):
            CONSOLE.print(traceback.format_exc(), style="dim")
        return EXIT_FAILURE

    report = validate_config_data(data)

    if report.is_valid:
        try:
            load_config(config_path)
        except Exception as exc:  # noqa: BLE001
            report.errors.append(
                ValidationIssue(
                    severity="error",
                    path="<load_config>",
                    message=f"{type(exc).__name__}: {exc}",
                    code="load-config",
                )
            )
            if getattr(args, "show_trace", False):
                CONSOLE.print(traceback.format_exc(), style="dim")

    if report.errors:
        CONSOLE.print(f"[bold red]{len(report.errors)} validation error(s) detected:[/bold red]")
        for issue in report.errors:
            CONSOLE.print(f"  • [bold]{issue.path}[/bold]: {issue.message} ({issue.code})")
    else:
        CONSOLE.print("[bold green]Configuration passed validation.[/bold green]")

    if report.warnings:
        CONSOLE.print(f"[yellow]{len(report.warnings)} warning(s):[/yellow]")
        for issue in report.warnings:
            CONSOLE.print(f"  • [bold]{issue.path}[/bold]: {issue.message} ({issue.code})")

    return EXIT_OK if report.is_valid else EXIT_FAILURE


_HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "ffzeta": run_ffzeta,
    "nfzeta": run_nfzeta,
    "invariants": run_invariants,
    "oscint": run_oscint,
    "regprod": run_regprod,
    "verify": run_verify,
}


def _execute(args: argparse.Namespace) -> int:
    if args.command == "validate-config":
        return run_validate_config(args)
    settings = _load_settings(args)
    apply_runtime_overrides(settings, args)
    _configure_from_args(args, settings)
    run = _build_run_config(args, settings)
    return _HANDLERS[run.subcommand](run)


def emit_error(kind: str, message: str) -> None:
    """One JSON object per line on stderr, for callers that parse failures."""
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    sys.stderr.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
        return _execute(args)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except InvariantViolation as exc:
        LOGGER.debug("Invariant check failed", exc_info=True)
        emit_error(type(exc).__name__, str(exc))
        return EXIT_FAILURE
    except (InputError, DomainError) as exc:
        LOGGER.debug("Usage or input failure", exc_info=True)
        emit_error(type(exc).__name__, str(exc))
        return EXIT_USAGE
    except ArakZetaError as exc:
        LOGGER.debug("Computation failed", exc_info=True)
        emit_error(type(exc).__name__, str(exc))
        return EXIT_FAILURE
    except KeyboardInterrupt:
        emit_error("Interrupted", "interrupted by user")
        return EXIT_FAILURE
    except Exception as exc:  # noqa: BLE001
        LOGGER.exception("Unexpected failure: %s", exc)
        emit_error(type(exc).__name__, str(exc))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
