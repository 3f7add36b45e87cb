#!/usr/bin/env python3
"""
Command-line interface for the Hadamard duality tools.
Thin wrapper around backend.core: validate systems, search extreme cycles,
scan admissibility, evaluate mu-hat and sigma, estimate densities, emit
attractor point clouds and rerun the reference checks.
"""

import argparse
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

from backend.core.algebra import parse_rational
from backend.core.cycles.admissibility import (
    geometric_instance, odd_values, scan_admissibility
)
from backend.core.cycles.detection import spectral_report
from backend.core.density import beurling_lower_estimate, gamma1, gamma1_windows
from backend.core.fourier.gamma import attractor_points
from backend.core.fourier.spectral import sigma_partial
from backend.core.fourier.transforms import cantor_closed_form, mu_hat
from backend.core.reproduce import CLAIMS, ReproduceContext, run_claims
from backend.core.system.hadamard import HadamardSystem
from backend.core.system.io import load_system
from backend.core.tables import cycles_frame, density_frame, frame_to_csv, points_frame, scan_frame
from backend.models.results import CycleSearchConfig, SearchMode, Side
from backend.utils.config import (
    CONVENTION_NP_HALF, CONVENTION_P, DEFAULT_MAX_WORD_LENGTH, DEFAULT_MUHAT_TOL,
    DEFAULT_SIGMA_TOL, L_CONVENTIONS, get_settings
)
from backend.utils.exceptions import ConfigurationError, HadamardToolsError, ValidationError
from backend.utils.formatting import format_float, format_point
from backend.utils.logging import configure_logging, get_logger, resolve_level

logger = get_logger("cli.hadamard")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

FORMATS = ("csv", "json", "text")


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    """Parsed command line merged with an optional JSON config file."""
    command: str
    system: Optional[Path] = None
    output: Optional[Path] = None
    format: str = "csv"
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """
        Build the run configuration; values in --config replace options
        still at their defaults, so the command line wins.

        Raises:
            ValidationError: On unknown keys in the config file
            ConfigurationError: If the config file cannot be read
        """
        command_parser = args.command_parser
        values = {
            k: v for k, v in vars(args).items()
            if k not in ("command", "command_parser", "config", "verbose", "quiet")
        }
        if args.config:
            try:
                with open(args.config, "r", encoding="utf-8") as f:
                    overrides = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigurationError(f"Cannot read config file {args.config}: {e}") from e
            if not isinstance(overrides, dict):
                raise ValidationError("A config file must hold a JSON object")
            unknown = sorted(set(overrides) - set(values))
            if unknown:
                raise ValidationError(f"Unknown config key(s) for '{args.command}': {', '.join(unknown)}")
            for key, value in overrides.items():
                if values[key] == command_parser.get_default(key):
                    values[key] = value
        return cls(
            command=args.command,
            system=Path(values.pop("system")) if values.get("system") else None,
            output=Path(values.pop("output")) if values.get("output") else None,
            format=values.pop("format", None) or "csv",
            params=values,
        )


def _side(value: str) -> Side:
    try:
        return Side(value.upper())
    except ValueError as e:
        raise ValidationError(f"Side must be B or L, got {value!r}") from e


def _point(value: Any):
    """A scalar "num/den" or a comma-separated vector."""
    if isinstance(value, (list, tuple)):
        return [parse_rational(v) for v in value]
    text = str(value)
    if "," in text:
        return [parse_rational(v) for v in text.strip("()").split(",")]
    return parse_rational(text)


def _load(config: RunConfig) -> HadamardSystem:
    if config.system is None:
        raise ValidationError("This command needs a system file")
    return load_system(config.system).require()


def _emit(config: RunConfig, csv_text: Optional[str], payload: Any, table: Optional[Table] = None) -> None:
    """Write the command result in the requested format to --output or stdout."""
    if config.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif config.format == "text" and table is not None:
        buffer = io.StringIO()
        Console(file=buffer, width=120, color_system=None).print(table)
        text = buffer.getvalue()
    else:
        text = csv_text if csv_text is not None else json.dumps(payload, indent=2) + "\n"
    if config.output:
        config.output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {config.output}")
    else:
        sys.stdout.write(text)


def _frame_table(title: str, frame) -> Table:
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column))
    for row in frame.itertuples(index=False):
        table.add_row(*[str(v) for v in row])
    return table


def cmd_validate(config: RunConfig) -> int:
    """Validate a system file; exit 0 iff every check passes."""
    report = load_system(config.system)
    table = Table(title=f"Validation of {config.system.name}")
    table.add_column("check")
    table.add_column("detail")
    table.add_column("pair")
    for failure in report.failures:
        table.add_row(failure.check, failure.detail, " / ".join(failure.pair or ()))
    if report.ok:
        table.add_row("ok", "all checks passed", "")
    for note in report.notes:
        logger.warning(note)
    _emit(config, json.dumps(report.to_dict(), indent=2) + "\n", report.to_dict(), table)
    if not report.ok:
        for failure in report.failures:
            logger.error(f"{failure.check}: {failure.detail}")
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_cycles(config: RunConfig) -> int:
    """Extreme cycles and the basis verdict for one side of a system."""
    system = _load(config)
    params = config.params
    side = _side(params["side"])
    mode = SearchMode(params["mode"] or (SearchMode.LATTICE.value if system.d == 1 else SearchMode.WORDS.value))
    settings = get_settings()
    search = CycleSearchConfig(
        mode=mode,
        max_word_length=int(params["max_word_len"]),
        node_cap=settings.node_cap,
    )
    report = spectral_report(
        system, side, search,
        assume_sufficient=bool(params["assume_sufficient"]),
        sigma_level=params["sigma_level"],
    )
    frame = cycles_frame(report.cycles)
    logger.info(f"{len(report.cycles)} non-trivial cycle(s); verdict {report.verdict.value}")
    _emit(config, frame_to_csv(frame), report.to_dict(), _frame_table(f"Cycles ({report.verdict.value})", frame))
    return EXIT_OK


def cmd_scan(config: RunConfig) -> int:
    """Admissibility scan over p for R = 2n, B = {0, 2}."""
    params = config.params
    R = int(params["R"])
    convention = params["L_convention"]
    if params["geometric_instance"]:
        n = int(params["geometric_instance"])
        p, length = geometric_instance(n)
        R, convention, p_values = 2 * n, CONVENTION_NP_HALF, [p]
        logger.info(f"Geometric instance n={n}: p={p}, predicted length {length}")
    elif params["powers_of"]:
        base = int(params["powers_of"])
        p_values = [base ** k for k in range(int(params["k_max"]) + 1)]
    elif params["p_values"]:
        raw = params["p_values"]
        items = raw if isinstance(raw, list) else str(raw).split(",")
        p_values = [parse_rational(p) for p in items]
    else:
        p_values = odd_values(int(params["p_max"]))
    workers = int(params["workers"]) if params["workers"] else get_settings().workers
    rows = scan_admissibility(R, p_values, convention, workers=workers)
    frame = scan_frame(rows)
    _emit(config, frame_to_csv(frame), [r.to_dict() for r in rows], _frame_table(f"Scan R={R}", frame))
    return EXIT_FAILURE if any(r.error for r in rows) else EXIT_OK


def cmd_sigma(config: RunConfig) -> int:
    system = _load(config)
    params = config.params
    sample = sigma_partial(system, _side(params["side"]), _point(params["t"]), int(params["level"]),
                           float(params["tol"]))
    payload = sample.to_dict()
    table = Table(title="sigma")
    for key in payload:
        table.add_column(key)
    table.add_row(*[str(v) for v in payload.values()])
    _emit(config, None, payload, table)
    return EXIT_OK


def cmd_muhat(config: RunConfig) -> int:
    system = _load(config)
    params = config.params
    t = _point(params["t"])
    result = mu_hat(system, _side(params["side"]), t, float(params["tol"]))
    payload = result.to_dict()
    payload["t"] = format_point(t) if not isinstance(t, list) else "(" + ",".join(str(x) for x in t) + ")"
    if params["closed_form"]:
        if isinstance(t, list):
            raise ValidationError("The closed form applies to dimension one only")
        deviation = abs(result.value - cantor_closed_form(float(t)))
        payload["closed_form_deviation"] = format_float(deviation)
    table = Table(title="mu-hat")
    for key in payload:
        table.add_column(key)
    table.add_row(*[str(v) for v in payload.values()])
    _emit(config, None, payload, table)
    return EXIT_OK


def cmd_density(config: RunConfig) -> int:
    """Window counts of q Gamma({0,1}, 4) on the windows q(4^n - 1)/3."""
    params = config.params
    set_name = str(params["set"])
    if set_name == "gamma1":
        q = Fraction(1)
    elif set_name.startswith("scaled:"):
        q = parse_rational(set_name.split(":", 1)[1])
        if q <= 0 or q.denominator != 1:
            raise ValidationError(f"Scaling factor must be a positive integer, got {q}")
    else:
        raise ValidationError(f"--set must be gamma1 or scaled:q, got {set_name!r}")
    n_max = int(params["n_max"])
    if n_max < 1:
        raise ValidationError("--n-max must be at least 1")
    estimate = beurling_lower_estimate(gamma1(n_max - 1, q), float(parse_rational(params["alpha"])),
                                       gamma1_windows(n_max, q))
    frame = density_frame(estimate)
    logger.info(f"Largest ratio {format_float(estimate.lower_bound)}, last ratio {format_float(estimate.tail_ratio)}")
    _emit(config, frame_to_csv(frame), estimate.to_dict(), _frame_table("Density", frame))
    return EXIT_OK


def cmd_attractor(config: RunConfig) -> int:
    """Point cloud of X(B) (side B) or X(L) (side L) to a given depth."""
    system = _load(config)
    side = _side(config.params["side"])
    digits = system.measure_digits(side)
    points = attractor_points(digits, system.scale(side.other), int(config.params["depth"]))
    frame = points_frame(points)
    _emit(config, frame_to_csv(frame), [format_point(p) for p in points], _frame_table("Attractor", frame))
    return EXIT_OK


def cmd_reproduce(config: RunConfig) -> int:
    """Run the claim inventory; exit 0 iff every claim holds."""
    params = config.params
    if params["list"]:
        table = Table(title="Claims")
        table.add_column("name")
        table.add_column("description")
        for claim in CLAIMS:
            table.add_row(claim.name, claim.description)
        text = "".join(f"{c.name}\t{c.description}\n" for c in CLAIMS)
        _emit(config, text, [{"name": c.name, "description": c.description} for c in CLAIMS], table)
        return EXIT_OK
    context = ReproduceContext(workers=get_settings().workers)
    if params["fixture"]:
        context.fixture_path = Path(params["fixture"])
    names = params["claim"] or None
    results = run_claims(names, context)
    table = Table(title="Reproduction")
    table.add_column("claim")
    table.add_column("result")
    table.add_column("detail")
    for r in results:
        table.add_row(r.name, "pass" if r.passed else "FAIL", r.detail)
    text = "".join(f"{r.name}\t{'pass' if r.passed else 'FAIL'}\t{r.detail}\n" for r in results)
    _emit(config, text, [r.to_dict() for r in results], table)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


COMMANDS = {
    "validate": cmd_validate,
    "cycles": cmd_cycles,
    "scan": cmd_scan,
    "sigma": cmd_sigma,
    "muhat": cmd_muhat,
    "density": cmd_density,
    "attractor": cmd_attractor,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(description="Hadamard systems, extreme cycles and spectral functions")
    common = _Parser(add_help=False)
    common.add_argument("--output", help="Write the result to this file instead of stdout")
    common.add_argument("--format", choices=FORMATS, default=None, help="Output format (default: csv)")
    common.add_argument("--config", help="JSON file with option values")
    common.add_argument("--verbose", action="store_true", help="Enable debug logging")
    common.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Validate a system file")
    p.add_argument("system", help="System JSON file")

    p = sub.add_parser("cycles", parents=[common], help="Find extreme cycles and decide the basis question")
    p.add_argument("system", help="System JSON file")
    p.add_argument("--side", default="B", help="B: Gamma(L) for mu_B; L: Gamma(B) for mu_L")
    p.add_argument("--mode", choices=[m.value for m in SearchMode], default=None)
    p.add_argument("--max-word-len", dest="max_word_len", type=int, default=DEFAULT_MAX_WORD_LENGTH)
    p.add_argument("--assume-sufficient", dest="assume_sufficient", action="store_true",
                   help="Treat the cycle condition as sufficient in dimension > 1")
    p.add_argument("--sigma-level", dest="sigma_level", type=int, default=None,
                   help="Attach sigma partial sums at the cycle points")

    p = sub.add_parser("scan", parents=[common], help="Admissibility scan over p")
    p.add_argument("--R", dest="R", type=int, default=4)
    p.add_argument("--L-convention", dest="L_convention", choices=L_CONVENTIONS, default=CONVENTION_P)
    p.add_argument("--p-max", dest="p_max", type=int, default=100)
    p.add_argument("--p-values", dest="p_values", default=None, help="Comma-separated values of p")
    p.add_argument("--powers-of", dest="powers_of", type=int, default=None)
    p.add_argument("--k-max", dest="k_max", type=int, default=5)
    p.add_argument("--geometric-instance", dest="geometric_instance", type=int, default=None,
                   help="Scan the single p = sum (2n)^i with R = 2n")
    p.add_argument("--workers", type=int, default=None, help="Worker processes (default: HADAMARD_WORKERS or 1)")

    for name, default_tol in (("sigma", DEFAULT_SIGMA_TOL), ("muhat", DEFAULT_MUHAT_TOL)):
        p = sub.add_parser(name, parents=[common], help=f"Evaluate {name}")
        p.add_argument("system", help="System JSON file")
        p.add_argument("--side", default="B")
        p.add_argument("--t", required=True, help="Point: a rational or comma-separated coordinates")
        p.add_argument("--tol", type=float, default=default_tol)
        if name == "sigma":
            p.add_argument("--level", type=int, default=6)
        else:
            p.add_argument("--closed-form", dest="closed_form", action="store_true",
                           help="Compare with the cosine product for R=4, B={0,2}")

    p = sub.add_parser("density", parents=[common], help="Beurling density estimate")
    p.add_argument("--set", default="gamma1", help="gamma1 or scaled:q")
    p.add_argument("--alpha", default="1/2")
    p.add_argument("--n-max", dest="n_max", type=int, default=10)

    p = sub.add_parser("attractor", parents=[common], help="Attractor point cloud")
    p.add_argument("system", help="System JSON file")
    p.add_argument("--side", default="B", help="B: X(B); L: X(L)")
    p.add_argument("--depth", type=int, default=6)

    p = sub.add_parser("reproduce", parents=[common], help="Recompute the reference tables, cycles and identities")
    p.add_argument("--list", action="store_true", help="List the claims and exit")
    p.add_argument("--fixture", default=None, help="Golden cycle table to compare with")
    p.add_argument("--claim", action="append", default=None, help="Run only this claim (repeatable)")

    for command_parser in sub.choices.values():
        command_parser.set_defaults(command_parser=command_parser)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point; returns the exit code."""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE

    try:
        settings = get_settings()
    except ConfigurationError as e:
        sys.stderr.write(f"configuration error: {e}\n")
        return EXIT_USAGE
    configure_logging(level=resolve_level(args.verbose, args.quiet, settings.log_level))

    try:
        config = RunConfig.from_args(args)
        return COMMANDS[config.command](config)
    except (ValidationError, ConfigurationError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except HadamardToolsError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
