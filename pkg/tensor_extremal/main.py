#!/usr/bin/env python3
"""
Command-line interface for pattern avoidance in t-dimensional 0-1 matrices.

Every subcommand reads tensors in the JSON tensor format, runs one library
operation and writes a JSON report (or a flattened CSV view) to standard
output. Logging and progress go to standard error. ``verify-suite`` runs the
registered properties and exits with 1 when any of them fails.
"""

import argparse
import asyncio
import csv
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from tensor_extremal import config
from tensor_extremal.constants import (
    EXIT_OK,
    EXIT_PROPERTY_VIOLATION,
    EXIT_RESOURCE_CAP,
    EXIT_USAGE,
    OUTPUT_FORMATS,
)
from tensor_extremal.containment import search_embedding
from tensor_extremal.division import (
    division_total,
    find_full_division,
)
from tensor_extremal.exceptions import (
    ConfigurationError,
    InvalidArgumentError,
    InvariantViolation,
    ResourceCapError,
    SearchBudgetExceeded,
    TensorExtremalError,
    TensorFormatError,
)
from tensor_extremal.extremal import (
    SearchReport,
    alpha,
    count_avoiders,
    extremal_pattern,
    klazar_check,
    recursion_step,
)
from tensor_extremal.latin import latin_count, latin_count_avoiders
from tensor_extremal.pattern import classification_report
from tensor_extremal.properties import PROPERTIES, PropertyResult, SuiteConfig, run_suite
from tensor_extremal.shadow import (
    cascade_representation,
    corollary_entry_bound,
    face_counts,
    shadow_check,
    shadow_upper_bound,
)
from tensor_extremal.utils import (
    division_to_json,
    dumps_tensor,
    load_tensor,
    tensor_to_json,
    write_counterexample,
)
from tensor_extremal.utils.cache import get_cache_key, get_from_cache, save_to_cache

log = logging.getLogger(__name__)
console = Console(stderr=True)

COMMANDS = (
    "classify",
    "contains",
    "divisions",
    "shadow",
    "extremal",
    "count",
    "klazar",
    "alpha",
    "latin",
    "recursion",
    "verify-suite",
)


def setup_logging(level: str = "INFO") -> None:
    """Configure logging using RichHandler on standard error.

    Args:
        level (str): Logging level (e.g., "INFO", "DEBUG").
    """
    log_level = getattr(logging, level.upper(), logging.INFO)
    logger = logging.getLogger()
    logger.setLevel(log_level)

    # Remove existing handlers to avoid duplicate messages
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    rich_handler = RichHandler(
        console=console,
        rich_tracebacks=True,
        markup=True,
    )
    logger.addHandler(rich_handler)
    log.debug("Logging setup complete.")


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one CLI invocation."""

    command: str
    matrix: Optional[Path] = None
    pattern: Optional[Path] = None
    n: Optional[int] = None
    t: Optional[int] = None
    k: Optional[int] = None
    p: Optional[int] = None
    budget: Optional[int] = None
    cap_cells: int = config.DEFAULT_CAP_CELLS
    cap_divisions: int = config.DEFAULT_DIVISION_CAP
    latin_reach: Optional[int] = None
    output_format: str = "json"
    threads: int = config.DEFAULT_THREADS
    seed: int = config.DEFAULT_SEED
    output: Optional[Path] = None
    find_full: bool = False
    cascade: Optional[Tuple[int, int, int]] = None
    quick: bool = False
    properties: Tuple[str, ...] = field(default_factory=tuple)
    use_cache: bool = config.USE_CACHE

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Build and validate a config from parsed arguments.

        Raises:
            InvalidArgumentError: If a numeric parameter is out of range or a
                required input for the subcommand is missing.
        """
        cfg = cls(
            command=args.command,
            matrix=getattr(args, "matrix", None),
            pattern=getattr(args, "pattern", None),
            n=getattr(args, "n", None),
            t=getattr(args, "t", None),
            k=getattr(args, "k", None),
            p=getattr(args, "p", None),
            budget=args.budget,
            cap_cells=args.cap_cells,
            cap_divisions=args.cap_divisions,
            latin_reach=getattr(args, "latin_reach", None),
            output_format=args.format,
            threads=args.threads,
            seed=args.seed,
            output=args.output,
            find_full=getattr(args, "find_full", False),
            cascade=tuple(args.cascade) if getattr(args, "cascade", None) else None,
            quick=getattr(args, "quick", False),
            properties=tuple(getattr(args, "property", None) or ()),
            use_cache=config.USE_CACHE and not args.no_cache,
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("n", "t", "k", "p", "budget", "latin_reach"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise InvalidArgumentError(f"--{name.replace('_', '-')} must be >= 1, got {value}.")
        if self.threads < 1:
            raise InvalidArgumentError(f"--threads must be >= 1, got {self.threads}.")
        if self.cap_cells < 1 or self.cap_divisions < 1:
            raise InvalidArgumentError("Caps must be >= 1.")
        if self.cap_cells > config.DEFAULT_CAP_CELLS:
            log.warning(
                f"Cell enumeration cap raised from {config.DEFAULT_CAP_CELLS} to {self.cap_cells}"
            )
        if self.cap_divisions > config.DEFAULT_DIVISION_CAP:
            log.warning(
                f"Division cap raised from {config.DEFAULT_DIVISION_CAP} to {self.cap_divisions}"
            )
        unknown = sorted(set(self.properties) - set(PROPERTIES))
        if unknown:
            raise InvalidArgumentError(f"Unknown properties: {', '.join(unknown)}.")

        required = {
            "contains": ("matrix", "pattern"),
            "divisions": ("matrix", "k"),
            "extremal": ("n", "pattern"),
            "count": ("n", "pattern"),
            "klazar": ("n", "pattern"),
            "alpha": ("t", "k"),
            "latin": ("n", "t"),
            "recursion": ("t", "k"),
        }
        for name in required.get(self.command, ()):
            if getattr(self, name) is None:
                raise InvalidArgumentError(f"'{self.command}' needs --{name}.")
        if self.command == "classify" and self.matrix is None and self.pattern is None:
            raise InvalidArgumentError("'classify' needs --input or --pattern.")
        if self.command == "shadow" and self.matrix is None and self.cascade is None:
            raise InvalidArgumentError("'shadow' needs --matrix or --cascade M K T.")


def _rational(value: Fraction) -> Any:
    """Integers stay JSON numbers; other rationals become ``"num/den"`` strings."""
    return value.numerator if value.denominator == 1 else str(value)


def report_from_search(report: SearchReport) -> Dict[str, Any]:
    return {
        "value": report.value,
        "witness": tensor_to_json(report.witness) if report.witness is not None else None,
        "nodes_explored": report.nodes_explored,
        "exact": report.exact,
    }


# --- Subcommand handlers ---


def _run_classify(cfg: RunConfig) -> Dict[str, Any]:
    source = cfg.pattern or cfg.matrix
    assert source is not None
    return classification_report(load_tensor(source))


def _run_contains(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.matrix is not None and cfg.pattern is not None
    search = search_embedding(load_tensor(cfg.matrix), load_tensor(cfg.pattern), cfg.budget)
    witness = search.embedding.as_lists() if search.embedding is not None else None
    return {"contains": search.contains, "witness": witness, "nodes": search.nodes}


def _run_divisions(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.matrix is not None and cfg.k is not None
    M = load_tensor(cfg.matrix)
    report: Dict[str, Any] = {
        "count": division_total(M.shape, cfg.k),
        "full_found": None,
        "division": None,
    }
    if cfg.find_full:
        D = find_full_division(M, cfg.k, cfg.cap_divisions)
        report["full_found"] = D is not None
        report["division"] = division_to_json(D) if D is not None else None
    return report


def _run_shadow(cfg: RunConfig) -> Dict[str, Any]:
    if cfg.cascade is not None:
        m, k, t = cfg.cascade
        rep = cascade_representation(m, k, t)
        return {
            "terms": [{"level": level, "n": n} for level, n in rep.terms],
            "bound": shadow_upper_bound(rep),
        }
    assert cfg.matrix is not None
    M = load_tensor(cfg.matrix)
    corollary = corollary_entry_bound(M).holds if M.t >= 3 else None
    return {
        "face_counts": list(face_counts(M).counts),
        "corollary_holds": corollary,
        "rows": [asdict(row) for row in shadow_check(M)],
    }


def _run_extremal(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.n is not None and cfg.pattern is not None
    P = load_tensor(cfg.pattern)
    cache_key = get_cache_key("extremal", P.t, cfg.n, dumps_tensor(P))
    if cfg.use_cache:
        cached = get_from_cache(cache_key)
        if cached is not None:
            log.info(f"Using cached report for n={cfg.n}")
            return cached
    report = report_from_search(
        extremal_pattern(cfg.n, P, budget=cfg.budget, threads=cfg.threads)
    )
    if cfg.use_cache:
        save_to_cache(cache_key, report)
    return report


def _run_count(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.n is not None and cfg.pattern is not None
    P = load_tensor(cfg.pattern)
    value = count_avoiders(cfg.n, P, cap=cfg.cap_cells, threads=cfg.threads)
    return {"n": cfg.n, "t": P.t, "count": value}


def _run_klazar(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.n is not None and cfg.pattern is not None
    outcome = klazar_check(cfg.n, load_tensor(cfg.pattern), cap=cfg.cap_cells)
    return {"lhs": outcome.lhs, "rhs": outcome.rhs, "holds": outcome.holds, "f": outcome.f_value}


def _run_alpha(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.t is not None and cfg.k is not None
    return {"t": cfg.t, "k": cfg.k, "alpha": _rational(alpha(cfg.t, cfg.k))}


def _run_latin(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.n is not None and cfg.t is not None
    report: Dict[str, Any] = {
        "n": cfg.n,
        "t": cfg.t,
        "count": latin_count(cfg.n, cfg.t, cfg.latin_reach),
    }
    if cfg.pattern is not None:
        P = load_tensor(cfg.pattern)
        report["avoiders"] = latin_count_avoiders(cfg.n, cfg.t, P, cfg.latin_reach)
    return report


def _run_recursion(cfg: RunConfig) -> Dict[str, Any]:
    assert cfg.t is not None and cfg.k is not None
    return recursion_step(cfg.t, cfg.k, cfg.p).as_dict()


HANDLERS = {
    "classify": _run_classify,
    "contains": _run_contains,
    "divisions": _run_divisions,
    "shadow": _run_shadow,
    "extremal": _run_extremal,
    "count": _run_count,
    "klazar": _run_klazar,
    "alpha": _run_alpha,
    "latin": _run_latin,
    "recursion": _run_recursion,
}


# --- Output ---


def _flatten(value: Any) -> Any:
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return value


def render_report(report: Dict[str, Any], output_format: str) -> str:
    """Serialize a report; CSV lists ``rows``/``properties`` when present, else one row."""
    if output_format == "json":
        return json.dumps(report, indent=2) + "\n"
    rows = report.get("rows") or report.get("properties") or [report]
    fieldnames: List[str] = []
    for row in rows:
        fieldnames.extend(key for key in row if key not in fieldnames)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _flatten(value) for key, value in row.items()})
    return buffer.getvalue()


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8")
    log.info(f"Report written to {output}")


# --- verify-suite ---


def _save_counterexamples(
    results: Sequence[PropertyResult], directory: Path
) -> Dict[str, List[str]]:
    written: Dict[str, List[str]] = {}
    for result in results:
        for index, example in enumerate(result.counterexamples):
            if not example.tensors:
                continue
            path = write_counterexample(
                directory, result.name, index, example.tensors, example.context
            )
            written.setdefault(result.name, []).append(str(path))
    return written


def _print_suite_summary(results: Sequence[PropertyResult], start_time: float) -> None:
    failed = [r for r in results if not r.passed]
    summary_lines = [
        f"Properties: {len(results)}",
        f"Passed: {len(results) - len(failed)}",
        f"Failed: {len(failed)}",
        f"Instances checked: {sum(r.checked for r in results)}",
        f"Total Time: {time.time() - start_time:.2f} seconds",
    ]
    console.print(Panel("\n".join(summary_lines), title="Verify Suite Summary", expand=False))
    if failed:
        console.print("\n[bold red]Failing properties:[/bold red]")
        for result in failed:
            detail = result.error or f"{result.failures} failing instances"
            console.print(f"- {result.name}: {detail}")


async def verify_suite(cfg: RunConfig) -> Tuple[Dict[str, Any], int]:
    """Run the property suite; the report is identical for identical configs."""
    start_time = time.time()
    suite = SuiteConfig(seed=cfg.seed, quick=cfg.quick, threads=cfg.threads)
    results = await run_suite(suite, cfg.properties or None, console=console)
    failed = [r for r in results if not r.passed]
    counterexamples: Dict[str, List[str]] = {}
    if failed:
        counterexamples = _save_counterexamples(failed, cfg.output or Path("counterexamples"))
    _print_suite_summary(results, start_time)

    properties = []
    for result in results:
        entry = result.as_dict()
        entry["counterexamples"] = counterexamples.get(result.name, [])
        properties.append(entry)
    report = {
        "seed": cfg.seed,
        "quick": cfg.quick,
        "property_count": len(results),
        "failed": [r.name for r in failed],
        "properties": properties,
    }
    return report, EXIT_PROPERTY_VIOLATION if failed else EXIT_OK


async def dispatch(cfg: RunConfig) -> int:
    """Run the configured subcommand and write its report.

    Returns:
        int: 0 on success, 1 on a property violation, 2 on a usage or input
        error, 3 when a resource cap or search budget is exceeded.
    """
    try:
        if cfg.command == "verify-suite":
            report, exit_code = await verify_suite(cfg)
            _emit(render_report(report, cfg.output_format), None)
            return exit_code
        report = HANDLERS[cfg.command](cfg)
    except (ResourceCapError, SearchBudgetExceeded) as e:
        log.error(f"{e}")
        console.print(f"[bold red]Resource limit:[/bold red] {e}")
        return EXIT_RESOURCE_CAP
    except TensorFormatError as e:
        where = f" (field {e.field})" if e.field else ""
        where += f" (line {e.line})" if e.line else ""
        console.print(f"[bold red]Input error{where}:[/bold red] {e}")
        return EXIT_USAGE
    except (InvalidArgumentError, ConfigurationError) as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        return EXIT_USAGE
    except InvariantViolation as e:
        log.exception("Internal check failed")
        console.print(f"[bold red]Invariant violated:[/bold red] {e}")
        return EXIT_PROPERTY_VIOLATION
    except TensorExtremalError as e:
        log.exception("Unexpected tensor-extremal error")
        console.print(f"[bold red]Error:[/bold red] {e}")
        return EXIT_USAGE

    _emit(render_report(report, cfg.output_format), cfg.output)
    return EXIT_OK


# --- Main Execution ---


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=OUTPUT_FORMATS,
        default="json",
        help="Report format.",
    )
    common.add_argument(
        "-o",
        "--output",
        type=Path,
        help="Write the report to this file (verify-suite: directory for counterexamples).",
    )
    common.add_argument(
        "--threads",
        type=int,
        default=config.DEFAULT_THREADS,
        help="Worker processes for searches and counts; concurrent properties for verify-suite.",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=config.DEFAULT_SEED,
        help="Seed for the randomized property sweeps.",
    )
    common.add_argument(
        "--budget",
        type=int,
        default=None,
        help="Node budget for containment or branch-and-bound searches.",
    )
    common.add_argument(
        "--cap-cells",
        type=int,
        default=config.DEFAULT_CAP_CELLS,
        help="Largest number of cells enumerated exhaustively.",
    )
    common.add_argument(
        "--cap-divisions",
        type=int,
        default=config.DEFAULT_DIVISION_CAP,
        help="Largest number of divisions searched for a full one.",
    )
    common.add_argument(
        "--no-cache",
        action="store_true",
        help="Do not read or write cached extremal reports.",
    )
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Set the logging level.",
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Enable verbose output (DEBUG logging).",
    )
    return common


def _add_inputs(parser: argparse.ArgumentParser, matrix: bool, pattern: bool) -> None:
    if matrix:
        parser.add_argument(
            "-i", "--input", "--matrix", dest="matrix", type=Path, help="Tensor JSON file."
        )
    if pattern:
        parser.add_argument("-p", "--pattern", type=Path, help="Pattern JSON file.")


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        description="Pattern avoidance in t-dimensional 0-1 matrices: exact searches and checks.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(
            name,
            parents=[common],
            help=help_text,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )

    classify = add("classify", "Validate and classify a pattern.")
    _add_inputs(classify, matrix=True, pattern=True)

    contains = add("contains", "Search for an embedding of a pattern.")
    _add_inputs(contains, matrix=True, pattern=True)

    divisions = add("divisions", "Count k-divisions and optionally find a full one.")
    _add_inputs(divisions, matrix=True, pattern=False)
    divisions.add_argument("--k", type=int, help="Parts per axis.")
    divisions.add_argument("--find-full", action="store_true", help="Search for a full division.")

    shadow = add("shadow", "Face counts and entry bound, or a cascade representation.")
    _add_inputs(shadow, matrix=True, pattern=False)
    shadow.add_argument(
        "--cascade", type=int, nargs=3, metavar=("M", "K", "T"), help="Represent M at level K."
    )

    for name, help_text in (
        ("extremal", "Exact maximum ones of an n x ... x n tensor avoiding a pattern."),
        ("count", "Count the n x ... x n tensors avoiding a pattern."),
        ("klazar", "Check the doubling inequality for a pattern."),
    ):
        sub = add(name, help_text)
        _add_inputs(sub, matrix=False, pattern=True)
        sub.add_argument("--n", type=int, help="Side length.")

    alpha_parser = add("alpha", "Exact constant alpha_t(k).")
    alpha_parser.add_argument("--t", type=int, help="Number of axes.")
    alpha_parser.add_argument("--k", type=int, help="Pattern side.")

    latin = add("latin", "Count Latin matrices, optionally those avoiding a pattern.")
    _add_inputs(latin, matrix=False, pattern=True)
    latin.add_argument("--n", type=int, help="Order.")
    latin.add_argument("--t", type=int, help="Number of axes.")
    latin.add_argument("--latin-reach", type=int, help="Override the largest enumerated order.")

    recursion = add("recursion", "Report one step of the division recursion.")
    recursion.add_argument("--t", type=int, help="Number of axes.")
    recursion.add_argument("--k", type=int, help="Pattern side.")
    recursion.add_argument("--p", type=int, help="Block side (default: (2 alpha_{t-1}(k))^t).")

    suite = add("verify-suite", "Run the property suite.")
    suite.add_argument("--quick", action="store_true", help="Reduced sweep sizes.")
    suite.add_argument(
        "--property",
        action="append",
        choices=sorted(PROPERTIES),
        help="Run only this property (repeatable).",
    )
    return parser.parse_args(argv)


async def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the tensor-extremal CLI."""
    args = parse_arguments(argv)
    setup_logging(level="DEBUG" if args.verbose else args.log_level)
    try:
        cfg = RunConfig.from_args(args)
    except InvalidArgumentError as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        return EXIT_USAGE
    log.debug(f"Running {cfg.command} with {cfg}")
    return await dispatch(cfg)


def cli_entry_point() -> None:
    """Synchronous entry point for the CLI script.

    This function is called by the script defined in `pyproject.toml`.
    It sets up and runs the asyncio event loop for the main async function.
    """
    exit_code = asyncio.run(main())
    sys.exit(exit_code)
