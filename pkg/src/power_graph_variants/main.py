import logging
import logging.config
import os
import sys
from functools import wraps
from typing import Any, Callable, Optional

import click
import json_logging
from dotenv import load_dotenv
from pydantic import ValidationError

from power_graph_variants.base.artifacts import (
    STDOUT,
    render_bundle,
    write_artifact,
    write_reports,
    write_summary,
)
from power_graph_variants.base.catalog import resolve_group
from power_graph_variants.base.checks import CHECKS, run_check, run_suite, suite_summary
from power_graph_variants.base.powergraph import build
from power_graph_variants.base.types import (
    ConfigurationError,
    OutputFormat,
    Profile,
    RunConfig,
    Variant,
    WindowTooLarge,
)
from power_graph_variants.base.utils import resource_cap

# Clear existing log handlers so we always log in structured JSON
root_logger = logging.getLogger()
if root_logger.handlers:
    for handler in root_logger.handlers:
        root_logger.removeHandler(handler)

for _, logger in logging.root.manager.loggerDict.items():
    if isinstance(logger, logging.Logger):
        logger.propagate = True
        if logger.handlers:
            for handler in logger.handlers:
                logger.removeHandler(handler)

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

DEFAULT_LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {
        "default": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",  # stdout carries artifacts
        },
    },
    "loggers": {},
    "root": {
        "handlers": ["default"],
        "level": LOG_LEVEL,
    },
}
logging.config.dictConfig(DEFAULT_LOGGING)
json_logging.init_non_web(enable_json=True)
_LOGGER = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_RESOURCE_CAP = 3
EXIT_FAILED = 4


def handle_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Map configuration and resource errors to exit codes."""

    @wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except (ConfigurationError, ValidationError) as e:
            _LOGGER.error("Invalid configuration.", extra={"props": {"error": str(e)}})
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        except WindowTooLarge as e:
            _LOGGER.error("Resource cap exceeded.", extra={"props": {"cap": e.cap}})
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_RESOURCE_CAP)

    return wrapper


def group_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """Options selecting a group and a window."""
    options = [
        click.option("--group", help="Preset group name, e.g. integers or z6"),
        click.option(
            "--table", help="JSON group description, local path or s3:// URI"
        ),
        click.option(
            "--heights", help="Rational subgroup heights, e.g. default=1,2=inf"
        ),
        click.option(
            "--window",
            type=int,
            help="Window bound: |n| for Z, numerator for Q, coordinates for Heisenberg",
        ),
        click.option(
            "--max-denominator",
            type=int,
            help="Denominator bound for rational subgroups, defaults to --window",
        ),
        click.option(
            "--cap",
            type=int,
            default=None,
            help="Largest carrier allowed, defaults to POWERGRAPH_CAP or 5000",
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _config(command: str, cap: Optional[int], **options: Any) -> RunConfig:
    return RunConfig(
        command=command,
        cap=resource_cap() if cap is None else cap,
        **options,
    )


@click.group()
def main():
    """Build power graph variants of groups and check their properties."""
    load_dotenv()


@main.command(name="build")
@group_options
@click.option(
    "--variant",
    type=click.Choice([v.value for v in Variant]),
    default=Variant.Z.value,
    show_default=True,
)
@click.option("--directed", is_flag=True, help="Export the directed graph")
@click.option(
    "--format",
    "output_format",
    type=click.Choice([f.value for f in OutputFormat]),
    default=OutputFormat.DOT.value,
    show_default=True,
)
@click.option("--output", default=STDOUT, help="Output path or s3:// URI, - for stdout")
@handle_errors
def build_command(cap: Optional[int], **options: Any):
    """Build one power graph variant on a window and export it."""
    config = _config("build", cap, **options)
    G = resolve_group(config)
    bundle = build(G, config.window_spec, config.variant, cap=config.cap)
    write_artifact(
        config.output, render_bundle(bundle, config.output_format, config.directed)
    )


@main.command(name="check")
@click.argument("name", type=click.Choice(sorted(CHECKS)))
@group_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", default=STDOUT, help="Report path or s3:// URI")
@handle_errors
def check_command(name: str, cap: Optional[int], **options: Any):
    """Run one named check and write its JSON report."""
    config = _config("check", cap, **options)
    G = resolve_group(config)
    if config.window is not None:
        G.carrier(config.window_spec, cap=config.cap)
    report = run_check(name, G, config.window_spec, seed=config.seed)
    write_reports(config.output, [report])
    if not report.passed:
        _LOGGER.error("Check failed.", extra={"props": {"check": name}})
        sys.exit(EXIT_FAILED)


@main.command(name="suite")
@click.option(
    "--profile",
    type=click.Choice([p.value for p in Profile]),
    default=Profile.DESK.value,
    show_default=True,
)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", default=STDOUT, help="JSON-lines report path or URI")
@click.option("--json", "summary_output", help="Write a JSON summary here as well")
@handle_errors
def suite_command(summary_output: Optional[str], **options: Any):
    """Run the acceptance suite and report pass or fail per criterion."""
    config = _config("suite", None, **options)
    reports = run_suite(config.profile, jobs=config.jobs, seed=config.seed)
    write_reports(config.output, reports)
    summary = suite_summary(reports, config.profile)
    if summary_output:
        write_summary(summary_output, summary)
    _LOGGER.info(
        "Suite finished.",
        extra={
            "props": {
                "passed": summary["passed"],
                "first_failure": summary["first_failure"],
                "seconds": summary["seconds"],
            }
        },
    )
    if not summary["passed"]:
        click.echo(f"First failing criterion: {summary['first_failure']}", err=True)
        sys.exit(EXIT_FAILED)


if __name__ == "__main__":
    main()
