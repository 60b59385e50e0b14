"""Writers for graph exports and check reports."""
import json
import logging
from typing import Iterable

import click
from cloudpathlib import AnyPath
from tenacity import retry
from tenacity.stop import stop_after_attempt
from tenacity.wait import wait_random_exponential

from power_graph_variants.base.graphs import connected_components, to_dot, to_json
from power_graph_variants.base.powergraph import PowerGraphBundle, isolated_vertices
from power_graph_variants.base.types import CheckReport, OutputFormat
from power_graph_variants.base.utils import format_elements

_LOGGER = logging.getLogger(__file__)

STDOUT = "-"


@retry(
    stop=stop_after_attempt(4),
    wait=wait_random_exponential(multiplier=1, min=1, max=10),
)
def _write_text(output_location: str, content: str) -> None:
    with AnyPath(output_location).open("w") as output_file:
        output_file.write(content)


def write_artifact(output_location: str, content: str) -> None:
    """
    Write an artifact to stdout, a local path or a cloud URI.

    :param str output_location: "-" for stdout, otherwise a path or s3:// URI
    :param str content: the rendered artifact
    """
    if output_location == STDOUT:
        click.echo(content, nl=False)
        return
    _LOGGER.info(
        "Writing artifact.",
        extra={"props": {"output_location": output_location, "bytes": len(content)}},
    )
    _write_text(output_location, content)


def render_reports(reports: Iterable[CheckReport]) -> str:
    return "".join(report.to_json_line() + "\n" for report in reports)


def write_reports(output_location: str, reports: Iterable[CheckReport]) -> None:
    write_artifact(output_location, render_reports(reports))


def write_summary(output_location: str, summary: dict) -> None:
    content = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    write_artifact(output_location, content)


def render_bundle(
    bundle: PowerGraphBundle, output_format: OutputFormat, directed: bool = False
) -> str:
    """
    Render a bundle as DOT, graph JSON or a JSON summary report.

    :param PowerGraphBundle bundle: the graphs to render
    :param OutputFormat output_format: dot, json or report
    :param bool directed: render the directed graph instead of the undirected one
    :return str: the artifact text, identical for identical inputs
    """
    graph = bundle.digraph if directed else bundle.graph
    name = f"{bundle.group.name}-{bundle.variant.value}"
    if output_format == OutputFormat.DOT:
        return to_dot(graph, name=name)
    if output_format == OutputFormat.JSON:
        return to_json(graph)
    summary = {
        "group": bundle.group.name,
        "window": bundle.window.describe(),
        "variant": bundle.variant.value,
        "directed": directed,
        "vertices": graph.number_of_nodes(),
        "edges": graph.number_of_edges(),
        "components": len(connected_components(bundle.graph)),
        "isolated": format_elements(isolated_vertices(bundle)),
    }
    return json.dumps(summary, indent=2) + "\n"
