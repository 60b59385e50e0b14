import json
import logging
import os
from fractions import Fraction
from typing import Any, Iterable, List

from cloudpathlib import AnyPath

from power_graph_variants.base.types import (
    DEFAULT_RESOURCE_CAP,
    ConfigurationError,
    Vertex,
)

_LOGGER = logging.getLogger(__file__)

CAP_ENV_VAR = "POWERGRAPH_CAP"


def format_element(element: Any) -> str:
    """Render a group element or product vertex as a stable label."""
    if isinstance(element, Fraction):
        return str(element)
    if isinstance(element, tuple):
        return "(" + ",".join(format_element(v) for v in element) + ")"
    return str(element)


def format_elements(elements: Iterable[Vertex]) -> List[str]:
    return [format_element(v) for v in elements]


def resource_cap() -> int:
    """The largest window carrier allowed, overridable through POWERGRAPH_CAP."""
    raw = os.getenv(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_RESOURCE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigurationError(f"{CAP_ENV_VAR} must be an integer, got '{raw}'")
    if cap <= 0:
        raise ConfigurationError(f"{CAP_ENV_VAR} must be positive, got {cap}")
    return cap


def read_json_file(input_file: str) -> Any:
    """Read a JSON file from a local path or cloud URI."""
    _LOGGER.info("Reading input file.", extra={"props": {"input_file": input_file}})
    with AnyPath(input_file).open("r") as input_data:
        return json.load(input_data)
