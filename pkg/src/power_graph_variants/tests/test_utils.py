import json
from fractions import Fraction

import pytest

from power_graph_variants.base.types import DEFAULT_RESOURCE_CAP, ConfigurationError
from power_graph_variants.base.utils import (
    format_element,
    format_elements,
    read_json_file,
    resource_cap,
)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("element", "want"),
    (
        [Fraction(1, 2), "1/2"],
        [Fraction(4, 2), "2"],
        [-3, "-3"],
        [(1, 0, -1), "(1,0,-1)"],
        [((1, 0, 0), 1), "((1,0,0),1)"],
    ),
)
def test_format_element(element, want):
    got = format_element(element)
    assert got == want


@pytest.mark.unit
def test_format_elements_keeps_order():
    assert format_elements([0, Fraction(-1, 3), 2]) == ["0", "-1/3", "2"]


@pytest.mark.unit
@pytest.mark.parametrize(
    ("raw", "want"),
    (
        ["100", 100],
        [" 7 ", 7],
        ["", DEFAULT_RESOURCE_CAP],
    ),
)
def test_resource_cap_from_environment(monkeypatch, raw, want):
    monkeypatch.setenv("POWERGRAPH_CAP", raw)
    got = resource_cap()
    assert got == want


@pytest.mark.unit
def test_resource_cap_default(monkeypatch):
    monkeypatch.delenv("POWERGRAPH_CAP", raising=False)
    assert resource_cap() == DEFAULT_RESOURCE_CAP == 5000


@pytest.mark.unit
@pytest.mark.parametrize("raw", ["abc", "0", "-5"])
def test_invalid_resource_cap(monkeypatch, raw):
    monkeypatch.setenv("POWERGRAPH_CAP", raw)
    with pytest.raises(ConfigurationError):
        resource_cap()


@pytest.mark.unit
def test_read_json_file(tmp_path):
    path = tmp_path / "group.json"
    path.write_text(json.dumps({"family": "integers"}))
    assert read_json_file(str(path)) == {"family": "integers"}
