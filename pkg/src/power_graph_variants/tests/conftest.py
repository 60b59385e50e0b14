import pytest

from power_graph_variants.base.catalog import preset
from power_graph_variants.base.powergraph import build
from power_graph_variants.base.types import Variant, WindowSpec


@pytest.fixture
def integers():
    return preset("integers")


@pytest.fixture
def rationals():
    return preset("rationals")


@pytest.fixture
def heisenberg():
    return preset("heisenberg")


@pytest.fixture
def z6():
    return preset("z6")


@pytest.fixture
def dyadic():
    """Z[1/2], the rationals whose denominators are powers of 2."""
    return preset("z-inv-2")


@pytest.fixture
def integers_pm_20(integers):
    return build(integers, WindowSpec(bound=20), Variant.ZPM)


@pytest.fixture
def integers_pm_12(integers):
    return build(integers, WindowSpec(bound=12), Variant.ZPM)


@pytest.fixture
def integers_pm_6(integers):
    return build(integers, WindowSpec(bound=6), Variant.ZPM)


@pytest.fixture
def heisenberg_pm_1(heisenberg):
    return build(heisenberg, WindowSpec(bound=1), Variant.ZPM)
