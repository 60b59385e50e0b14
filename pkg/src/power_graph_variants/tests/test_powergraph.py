import pytest

from power_graph_variants.base.catalog import preset
from power_graph_variants.base.graphs import induced
from power_graph_variants.base.powergraph import (
    adjacent,
    boundary_blocks,
    build,
    build_on_carrier,
    center_of_power_graph,
    directed_adjacent,
    edge_set,
    equiv_class_profile,
    identity_component,
    isolated_vertices,
    rebuild,
    same_cyclic_subgroup,
    symbolic_twin_partition,
    torsion_elements,
)
from power_graph_variants.base.types import (
    InvalidCarrier,
    Variant,
    VariantMismatch,
    WindowSpec,
    WindowTooLarge,
)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("x", "y", "variant", "want"),
    (
        [2, 4, Variant.ZPM, True],
        [4, 2, Variant.ZPM, False],
        [2, -4, Variant.ZPM, True],
        [2, -4, Variant.NPLUS, False],
        [2, 0, Variant.Z, True],
        [2, 0, Variant.ZPM, False],
        [2, -2, Variant.ZPM, True],
        [2, 2, Variant.Z, False],
    ),
)
def test_directed_adjacency_in_integers(integers, x, y, variant, want):
    got = directed_adjacent(integers, x, y, variant)
    assert got == want


@pytest.mark.unit
def test_adjacency_is_symmetric(integers):
    assert adjacent(integers, 4, 2, Variant.NPLUS)
    assert adjacent(integers, 2, 4, Variant.NPLUS)
    assert not adjacent(integers, 2, 3, Variant.Z)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("variant", "edges"),
    (
        [Variant.Z, 98],
        [Variant.ZPM, 78],
        [Variant.NPLUS, 34],
    ),
)
def test_integer_window_edge_counts(integers, variant, edges):
    """Divisibility pairs among 1..10: 17 proper ones and 10 of the form {k, -k}."""
    bundle = build(integers, WindowSpec(bound=10), variant)
    assert bundle.graph.number_of_nodes() == 21
    assert bundle.graph.number_of_edges() == edges


@pytest.mark.unit
def test_digraph_orientation(integers_pm_12):
    digraph = integers_pm_12.digraph
    assert digraph.has_edge(3, 12)
    assert not digraph.has_edge(12, 3)
    assert digraph.has_edge(3, -3) and digraph.has_edge(-3, 3)


@pytest.mark.unit
def test_rebuild_keeps_the_carrier(integers_pm_12):
    power = rebuild(integers_pm_12, Variant.Z)
    assert power.carrier == integers_pm_12.carrier
    assert power.variant == Variant.Z
    assert edge_set(integers_pm_12) < edge_set(power)


@pytest.mark.unit
def test_isolated_vertices(integers_pm_12, heisenberg_pm_1, z6):
    assert isolated_vertices(integers_pm_12) == [0]
    assert isolated_vertices(heisenberg_pm_1) == [(0, 0, 0)]
    assert isolated_vertices(build(z6, WindowSpec(), Variant.ZPM)) == []


@pytest.mark.unit
def test_carrier_validation(integers):
    with pytest.raises(InvalidCarrier):
        build_on_carrier(integers, [0, 1], Variant.Z)
    with pytest.raises(InvalidCarrier):
        build_on_carrier(integers, [1, -1], Variant.Z)
    with pytest.raises(InvalidCarrier):
        build_on_carrier(integers, [0, 1, -1, 1], Variant.Z)
    with pytest.raises(WindowTooLarge):
        build(integers, WindowSpec(bound=100), Variant.Z, cap=50)


@pytest.mark.unit
def test_resource_cap_from_environment(integers, monkeypatch):
    monkeypatch.setenv("POWERGRAPH_CAP", "10")
    with pytest.raises(WindowTooLarge):
        build(integers, WindowSpec(bound=5), Variant.Z)


@pytest.mark.unit
def test_center_of_integer_power_graph(integers):
    bundle = build(integers, WindowSpec(bound=5), Variant.Z)
    assert center_of_power_graph(bundle) == {0, 1, -1}
    with pytest.raises(VariantMismatch):
        center_of_power_graph(rebuild(bundle, Variant.ZPM))


@pytest.mark.unit
def test_same_cyclic_subgroup(integers, z6):
    assert same_cyclic_subgroup(integers, 2, -2)
    assert not same_cyclic_subgroup(integers, 2, 4)
    assert same_cyclic_subgroup(z6, 1, 5)
    assert not same_cyclic_subgroup(z6, 1, 2)


@pytest.mark.unit
def test_symbolic_twins_of_integers(integers):
    bundle = build(integers, WindowSpec(bound=5), Variant.Z)
    partition = symbolic_twin_partition(bundle)
    assert partition.blocks == ((0, 1, -1), (2, -2), (3, -3), (4, -4), (5, -5))
    profile = equiv_class_profile(bundle)
    assert profile.size_counts == {2: 4, 3: 1}
    assert profile.matches_integers

    pm = rebuild(bundle, Variant.ZPM)
    assert symbolic_twin_partition(pm).blocks[:2] == ((0,), (1, -1))
    plus = rebuild(bundle, Variant.NPLUS)
    assert all(len(b) == 1 for b in symbolic_twin_partition(plus).blocks)


@pytest.mark.unit
def test_rationals_do_not_look_like_integers(rationals):
    bundle = build(rationals, WindowSpec(bound=3), Variant.Z)
    assert not equiv_class_profile(bundle).matches_integers


@pytest.mark.unit
@pytest.mark.parametrize(
    ("bound", "want"),
    (
        [20, [(8, -8, 16, -16)]],
        [30, []],
        [50, []],
    ),
)
def test_boundary_blocks_of_integer_windows(integers, bound, want):
    bundle = build(integers, WindowSpec(bound=bound), Variant.Z)
    got = boundary_blocks(bundle)
    assert got == want


@pytest.mark.unit
def test_torsion_parts(integers_pm_12, z6):
    assert torsion_elements(integers_pm_12) == [0]
    assert identity_component(integers_pm_12) == {0}
    bundle = build(z6, WindowSpec(), Variant.Z)
    assert torsion_elements(bundle) == [0, 1, 2, 3, 4, 5]
    assert identity_component(bundle) == {0, 1, 2, 3, 4, 5}


@pytest.mark.unit
@pytest.mark.parametrize("name", ["z6", "z8", "s3", "q8", "z12"])
def test_variants_coincide_on_finite_groups(name):
    G = preset(name)
    power = build(G, WindowSpec(), Variant.Z)
    for variant in (Variant.NPLUS, Variant.ZPM):
        assert edge_set(rebuild(power, variant)) == edge_set(power)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("name", "window"),
    (
        ["integers", WindowSpec(bound=8)],
        ["rationals", WindowSpec(bound=2)],
        ["z-inv-2", WindowSpec(bound=3)],
        ["heisenberg", WindowSpec(bound=1)],
    ),
)
@pytest.mark.parametrize("variant", list(Variant))
def test_larger_windows_induce_the_same_graph(name, window, variant):
    G = preset(name)
    small = build(G, window, variant)
    large = build(G, window.scaled(2), variant)
    assert set(small.carrier) < set(large.carrier)
    assert set(induced(large.digraph, small.carrier).edges()) == set(
        small.digraph.edges()
    )
    got = {frozenset(e) for e in induced(large.graph, small.carrier).edges()}
    assert got == edge_set(small)


@pytest.mark.unit
def test_scaled_windows():
    assert WindowSpec(bound=3).scaled(2) == WindowSpec(bound=6)
    assert WindowSpec(bound=3, denominator_bound=2).scaled(3) == WindowSpec(
        bound=9, denominator_bound=6
    )
    assert WindowSpec().scaled(2) == WindowSpec()
