"""Power graph variants over group windows."""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from power_graph_variants.base.graphs import twin_partition
from power_graph_variants.base.groups import GroupModel
from power_graph_variants.base.types import (
    FULL_WINDOW,
    ClassProfile,
    Element,
    Family,
    InvalidCarrier,
    TwinPartition,
    Variant,
    VariantMismatch,
    Vertex,
    WindowSpec,
    WindowTooLarge,
)
from power_graph_variants.base.utils import resource_cap

_LOGGER = logging.getLogger(__file__)


@dataclass(frozen=True)
class PowerGraphBundle:
    """A window of a group with one power graph variant and its directed version."""

    group: GroupModel
    window: WindowSpec
    variant: Variant
    carrier: Tuple[Element, ...]
    graph: nx.Graph
    digraph: nx.DiGraph

    @property
    def identity(self) -> Element:
        return self.group.identity


def directed_adjacent(G: GroupModel, x: Element, y: Element, variant: Variant) -> bool:
    """x -> y when y = x^n for some n in the variant's exponent domain."""
    if x == y:
        return False
    return G.solve_power_of(y, x).meets(variant)


def adjacent(G: GroupModel, x: Element, y: Element, variant: Variant) -> bool:
    return directed_adjacent(G, x, y, variant) or directed_adjacent(G, y, x, variant)


def variant_digraph(
    G: GroupModel, vertices: Sequence[Element], variant: Variant
) -> nx.DiGraph:
    """The directed variant restricted to the given vertices, in their order."""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(vertices)
    for x in vertices:
        for y in vertices:
            if directed_adjacent(G, x, y, variant):
                digraph.add_edge(x, y)
    return digraph


def underlying_graph(digraph: nx.DiGraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(digraph)
    graph.add_edges_from(digraph.edges())
    return graph


def variant_graph(
    G: GroupModel, vertices: Sequence[Element], variant: Variant
) -> nx.Graph:
    return underlying_graph(variant_digraph(G, vertices, variant))


def build_on_carrier(
    G: GroupModel,
    carrier: Sequence[Element],
    variant: Variant,
    window: WindowSpec = FULL_WINDOW,
    cap: Optional[int] = None,
) -> PowerGraphBundle:
    """
    Build a bundle on an explicit carrier.

    The carrier must contain the identity and be closed under inversion. Edges are
    decided by exponent equations, so the result is the induced subgraph of the
    power graph of the whole group.
    """
    cap = resource_cap() if cap is None else cap
    carrier = tuple(carrier)
    if len(carrier) > cap:
        raise WindowTooLarge(cap)
    members = set(carrier)
    if len(members) != len(carrier):
        raise InvalidCarrier("carrier has repeated elements")
    if G.identity not in members:
        raise InvalidCarrier("carrier does not contain the identity")
    for g in carrier:
        if G.inverse(g) not in members:
            raise InvalidCarrier(f"inverse of {g} is missing")
    digraph = variant_digraph(G, carrier, variant)
    graph = underlying_graph(digraph)
    _LOGGER.info(
        "Built power graph bundle.",
        extra={
            "props": {
                "group": G.name,
                "window": window.describe(),
                "variant": variant.value,
                "vertices": graph.number_of_nodes(),
                "edges": graph.number_of_edges(),
            }
        },
    )
    return PowerGraphBundle(
        group=G,
        window=window,
        variant=variant,
        carrier=carrier,
        graph=graph,
        digraph=digraph,
    )


def build(
    G: GroupModel, window: WindowSpec, variant: Variant, cap: Optional[int] = None
) -> PowerGraphBundle:
    cap = resource_cap() if cap is None else cap
    carrier = G.carrier(window, cap=cap)
    return build_on_carrier(G, carrier, variant, window=window, cap=cap)


def rebuild(bundle: PowerGraphBundle, variant: Variant) -> PowerGraphBundle:
    """The same carrier under another variant."""
    return build_on_carrier(
        bundle.group, bundle.carrier, variant, window=bundle.window
    )


def _require_variant(bundle: PowerGraphBundle, variant: Variant) -> None:
    if bundle.variant != variant:
        raise VariantMismatch(variant, bundle.variant)


def center_of_power_graph(bundle: PowerGraphBundle) -> Set[Vertex]:
    """Vertices adjacent to every other vertex of the window power graph."""
    _require_variant(bundle, Variant.Z)
    others = bundle.graph.number_of_nodes() - 1
    return {v for v in bundle.graph if bundle.graph.degree(v) == others}


def same_cyclic_subgroup(G: GroupModel, x: Element, y: Element) -> bool:
    return (
        not G.solve_power_of(y, x).is_empty and not G.solve_power_of(x, y).is_empty
    )


def isolated_vertices(bundle: PowerGraphBundle) -> List[Vertex]:
    return [v for v in bundle.graph if bundle.graph.degree(v) == 0]


def symbolic_twin_partition(bundle: PowerGraphBundle) -> TwinPartition:
    """
    Twin classes of the power graph of the whole group, restricted to the window.

    For torsion-free groups the classes are {x, x^-1}, except that the identity is
    alone in the Z±-power graph and joins the generators of a cyclic group in the
    power graph. Every class of the N-power graph is a singleton. Finite groups use
    the window graph, which is the whole graph.
    """
    G = bundle.group
    if not G.is_torsion_free:
        return twin_partition(bundle.graph)
    if bundle.variant == Variant.NPLUS:
        return TwinPartition(blocks=tuple((v,) for v in bundle.graph))
    generator = G.cyclic_generator() if bundle.variant == Variant.Z else None
    identity_block = [G.identity]
    if generator not in (None, G.identity) and generator in bundle.graph:
        identity_block += [generator, G.inverse(generator)]
    blocks = [tuple(identity_block)]
    placed = set(identity_block)
    for v in bundle.graph:
        if v not in placed:
            pair = (v, G.inverse(v))
            placed.update(pair)
            blocks.append(pair)
    return TwinPartition(blocks=tuple(blocks))


def boundary_blocks(bundle: PowerGraphBundle) -> List[Tuple[Vertex, ...]]:
    """Window twin blocks that merge classes of the whole graph."""
    symbolic = set(symbolic_twin_partition(bundle).as_sets())
    return [
        block
        for block in twin_partition(bundle.graph).blocks
        if frozenset(block) not in symbolic
    ]


def _matches_integers(blocks: Iterable[Tuple[Vertex, ...]], identity: Element) -> bool:
    blocks = list(blocks)
    triples = [b for b in blocks if len(b) == 3]
    others = [b for b in blocks if len(b) != 3]
    return (
        len(triples) == 1
        and identity in triples[0]
        and len(others) >= 1
        and all(len(b) == 2 for b in others)
    )


def equiv_class_profile(bundle: PowerGraphBundle) -> ClassProfile:
    """
    Twin block sizes of the power graph and whether they look like the integers.

    The integers have one class of size 3 holding the identity and every other
    class of size 2. The flag is evaluated on the symbolic classes so window
    boundaries cannot merge classes.
    """
    _require_variant(bundle, Variant.Z)
    partition = symbolic_twin_partition(bundle)
    return ClassProfile(
        blocks=partition.blocks,
        size_counts=dict(sorted(Counter(len(b) for b in partition.blocks).items())),
        matches_integers=_matches_integers(partition.blocks, bundle.identity),
    )


def identity_component(bundle: PowerGraphBundle) -> Set[Vertex]:
    return nx.node_connected_component(bundle.graph, bundle.identity)


def torsion_elements(bundle: PowerGraphBundle) -> List[Vertex]:
    G = bundle.group
    if G.family == Family.FINITE_CAYLEY:
        return list(bundle.graph)
    return [bundle.identity]


def edge_set(bundle: PowerGraphBundle) -> Set[frozenset]:
    return {frozenset(e) for e in bundle.graph.edges()}
