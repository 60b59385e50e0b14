"""Finite graph and digraph algebra on top of networkx."""
import json
import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Union

import networkx as nx

from power_graph_variants.base.types import (
    Mapping,
    PartitionMismatch,
    TwinPartition,
    UnknownVertex,
    Vertex,
)
from power_graph_variants.base.utils import format_element

_LOGGER = logging.getLogger(__file__)

AnyGraph = Union[nx.Graph, nx.DiGraph]

SIGNATURE_ATTRIBUTE = "signature"


def complement(g: nx.Graph) -> nx.Graph:
    return nx.complement(g)


def strong_product(g: nx.Graph, h: nx.Graph) -> nx.Graph:
    """Vertices V(g)xV(h), adjacent when each coordinate is equal or adjacent."""
    return nx.strong_product(g, h)


def induced(g: AnyGraph, vertices: Iterable[Vertex]) -> AnyGraph:
    """The induced subgraph, keeping the vertex order of g."""
    wanted = set(vertices)
    for v in wanted:
        if v not in g:
            raise UnknownVertex(v)
    return g.subgraph([v for v in g if v in wanted]).copy()


def transpose(d: nx.DiGraph) -> nx.DiGraph:
    return d.reverse(copy=True)


def connected_components(g: nx.Graph) -> List[Set[Vertex]]:
    """Components ordered by their first vertex in g."""
    return [set(c) for c in nx.connected_components(g)]


def in_vertex_order(g: AnyGraph, vertices: Iterable[Vertex]) -> List[Vertex]:
    wanted = set(vertices)
    return [v for v in g if v in wanted]


def closed_neighborhood(g: nx.Graph, v: Vertex) -> frozenset:
    if v not in g:
        raise UnknownVertex(v)
    return frozenset(g[v]) | {v}


def twin_partition(g: nx.Graph) -> TwinPartition:
    """Group vertices with equal closed neighborhoods, in first-seen order."""
    blocks: Dict[frozenset, List[Vertex]] = {}
    for v in g:
        blocks.setdefault(closed_neighborhood(g, v), []).append(v)
    return TwinPartition(blocks=tuple(tuple(block) for block in blocks.values()))


def quotient_by_blocks(g: nx.Graph, blocks: Sequence[Sequence[Vertex]]) -> nx.Graph:
    """
    Collapse blocks of mutual twins, each to its first vertex.

    Distinct blocks are adjacent when some cross pair is adjacent. For twin blocks
    that equals every cross pair being adjacent, which is asserted.
    """
    covered = [v for block in blocks for v in block]
    if len(covered) != len(set(covered)) or set(covered) != set(g):
        raise PartitionMismatch("blocks do not partition the vertices")
    for block in blocks:
        if len({closed_neighborhood(g, v) for v in block}) != 1:
            raise PartitionMismatch(f"block {list(block)} holds non-twins")

    def edge_relation(block: Any, other: Any) -> bool:
        pairs = [g.has_edge(u, v) for u in block for v in other]
        if any(pairs) != all(pairs):
            raise PartitionMismatch("blocks are only partially adjacent")
        return pairs[0]

    quotient = nx.quotient_graph(
        g, [set(b) for b in blocks], edge_relation=edge_relation, relabel=False
    )
    representatives = {frozenset(block): block[0] for block in blocks}
    result = nx.Graph()
    result.add_nodes_from(block[0] for block in blocks)
    result.add_edges_from(
        (representatives[u], representatives[v]) for u, v in quotient.edges()
    )
    return result


def quotient_by_twins(g: nx.Graph, partition: TwinPartition) -> nx.Graph:
    """Collapse each twin block of g to its first vertex."""
    given = partition.as_sets()
    if len(given) != len(set(given)) or set(given) != set(
        twin_partition(g).as_sets()
    ):
        raise PartitionMismatch("blocks differ from the closed-neighborhood classes")
    return quotient_by_blocks(g, partition.blocks)


def _labelled(g: AnyGraph) -> AnyGraph:
    """Copy g with a degree signature on every vertex to prune the search."""
    labelled = g.copy()
    for v in labelled:
        if labelled.is_directed():
            signature = (
                labelled.in_degree(v),
                labelled.out_degree(v),
                tuple(sorted(labelled.out_degree(u) for u in labelled.successors(v))),
            )
        else:
            signature = (
                labelled.degree(v),
                tuple(sorted(labelled.degree(u) for u in labelled[v])),
            )
        labelled.nodes[v][SIGNATURE_ATTRIBUTE] = signature
    return labelled


def find_isomorphism(g: AnyGraph, h: AnyGraph) -> Optional[Mapping]:
    """
    Search for an adjacency-preserving bijection from g to h.

    Cheap invariants are compared first. The search itself is VF2++ with each
    vertex labelled by its degree and the sorted degrees of its neighbors.
    """
    if g.is_directed() != h.is_directed():
        return None
    if g.number_of_nodes() != h.number_of_nodes():
        return None
    if g.number_of_edges() != h.number_of_edges():
        return None
    if g.number_of_nodes() == 0:
        return {}
    if sorted(d for _, d in g.degree()) != sorted(d for _, d in h.degree()):
        return None
    mapping = nx.vf2pp_isomorphism(
        _labelled(g), _labelled(h), node_label=SIGNATURE_ATTRIBUTE
    )
    if mapping is None:
        return None
    return {v: mapping[v] for v in g}


def find_anti_isomorphism(d1: nx.DiGraph, d2: nx.DiGraph) -> Optional[Mapping]:
    return find_isomorphism(d1, transpose(d2))


def is_isomorphism(mapping: Mapping, g: AnyGraph, h: AnyGraph) -> bool:
    """Check that a vertex map is a bijection preserving adjacency both ways."""
    if set(mapping) != set(g) or len(set(mapping.values())) != len(mapping):
        return False
    if set(mapping.values()) != set(h):
        return False
    if g.number_of_edges() != h.number_of_edges():
        return False
    return all(h.has_edge(mapping[u], mapping[v]) for u, v in g.edges())


def is_anti_isomorphism(mapping: Mapping, d1: nx.DiGraph, d2: nx.DiGraph) -> bool:
    return is_isomorphism(mapping, d1, transpose(d2))


def _ordered_edges(g: AnyGraph) -> List[tuple]:
    position = {v: i for i, v in enumerate(g)}
    edges = []
    for u, v in g.edges():
        if not g.is_directed() and position[u] > position[v]:
            u, v = v, u
        edges.append((u, v))
    return sorted(edges, key=lambda e: (position[e[0]], position[e[1]]))


def to_dot(g: AnyGraph, name: str = "power_graph") -> str:
    """Render DOT text with vertices in graph order and edges sorted by position."""
    directed = g.is_directed()
    connector = "->" if directed else "--"
    lines = [f'{"digraph" if directed else "graph"} "{name}" {{']
    lines += [f'  "{format_element(v)}";' for v in g]
    lines += [
        f'  "{format_element(u)}" {connector} "{format_element(v)}";'
        for u, v in _ordered_edges(g)
    ]
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(g: AnyGraph) -> str:
    document = {
        "vertices": [format_element(v) for v in g],
        "edges": [[format_element(u), format_element(v)] for u, v in _ordered_edges(g)],
        "directed": g.is_directed(),
    }
    return json.dumps(document, indent=2) + "\n"


def from_json(document: Union[str, dict]) -> AnyGraph:
    """Load a graph in the JSON export format, with string vertex labels."""
    if isinstance(document, str):
        document = json.loads(document)
    g = nx.DiGraph() if document.get("directed", False) else nx.Graph()
    g.add_nodes_from(document["vertices"])
    for u, v in document["edges"]:
        if u not in g or v not in g:
            raise UnknownVertex(u if u not in g else v)
        g.add_edge(u, v)
    return g
