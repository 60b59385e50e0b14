"""Interconversion between the N-power and Z±-power graphs of a group."""
import logging
import math
import random
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from power_graph_variants.base.graphs import (
    connected_components,
    find_isomorphism,
    in_vertex_order,
    induced,
    is_isomorphism,
    quotient_by_blocks,
    strong_product,
    twin_partition,
)
from power_graph_variants.base.groups import GroupModel
from power_graph_variants.base.powergraph import (
    PowerGraphBundle,
    torsion_elements,
    variant_graph,
)
from power_graph_variants.base.types import (
    BoxtimesReport,
    ComponentClass,
    ComponentSplit,
    DoublingReport,
    DoublingRow,
    Element,
    Family,
    MatchDirection,
    Mapping,
    MultiplicityTable,
    NotAnIsomorphism,
    PartitionMismatch,
    PreconditionFailed,
    SplitFailed,
    TorsionComponent,
    UnsupportedFamily,
    Variant,
    VariantMatch,
    VariantMismatch,
    Vertex,
)

_LOGGER = logging.getLogger(__file__)

ClassKey = Tuple[int, int, Tuple[int, ...]]


def _require_variant(bundle: PowerGraphBundle, variant: Variant) -> None:
    if bundle.variant != variant:
        raise VariantMismatch(variant, bundle.variant)


def _class_key(g: nx.Graph) -> ClassKey:
    """Cheap isomorphism invariants used to bucket components."""
    return (
        g.number_of_nodes(),
        g.number_of_edges(),
        tuple(sorted(d for _, d in g.degree())),
    )


def _sign(value: int) -> int:
    return (value > 0) - (value < 0)


def sbar_same_component(G: GroupModel, x: Element, y: Element) -> bool:
    """
    Decide whether x^n = y^m for some positive n and m.

    This is the relation "same component of the N-power graph" for elements of
    infinite order. In Z and the rational subgroups it means equal sign. In the
    Heisenberg group the abelianised parts must point the same way, and the
    smallest matching powers must then coincide, since roots are unique in a
    torsion-free nilpotent group.
    """
    if G.family == Family.FINITE_CAYLEY:
        raise UnsupportedFamily(G.family, "sbar_same_component")
    x, y = G.check(x), G.check(y)
    for g in (x, y):
        if G.element_order(g) != math.inf:
            raise TorsionComponent(g)
    if G.family in (Family.INTEGERS, Family.RATIONAL_SUBGROUP):
        return _sign(x) == _sign(y)

    a, b, c = x
    a2, b2, c2 = y
    if a == 0 and b == 0:
        return a2 == 0 and b2 == 0 and _sign(c) == _sign(c2)
    if a * b2 != a2 * b or a * a2 + b * b2 <= 0:
        return False
    g1, g2 = math.gcd(a, b), math.gcd(a2, b2)
    d = math.gcd(g1, g2)
    return G.power(x, g2 // d) == G.power(y, g1 // d)


def split_component(bundle: PowerGraphBundle, phi: Iterable[Vertex]) -> ComponentSplit:
    """
    Split a Z±-power component into its two N-power components.

    :param PowerGraphBundle bundle: a Z±-power bundle on an inversion-closed window
    :param Iterable[Vertex] phi: vertex set of a component of infinite-order elements
    :return ComponentSplit: the half holding the first vertex of the component in
        carrier order, its inverse half, and the inversion map between them
    """
    _require_variant(bundle, Variant.ZPM)
    G = bundle.group
    members = in_vertex_order(bundle.graph, induced(bundle.graph, phi))
    for v in members:
        if G.element_order(v) != math.inf:
            raise TorsionComponent(v)

    plus = variant_graph(G, members, Variant.NPLUS)
    halves = [in_vertex_order(plus, c) for c in connected_components(plus)]
    if len(halves) != 2:
        raise SplitFailed(f"expected two N-power components, found {len(halves)}")
    psi_one, psi_two = halves
    witness = {x: G.inverse(x) for x in psi_one}
    if set(witness.values()) != set(psi_two):
        raise SplitFailed("the second half is not the inverse of the first")
    return ComponentSplit(
        phi=tuple(members),
        psi_one=tuple(psi_one),
        psi_two=tuple(psi_two),
        witness=witness,
    )


def verify_boxtimes_decomposition(
    split: ComponentSplit, bundle: PowerGraphBundle
) -> BoxtimesReport:
    """
    Check the strong product decomposition of a split component.

    The halves are taken as induced N-power graphs, the component as the induced
    Z±-power graph, and the quotient collapses every {x, x^-1} pair.
    """
    G = bundle.group
    phi_graph = induced(bundle.graph, split.phi)
    psi_one = variant_graph(G, split.psi_one, Variant.NPLUS)
    psi_two = variant_graph(G, split.psi_two, Variant.NPLUS)

    product = strong_product(psi_one, nx.path_graph(2))
    pairs = [(x, G.inverse(x)) for x in split.psi_one]
    try:
        quotient = quotient_by_blocks(phi_graph, pairs)
        quotient_isomorphic = find_isomorphism(psi_one, quotient) is not None
    except PartitionMismatch:
        _LOGGER.debug(
            "Inverse pairs do not collapse.",
            extra={"props": {"group": G.name, "component_size": len(split.phi)}},
        )
        quotient_isomorphic = False

    report = BoxtimesReport(
        psi_isomorphic=find_isomorphism(psi_one, psi_two) is not None,
        product_isomorphic=find_isomorphism(phi_graph, product) is not None,
        quotient_isomorphic=quotient_isomorphic,
    )
    _LOGGER.info(
        "Checked strong product decomposition.",
        extra={
            "props": {
                "group": G.name,
                "component_size": len(split.phi),
                "passed": report.passed,
            }
        },
    )
    return report


def lift_pm_iso_to_power_iso(
    phi: Mapping,
    pm_source: PowerGraphBundle,
    pm_target: PowerGraphBundle,
    power_source: PowerGraphBundle,
    power_target: PowerGraphBundle,
) -> Mapping:
    """
    Turn an isomorphism of Z±-power graphs into one of power graphs.

    The lift composes phi with the transposition of the target identity and the
    image of the source identity.
    """
    _require_variant(pm_source, Variant.ZPM)
    _require_variant(pm_target, Variant.ZPM)
    _require_variant(power_source, Variant.Z)
    _require_variant(power_target, Variant.Z)
    if not is_isomorphism(phi, pm_source.graph, pm_target.graph):
        raise NotAnIsomorphism("Z±-power")

    target_identity = power_target.identity
    image = phi[pm_source.identity]
    tau = {target_identity: image, image: target_identity}
    lifted = {x: tau.get(y, y) for x, y in phi.items()}
    if not is_isomorphism(lifted, power_source.graph, power_target.graph):
        raise NotAnIsomorphism("power")
    return lifted


def _census(
    graph: nx.Graph,
    components: Iterable[Sequence[Vertex]],
    is_torsion: Callable[[Sequence[Vertex]], bool],
) -> List[ComponentClass]:
    buckets: Dict[Tuple[ClassKey, bool], List[ComponentClass]] = {}
    classes: List[ComponentClass] = []
    for members in components:
        members = tuple(members)
        torsion = is_torsion(members)
        subgraph = induced(graph, members)
        bucket = buckets.setdefault((_class_key(subgraph), torsion), [])
        for candidate in bucket:
            if find_isomorphism(candidate.representative, subgraph) is not None:
                candidate.members.append(members)
                break
        else:
            new_class = ComponentClass(
                representative=subgraph, members=[members], torsion=torsion
            )
            bucket.append(new_class)
            classes.append(new_class)
    return classes


def _has_torsion(G: GroupModel) -> Callable[[Sequence[Vertex]], bool]:
    return lambda members: any(G.element_order(v) != math.inf for v in members)


def multiplicity_table(
    bundle: PowerGraphBundle, include_torsion: bool = True
) -> MultiplicityTable:
    """
    Count the components of the window graph by isomorphism class.

    Components are bucketed by vertex count, edge count and degree multiset, and
    only components sharing a bucket are compared by isomorphism search.
    """
    graph = bundle.graph
    components = [in_vertex_order(graph, c) for c in connected_components(graph)]
    classes = _census(graph, components, _has_torsion(bundle.group))
    if not include_torsion:
        classes = [c for c in classes if not c.torsion]
    table = MultiplicityTable(classes=classes)
    _LOGGER.debug(
        "Component census done.",
        extra={
            "props": {
                "group": bundle.group.name,
                "variant": bundle.variant.value,
                "classes": len(table.classes),
                "components": table.component_count,
            }
        },
    )
    return table


def _match_classes(
    source: List[ComponentClass], target: List[ComponentClass]
) -> Tuple[Optional[List[Tuple[ComponentClass, ComponentClass]]], str]:
    """Pair classes by isomorphism, requiring equal multiplicities."""
    unmatched = list(target)
    pairs = []
    for cls in source:
        partner = next(
            (
                t
                for t in unmatched
                if find_isomorphism(cls.representative, t.representative) is not None
            ),
            None,
        )
        size = cls.representative.number_of_nodes()
        if partner is None:
            return None, f"no target component matches a {size}-vertex class"
        if partner.count != cls.count:
            return (
                None,
                f"multiplicity mismatch for a {size}-vertex class: "
                f"{cls.count} against {partner.count}",
            )
        unmatched.remove(partner)
        pairs.append((cls, partner))
    if unmatched:
        size = unmatched[0].representative.number_of_nodes()
        return None, f"a {size}-vertex target class has no source counterpart"
    return pairs, "matched"


def _inverse_halves(
    G: GroupModel, components: List[List[Vertex]]
) -> List[Tuple[Vertex, ...]]:
    """One component from each {C, C^-1} pair, the one seen first."""
    position = {frozenset(c): i for i, c in enumerate(components)}
    used = set()
    halves = []
    for i, component in enumerate(components):
        if i in used:
            continue
        inverse = frozenset(G.inverse(v) for v in component)
        if inverse not in position:
            raise SplitFailed("an N-power component has no inverse component")
        used.update({i, position[inverse]})
        halves.append(tuple(component))
    return halves


def _extend_by_inverses(
    G: GroupModel, H: GroupModel, f: Mapping, mapping: Mapping
) -> None:
    for x, fx in f.items():
        mapping[x] = fx
        mapping[G.inverse(x)] = H.inverse(fx)


def match_variant_isomorphism(
    source: PowerGraphBundle, target: PowerGraphBundle, direction: MatchDirection
) -> VariantMatch:
    """
    Build an isomorphism of one variant from the other variant's structure.

    PlusFromPm takes two Z±-power bundles and builds an isomorphism of their
    N-power graphs: every Z±-component class is matched with equal multiplicity,
    each matched pair is split into halves and a half isomorphism is extended to
    the inverse halves. PmFromPlus takes two N-power bundles and merges each
    component with its inverse component instead. Torsion parts are matched
    directly, since the variants coincide there.
    """
    G, H = source.group, target.group
    if direction == MatchDirection.PLUS_FROM_PM:
        known = Variant.ZPM
        wanted = Variant.NPLUS
    else:
        known = Variant.NPLUS
        wanted = Variant.ZPM
    _require_variant(source, known)
    _require_variant(target, known)
    source_graph = variant_graph(G, source.carrier, wanted)
    target_graph = variant_graph(H, target.carrier, wanted)

    torsion_map = find_isomorphism(
        induced(source_graph, torsion_elements(source)),
        induced(target_graph, torsion_elements(target)),
    )
    if torsion_map is None:
        return VariantMatch(mapping=None, evidence="torsion parts are not isomorphic")
    mapping: Mapping = dict(torsion_map)

    if direction == MatchDirection.PLUS_FROM_PM:
        source_classes = multiplicity_table(source, include_torsion=False).classes
        target_classes = multiplicity_table(target, include_torsion=False).classes
    else:
        source_classes = _half_classes(source)
        target_classes = _half_classes(target)
    pairs, evidence = _match_classes(source_classes, target_classes)
    if pairs is None:
        return VariantMatch(mapping=None, evidence=evidence)

    for source_class, target_class in pairs:
        for members, partner in zip(source_class.members, target_class.members):
            if direction == MatchDirection.PLUS_FROM_PM:
                members = split_component(source, members).psi_one
                partner = split_component(target, partner).psi_one
            f = find_isomorphism(
                variant_graph(G, members, Variant.NPLUS),
                variant_graph(H, partner, Variant.NPLUS),
            )
            if f is None:
                return VariantMatch(mapping=None, evidence="halves are not isomorphic")
            _extend_by_inverses(G, H, f, mapping)

    if not is_isomorphism(mapping, source_graph, target_graph):
        return VariantMatch(
            mapping=None, evidence="assembled map failed verification"
        )
    return VariantMatch(mapping=mapping, evidence="verified")


def _half_classes(bundle: PowerGraphBundle) -> List[ComponentClass]:
    """Classes of N-power components, one per {C, C^-1} pair."""
    G = bundle.group
    graph = bundle.graph
    components = [
        in_vertex_order(graph, c)
        for c in connected_components(graph)
        if not _has_torsion(G)(list(c))
    ]
    halves = _inverse_halves(G, components)
    return _census(graph, halves, lambda members: False)


def doubling_law(
    bundle_plus: PowerGraphBundle, bundle_pm: PowerGraphBundle
) -> DoublingReport:
    """
    Compare component counts of the N-power and Z±-power graphs of one window.

    Each Z±-component is the union of a half and its inverse, so every class of
    halves must appear exactly twice as often among the N-power components as the
    Z±-components built from it.
    """
    _require_variant(bundle_plus, Variant.NPLUS)
    _require_variant(bundle_pm, Variant.ZPM)
    if bundle_plus.carrier != bundle_pm.carrier:
        raise PreconditionFailed("bundles must share a carrier")
    G = bundle_pm.group

    merged: List[List] = []
    for cls in multiplicity_table(bundle_pm, include_torsion=False).classes:
        half = variant_graph(
            G, split_component(bundle_pm, cls.members[0]).psi_one, Variant.NPLUS
        )
        for entry in merged:
            if find_isomorphism(entry[0], half) is not None:
                entry[1] += cls.count
                break
        else:
            merged.append([half, cls.count])

    plus_classes = list(multiplicity_table(bundle_plus, include_torsion=False).classes)
    rows = []
    for half, pm_count in merged:
        partner = next(
            (
                c
                for c in plus_classes
                if find_isomorphism(c.representative, half) is not None
            ),
            None,
        )
        if partner is not None:
            plus_classes.remove(partner)
        rows.append(
            DoublingRow(
                vertices=half.number_of_nodes(),
                edges=half.number_of_edges(),
                plus_count=0 if partner is None else partner.count,
                pm_count=pm_count,
            )
        )
    report = DoublingReport(rows=tuple(rows), unmatched_plus_classes=len(plus_classes))
    _LOGGER.info(
        "Checked component doubling.",
        extra={
            "props": {
                "group": G.name,
                "window": bundle_pm.window.describe(),
                "classes": len(rows),
                "passed": report.passed,
            }
        },
    )
    return report


def random_pm_automorphism(bundle: PowerGraphBundle, rng: random.Random) -> Mapping:
    """
    Draw an automorphism of a window Z±-power graph.

    Group inversion is applied with probability one half, then the members of
    every twin block of the window graph are shuffled among themselves.
    """
    _require_variant(bundle, Variant.ZPM)
    G = bundle.group
    mapping = {v: v for v in bundle.graph}
    if rng.random() < 0.5:
        mapping = {v: G.inverse(v) for v in bundle.graph}
    shuffle: Mapping = {}
    for block in twin_partition(bundle.graph).blocks:
        targets = list(block)
        rng.shuffle(targets)
        shuffle.update(zip(block, targets))
    return {v: shuffle[mapping[v]] for v in bundle.graph}
