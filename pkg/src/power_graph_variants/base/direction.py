"""Edge orientation recovered from undirected Z±-power graphs."""
import logging
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
from sympy import divisors, factorint, multiplicity, nextprime

from power_graph_variants.base.graphs import (
    closed_neighborhood,
    complement,
    connected_components,
    in_vertex_order,
    induced,
    is_anti_isomorphism,
    is_isomorphism,
)
from power_graph_variants.base.groups import (
    GroupModel,
    RationalSubgroup,
    local_cyclicity_witness,
)
from power_graph_variants.base.powergraph import (
    PowerGraphBundle,
    adjacent,
    build_on_carrier,
    directed_adjacent,
)
from power_graph_variants.base.types import (
    INFINITE_HEIGHT,
    Element,
    Family,
    GrowthObservation,
    HeightFunction,
    HypothesisViolated,
    Mapping,
    NeighborPreorder,
    NeighborSide,
    NeighborSplit,
    NotAdjacent,
    Orientation,
    OrientationReport,
    PhiReport,
    PreconditionFailed,
    PrimeSet,
    SSetDescriptor,
    TransferReport,
    TransferVerdict,
    UnsupportedFamily,
    Variant,
    VariantMismatch,
    Vertex,
    WindowSpec,
)

_LOGGER = logging.getLogger(__file__)

GROWTH_DOUBLINGS = 3

RATIONALS = RationalSubgroup(
    HeightFunction(default_height=INFINITE_HEIGHT), name="rationals"
)


def _require_zpm(bundle: PowerGraphBundle) -> None:
    if bundle.variant != Variant.ZPM:
        raise VariantMismatch(Variant.ZPM, bundle.variant)


def _require_infinite_family(G: GroupModel, operation: str) -> None:
    if G.family == Family.FINITE_CAYLEY:
        raise UnsupportedFamily(G.family, operation)


def _require_distinct_pair(G: GroupModel, x: Element, y: Element) -> None:
    if G.identity in (x, y):
        raise PreconditionFailed("x and y must differ from the identity")
    if x in (y, G.inverse(y)):
        raise PreconditionFailed(f"{x} is {y} or its inverse")


def s_set(bundle: PowerGraphBundle, x: Element, y: Element) -> SSetDescriptor:
    """The window slice of S(x, y), the closed neighbors of y that miss x."""
    _require_zpm(bundle)
    if x == y:
        raise PreconditionFailed("S(x, x) is empty by definition")
    graph = bundle.graph
    missing = closed_neighborhood(graph, y) - closed_neighborhood(graph, x)
    return SSetDescriptor(
        x=x, y=y, window_slice=tuple(in_vertex_order(graph, missing))
    )


def s_set_is_finite(G: GroupModel, x: Element, y: Element) -> bool:
    """
    Decide whether S(x, y) is finite, from exponent arithmetic alone.

    In Z and the Heisenberg group every nonidentity element lies in a unique
    maximal cyclic subgroup, so S(x, y) is finite exactly when y is a power of x.
    For a rational subgroup with y/x = P/Q in lowest terms, S(x, y) is infinite
    when Q != 1. Otherwise it is finite when the subgroup is cyclic, or when only
    finitely many primes have positive height, exactly one prime u has infinite
    height and |P| is a power of u.
    """
    _require_infinite_family(G, "s_set_is_finite")
    x, y = G.check(x), G.check(y)
    _require_distinct_pair(G, x, y)
    if G.family != Family.RATIONAL_SUBGROUP:
        return not G.solve_power_of(y, x).is_empty

    ratio = y / x
    if ratio.denominator != 1:
        return False
    heights = G.heights
    if heights.is_cyclic:
        return True
    if heights.default_height != 0:
        return False
    unbounded = heights.infinite_primes
    if len(unbounded) != 1:
        return False
    (u,) = unbounded
    return set(factorint(abs(ratio.numerator))) <= {u}


def growth_base(G: GroupModel, x: Element, y: Element) -> int:
    """
    Smallest window from which S(x, y) slices grow at every doubling when infinite.

    Beyond it each doubling meets a new non-integral multiple, a new prime divisor
    or a new power of the single unbounded prime, whichever makes S(x, y) infinite.
    """
    if G.family == Family.INTEGERS:
        return 2 * max(abs(x), abs(y))
    if G.family != Family.RATIONAL_SUBGROUP:
        raise UnsupportedFamily(G.family, "growth_base")
    x, y = G.check(x), G.check(y)
    a, b = abs(y.numerator), y.denominator
    ratio = y / x
    p, q = abs(ratio.numerator), ratio.denominator
    largest = max(abs(x.numerator), x.denominator, a, b)
    return max(2 * largest, a * b * q, b * b * a * p, 2 ** multiplicity(2, p) * b)


def _allows_denominator(G: GroupModel, denominator: int) -> bool:
    if G.family == Family.INTEGERS:
        return denominator == 1
    return G.contains_denominator(denominator)


def _positive_parts(value: Element) -> Tuple[int, int]:
    value = Fraction(value)
    return abs(value.numerator), value.denominator


def _slice_sizes(
    G: GroupModel, x: Element, y: Element, windows: Sequence[int]
) -> Tuple[int, ...]:
    """
    Count the positive members of S(x, y) in each window.

    S(x, y) is closed under negation, so positive members suffice. Neighbors of y
    are its multiples k*y and the fractions n/m in lowest terms with y/(n/m) an
    integer, which forces n to divide the numerator of y.
    """
    c, d = _positive_parts(x)
    a, b = _positive_parts(y)
    top = windows[-1]
    found: Set[Tuple[int, int]] = set()
    for k in range(1, top * b // a + 1):
        common = math.gcd(k * a, b)
        if k * a // common <= top:
            found.add((k * a // common, b // common))
    allowed = [m for m in range(1, top + 1) if _allows_denominator(G, m)]
    for n in divisors(a):
        for m in allowed:
            if math.gcd(n, m) == 1 and (a * m) % (b * n) == 0:
                found.add((n, m))
    outside = [
        (n, m)
        for n, m in found
        if (n * d) % (m * c) != 0 and (c * m) % (d * n) != 0
    ]
    return tuple(
        sum(1 for n, m in outside if n <= window and m <= window)
        for window in windows
    )


def window_growth(
    G: GroupModel, x: Element, y: Element, base: int = 1
) -> GrowthObservation:
    """
    Measure S(x, y) over windows M, 2M, 4M, 8M.

    :param GroupModel G: the integers or a rational subgroup
    :param int base: the smallest first window; raised to growth_base(x, y)
    :return GrowthObservation: slice sizes, finite when the last doubling adds
        nothing and infinite when every doubling adds something
    """
    if G.family not in (Family.INTEGERS, Family.RATIONAL_SUBGROUP):
        raise UnsupportedFamily(G.family, "window_growth")
    x, y = G.check(x), G.check(y)
    _require_distinct_pair(G, x, y)
    start = max(base, growth_base(G, x, y))
    windows = tuple(start * 2**i for i in range(GROWTH_DOUBLINGS + 1))
    return GrowthObservation(windows=windows, sizes=_slice_sizes(G, x, y, windows))


def recover_orientation(G: GroupModel, x: Element, y: Element) -> Orientation:
    """
    Orient the edge between x and y from S-set finiteness.

    Only groups where every nonidentity element lies in a unique maximal cyclic
    subgroup are accepted. There x -> y exactly when S(x, y) is finite.
    """
    _require_infinite_family(G, "recover_orientation")
    if not G.has_unique_maximal_cyclic():
        raise HypothesisViolated(G.name)
    x, y = G.check(x), G.check(y)
    _require_distinct_pair(G, x, y)
    if not adjacent(G, x, y, Variant.ZPM):
        raise NotAdjacent(x, y)
    if s_set_is_finite(G, x, y):
        return Orientation.X_TO_Y
    return Orientation.Y_TO_X


def admissible_pairs(bundle: PowerGraphBundle) -> List[Tuple[Element, Element]]:
    """Ordered adjacent pairs (x, y) with x not in {y, y^-1}, in carrier order."""
    G = bundle.group
    pairs = []
    for x, y in bundle.graph.edges():
        if x != G.inverse(y):
            pairs += [(x, y), (y, x)]
    position = {v: i for i, v in enumerate(bundle.carrier)}
    return sorted(pairs, key=lambda p: (position[p[0]], position[p[1]]))


def orientation_report(bundle: PowerGraphBundle) -> OrientationReport:
    """Compare recovered orientations with the exponent equations."""
    _require_zpm(bundle)
    G = bundle.group
    pairs = admissible_pairs(bundle)
    disagreements = []
    for x, y in pairs:
        truth = directed_adjacent(G, x, y, Variant.ZPM)
        recovered = recover_orientation(G, x, y) == Orientation.X_TO_Y
        if truth != recovered:
            disagreements.append((x, y))
    report = OrientationReport(
        pairs_checked=len(pairs),
        agreements=len(pairs) - len(disagreements),
        disagreements=tuple(disagreements),
    )
    _LOGGER.info(
        "Checked orientation recovery.",
        extra={
            "props": {
                "group": G.name,
                "window": bundle.window.describe(),
                "pairs": report.pairs_checked,
                "agreements": report.agreements,
            }
        },
    )
    return report


def _in_out(bundle: PowerGraphBundle, z: Vertex) -> Tuple[Set, Set]:
    excluded = {z, bundle.group.inverse(z)}
    incoming = set(bundle.digraph.predecessors(z)) - excluded
    outgoing = set(bundle.digraph.successors(z)) - excluded
    return incoming, outgoing


def neighbor_split(bundle: PowerGraphBundle, z: Element) -> NeighborSplit:
    """
    In-neighbors, out-neighbors and their union for z, z^-1 excluded.

    Also reports the components of the complement of the induced graph on the
    union that meet the out-neighbors.
    """
    _require_zpm(bundle)
    G = bundle.group
    _require_infinite_family(G, "neighbor_split")
    if z == G.identity:
        raise PreconditionFailed("the identity has no neighbors in the Z±-power graph")
    incoming, outgoing = _in_out(bundle, z)
    mixed = incoming | outgoing
    co_graph = complement(induced(bundle.graph, mixed))
    components = tuple(
        frozenset(c) for c in connected_components(co_graph) if c & outgoing
    )
    return NeighborSplit(
        z=z,
        incoming=frozenset(incoming),
        outgoing=frozenset(outgoing),
        mixed=frozenset(mixed),
        outgoing_components=components,
    )


def phi_a(a: Fraction, x: Fraction) -> Fraction:
    """x -> a^2/x with 0 fixed."""
    if a == 0:
        raise PreconditionFailed("phi_a needs a nonzero a")
    if x == 0:
        return Fraction(0)
    return Fraction(a) ** 2 / Fraction(x)


def phi_closed_carrier(carrier: Iterable[Fraction], a: Fraction) -> List[Fraction]:
    """The members of a carrier whose image under phi_a stays in it."""
    carrier = list(carrier)
    members = set(carrier)
    return [v for v in carrier if phi_a(a, v) in members]


def verify_phi_a(a: Fraction, window: WindowSpec) -> PhiReport:
    """
    Check phi_a on the largest phi_a-closed part of a window of Q.

    phi_a must preserve Z±-power adjacency, reverse every directed edge and carry
    the in-neighbors of a onto its out-neighbors.
    """
    a = Fraction(a)
    carrier = phi_closed_carrier(RATIONALS.carrier(window), a)
    if a not in carrier:
        raise PreconditionFailed(f"{a} is not in the closed part of the window")
    bundle = build_on_carrier(RATIONALS, carrier, Variant.ZPM, window=window)
    mapping = {v: phi_a(a, v) for v in carrier}
    split = neighbor_split(bundle, a)
    report = PhiReport(
        a=a,
        vertices=len(carrier),
        adjacency_preserved=is_isomorphism(mapping, bundle.graph, bundle.graph),
        edges_reversed=is_anti_isomorphism(mapping, bundle.digraph, bundle.digraph),
        in_onto_out={mapping[v] for v in split.incoming} == set(split.outgoing),
    )
    _LOGGER.info(
        "Checked inversion map.",
        extra={
            "props": {"a": str(a), "vertices": len(carrier), "passed": report.passed}
        },
    )
    return report


def _valuation(value: Fraction, prime: int) -> int:
    return multiplicity(prime, value.numerator) - multiplicity(prime, value.denominator)


def _primes_of(value: Fraction) -> Set[int]:
    return set(factorint(abs(value.numerator))) | set(factorint(value.denominator))


def _window_preorder(
    G: RationalSubgroup, side: NeighborSide, base: Fraction, window: WindowSpec
) -> Tuple[Tuple, Tuple]:
    members = []
    for v in G.carrier(window):
        if v <= 0 or v == base:
            continue
        if side == NeighborSide.OUT and directed_adjacent(G, base, v, Variant.ZPM):
            members.append(v)
        if side == NeighborSide.IN and directed_adjacent(G, v, base, Variant.ZPM):
            members.append(v)

    def below(u: Fraction, v: Fraction) -> bool:
        if side == NeighborSide.OUT:
            return directed_adjacent(G, u, v, Variant.ZPM)
        return directed_adjacent(G, v, u, Variant.ZPM)

    classes = tuple((v, -v) for v in members)
    minimal = tuple(
        (v, -v) for v in members if not any(below(u, v) for u in members if u != v)
    )
    return classes, minimal


def neighbor_preorder(
    G: RationalSubgroup,
    side: NeighborSide,
    base: Fraction = Fraction(1),
    window: Optional[WindowSpec] = None,
) -> NeighborPreorder:
    """
    Describe the preorder on the out- or in-neighbors of a base element.

    Out-neighbors n*base are ordered by x <= y iff x -> y, and the minimal classes
    are {±p*base} for every prime p, each starting the chain p, p^2, ... In-neighbors
    base/n are ordered by x <= y iff y -> x. Their minimal classes are {±base/p} for
    the primes p with base/p in the group, and such a class starts an infinite
    chain exactly when p has infinite height.
    """
    if G.family != Family.RATIONAL_SUBGROUP:
        raise UnsupportedFamily(G.family, "neighbor_preorder")
    base = G.check(base)
    if base <= 0:
        raise PreconditionFailed("the base element must be positive")

    if side == NeighborSide.OUT:
        minimal = PrimeSet(cofinite=True)
        chains = PrimeSet(cofinite=True)
    else:
        heights = G.heights
        listed = set(heights.exceptions) | _primes_of(base)

        def divisible(p: int) -> bool:
            return _valuation(base, p) - 1 >= -heights.height(p)

        cofinite = heights.default_height >= 1
        minimal = PrimeSet(
            cofinite=cofinite,
            primes=frozenset(p for p in listed if divisible(p) != cofinite),
        )
        unbounded = heights.default_height == INFINITE_HEIGHT
        chains = PrimeSet(
            cofinite=unbounded,
            primes=frozenset(
                p
                for p, h in heights.exceptions.items()
                if (h == INFINITE_HEIGHT) != unbounded
            ),
        )

    classes, window_minimal = (), ()
    if window is not None:
        classes, window_minimal = _window_preorder(G, side, base, window)
    return NeighborPreorder(
        side=side,
        base=base,
        minimal=minimal,
        chains=chains,
        window_classes=classes,
        window_minimal=window_minimal,
    )


def preorders_isomorphic(out_side: NeighborPreorder, in_side: NeighborPreorder) -> bool:
    """
    Compare two neighbor preorders through their minimal classes and chains.

    Both preorders are free on their minimal classes, so they are isomorphic when
    both have infinitely many minimal classes and every minimal class starts an
    infinite chain on both sides.
    """
    for preorder in (out_side, in_side):
        if not preorder.minimal.is_infinite:
            return False
        if not preorder.minimal.issubset(preorder.chains):
            return False
    return True


def _symmetry_bases(heights: HeightFunction) -> List[Fraction]:
    """Base 1 plus p^(1-h) for primes of finite height, one for the default."""
    bases = [Fraction(1)]
    for p, h in heights.exceptions.items():
        if h != INFINITE_HEIGHT:
            bases.append(Fraction(p) ** (1 - h))
    if heights.default_height != INFINITE_HEIGHT:
        p = 2
        while p in heights.exceptions:
            p = nextprime(p)
        bases.append(Fraction(p) ** (1 - heights.default_height))
    return bases


def is_rationals_by_neighbor_symmetry(G: RationalSubgroup) -> bool:
    """
    Decide whether G is Q by comparing in- and out-neighbor preorders.

    Q is the only rational subgroup whose in- and out-neighborhoods are isomorphic
    at every element. A prime p of finite height h already breaks the symmetry at
    the element p^(1-h), whose in-class {±p^-h} ends its chain.
    """
    for base in _symmetry_bases(G.heights):
        out_side = neighbor_preorder(G, NeighborSide.OUT, base)
        in_side = neighbor_preorder(G, NeighborSide.IN, base)
        if not preorders_isomorphic(out_side, in_side):
            _LOGGER.debug(
                "Neighbor preorders differ.",
                extra={"props": {"group": G.name, "base": str(base)}},
            )
            return False
    return True


def _check_transfer_preconditions(
    phi: Mapping, pm_g: PowerGraphBundle, pm_h: PowerGraphBundle, component: Set
) -> None:
    for bundle in (pm_g, pm_h):
        _require_zpm(bundle)
        G = bundle.group
        if not G.is_torsion_free or not G.nilpotency_class_at_most_2:
            raise PreconditionFailed(
                f"{G.name} must be torsion-free of nilpotency class at most 2"
            )
    if not is_isomorphism(phi, pm_g.graph, pm_h.graph):
        raise PreconditionFailed("phi is not an isomorphism of the Z±-power graphs")
    if len(component) < 2:
        raise PreconditionFailed("the component must have at least two vertices")
    first = next(iter(component))
    if first not in pm_g.graph or nx.node_connected_component(
        pm_g.graph, first
    ) != set(component):
        raise PreconditionFailed("the vertex set is not a component")


def check_directed_transfer(
    phi: Mapping,
    pm_g: PowerGraphBundle,
    pm_h: PowerGraphBundle,
    component: Iterable[Vertex],
) -> TransferReport:
    """
    Classify how phi acts on the directed edges inside one component.

    Pairs {x, x^-1} point both ways and are skipped. Every other directed edge is
    either preserved or reversed; a component with both kinds is reported as Mixed
    with the minority edges. For an anti-isomorphism the out-neighbors of each x
    must go onto the in-neighbors of phi(x) and the other way round.

    :param Mapping phi: a vertex map from the window of G to the window of H
    :param PowerGraphBundle pm_g: the Z±-power bundle of G
    :param PowerGraphBundle pm_h: the Z±-power bundle of H
    :param Iterable[Vertex] component: vertex set of a component of pm_g
    :return TransferReport: the verdict with edge counts
    """
    component = set(component)
    _check_transfer_preconditions(phi, pm_g, pm_h, component)
    G = pm_g.group
    ordered = in_vertex_order(pm_g.graph, component)
    preserved, reversed_edges = [], []
    for u in ordered:
        for v in pm_g.digraph.successors(u):
            if v == G.inverse(u):
                continue
            if pm_h.digraph.has_edge(phi[u], phi[v]):
                preserved.append((u, v))
            else:
                reversed_edges.append((u, v))

    if preserved and reversed_edges:
        verdict = TransferVerdict.MIXED
        offending = (
            reversed_edges if len(preserved) >= len(reversed_edges) else preserved
        )
    elif reversed_edges:
        verdict, offending = TransferVerdict.ANTI_ISO, []
    else:
        verdict, offending = TransferVerdict.ISO, []

    exchange = None
    if verdict == TransferVerdict.ANTI_ISO:
        exchange = True
        for x in ordered:
            incoming, outgoing = _in_out(pm_g, x)
            image_in, image_out = _in_out(pm_h, phi[x])
            if {phi[v] for v in outgoing} != image_in or {
                phi[v] for v in incoming
            } != image_out:
                exchange = False
                break

    report = TransferReport(
        verdict=verdict,
        preserved=len(preserved),
        reversed=len(reversed_edges),
        offending=tuple(offending),
        neighbor_exchange=exchange,
    )
    _LOGGER.debug(
        "Classified directed transfer.",
        extra={
            "props": {
                "group": G.name,
                "component_size": len(component),
                "verdict": verdict.value,
            }
        },
    )
    return report


def locally_cyclic_component_check(
    bundle: PowerGraphBundle, component: Iterable[Vertex], bound: Optional[int] = None
) -> bool:
    """
    Check that every pair of a component has a common root in the group.

    Any common root of x and y is a root of x, so searching roots of x with
    exponents up to the largest coordinate magnitude of the window is complete.
    """
    G = bundle.group
    _require_infinite_family(G, "locally_cyclic_component_check")
    members = in_vertex_order(bundle.graph, component)
    if bound is None:
        bound = G.largest_magnitude(bundle.carrier)
    for i, x in enumerate(members):
        for y in members[i + 1 :]:
            if local_cyclicity_witness(G, x, y, bound) is None:
                _LOGGER.debug(
                    "No common root.",
                    extra={"props": {"group": G.name, "x": str(x), "y": str(y)}},
                )
                return False
    return True
