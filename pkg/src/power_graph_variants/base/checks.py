"""Named checks and the acceptance suite built from them."""
import logging
import random
import time
import traceback
from concurrent.futures import Executor, ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Callable, Dict, Generator, List, Optional, Tuple

from power_graph_variants.base.artifacts import render_bundle
from power_graph_variants.base.catalog import finite_catalog, height_catalog, preset
from power_graph_variants.base.direction import (
    admissible_pairs,
    check_directed_transfer,
    is_rationals_by_neighbor_symmetry,
    locally_cyclic_component_check,
    orientation_report,
    phi_a,
    phi_closed_carrier,
    s_set_is_finite,
    verify_phi_a,
    window_growth,
)
from power_graph_variants.base.graphs import (
    connected_components,
    in_vertex_order,
    twin_partition,
)
from power_graph_variants.base.groups import (
    GroupModel,
    RationalSubgroup,
    classify_rational_subgroup,
)
from power_graph_variants.base.powergraph import (
    PowerGraphBundle,
    boundary_blocks,
    build,
    build_on_carrier,
    directed_adjacent,
    edge_set,
    equiv_class_profile,
    isolated_vertices,
    rebuild,
    symbolic_twin_partition,
)
from power_graph_variants.base.transforms import (
    doubling_law,
    lift_pm_iso_to_power_iso,
    random_pm_automorphism,
    split_component,
    verify_boxtimes_decomposition,
)
from power_graph_variants.base.types import (
    FULL_WINDOW,
    CheckReport,
    ConfigurationError,
    Element,
    Family,
    Mapping,
    NotAnIsomorphism,
    OutputFormat,
    Profile,
    TransferVerdict,
    UnsupportedFamily,
    Variant,
    WindowSpec,
    WindowTooLarge,
)
from power_graph_variants.base.utils import format_element, format_elements

_LOGGER = logging.getLogger(__file__)

CheckResult = Tuple[bool, Dict[str, Any]]

ISO_SEARCH_SECONDS = 5.0
HEISENBERG_FOCUS = (1, 0, 0)


@dataclass(frozen=True)
class NamedCheck:
    """A check runnable from the command line on one group and window."""

    run: Callable[[GroupModel, WindowSpec, int], CheckResult]
    variant: Optional[Variant]
    description: str


def _nontrivial_components(bundle: PowerGraphBundle) -> List[List]:
    graph = bundle.graph
    return [
        in_vertex_order(graph, c) for c in connected_components(graph) if len(c) > 1
    ]


def _require_family(G: GroupModel, families: Tuple[Family, ...], check: str) -> None:
    if G.family not in families:
        raise UnsupportedFamily(G.family, check)


def _is_rationals(G: GroupModel) -> bool:
    return (
        G.family == Family.RATIONAL_SUBGROUP
        and classify_rational_subgroup(G.heights).is_q
    )


def check_variants_coincide(
    G: GroupModel, window: WindowSpec, seed: int = 0
) -> CheckResult:
    """Compare the edge sets of the three variants on one carrier."""
    power = build(G, window, Variant.Z)
    edges = {Variant.Z: edge_set(power)}
    for variant in (Variant.NPLUS, Variant.ZPM):
        edges[variant] = edge_set(rebuild(power, variant))
    mismatches = len(edges[Variant.Z] ^ edges[Variant.NPLUS]) + len(
        edges[Variant.Z] ^ edges[Variant.ZPM]
    )
    evidence: Dict[str, Any] = {v.value: len(e) for v, e in edges.items()}
    evidence["mismatches"] = mismatches
    return mismatches == 0, evidence


def check_isolated(G: GroupModel, window: WindowSpec, seed: int = 0) -> CheckResult:
    """Only the identity of a torsion-free group is isolated in the Z±-power graph."""
    bundle = build(G, window, Variant.ZPM)
    isolated = isolated_vertices(bundle)
    expected = [G.identity] if G.is_torsion_free else []
    return isolated == expected, {"isolated": format_elements(isolated)}


def predicted_boundary_blocks(bound: int) -> List[frozenset]:
    """Window twin blocks {±k, ±2k} of the power graph of Z, k a power of 2."""
    blocks = []
    k = 1
    while 2 * k <= bound:
        if 3 * k > bound:
            blocks.append(frozenset({k, -k, 2 * k, -2 * k}))
        k *= 2
    return blocks


def check_twins(G: GroupModel, window: WindowSpec, seed: int = 0) -> CheckResult:
    """
    Compare symbolic twin classes of the power graph with the window classes.

    Every symbolic class must sit inside a window class. For Z the symbolic
    classes must also look like the integers, and the window may merge only the
    predicted boundary blocks.
    """
    bundle = build(G, window, Variant.Z)
    profile = equiv_class_profile(bundle)
    window_partition = twin_partition(bundle.graph)
    passed = all(
        set(block) <= set(window_partition.block_of(block[0]))
        for block in symbolic_twin_partition(bundle).blocks
    )
    merged = [frozenset(b) for b in boundary_blocks(bundle)]
    if G.family == Family.INTEGERS:
        expected = set(predicted_boundary_blocks(window.bound))
        passed = passed and profile.matches_integers and set(merged) == expected
    evidence = {
        "size_counts": {str(k): v for k, v in profile.size_counts.items()},
        "matches_integers": profile.matches_integers,
        "boundary_blocks": [
            format_elements(in_vertex_order(bundle.graph, b)) for b in merged
        ],
    }
    return passed, evidence


def check_boxtimes(
    G: GroupModel, window: WindowSpec, seed: int = 0, focus: Optional[Element] = None
) -> CheckResult:
    """
    Split components of the Z±-power graph and check their product structure.

    Every component of infinite-order elements is checked, or only the component
    of `focus` when given.
    """
    _require_family(
        G, (Family.INTEGERS, Family.RATIONAL_SUBGROUP, Family.HEISENBERG), "boxtimes"
    )
    bundle = build(G, window, Variant.ZPM)
    components = _nontrivial_components(bundle)
    if focus is not None:
        components = [c for c in components if focus in c]
    failed = []
    slowest = 0.0
    for component in components:
        started = time.perf_counter()
        split = split_component(bundle, component)
        report = verify_boxtimes_decomposition(split, bundle)
        slowest = max(slowest, time.perf_counter() - started)
        if not report.passed:
            failed.append(
                {"component": format_element(component[0]), **report.model_dump()}
            )
    evidence = {
        "components": len(components),
        "failed": failed,
        "slowest_seconds": round(slowest, 3),
    }
    passed = bool(components) and not failed and slowest < ISO_SEARCH_SECONDS
    return passed, evidence


def check_doubling(G: GroupModel, window: WindowSpec, seed: int = 0) -> CheckResult:
    """Component counts of the N-power graph are twice those of the Z±-power graph."""
    plus = build(G, window, Variant.NPLUS)
    report = doubling_law(plus, rebuild(plus, Variant.ZPM))
    evidence = {
        "rows": [
            {
                "vertices": row.vertices,
                "edges": row.edges,
                "nplus": row.plus_count,
                "zpm": row.pm_count,
            }
            for row in report.rows
        ],
        "unmatched_nplus_classes": report.unmatched_plus_classes,
    }
    return report.passed, evidence


def check_lift(
    G: GroupModel, window: WindowSpec, seed: int = 0, cases: int = 20
) -> CheckResult:
    """Lift random Z±-power automorphisms and verify them on the power graph."""
    rng = random.Random(seed)
    pm = build(G, window, Variant.ZPM)
    power = rebuild(pm, Variant.Z)
    failures = 0
    moved_identity = 0
    for _ in range(cases):
        phi = random_pm_automorphism(pm, rng)
        if phi[G.identity] != G.identity:
            moved_identity += 1
        try:
            lift_pm_iso_to_power_iso(phi, pm, pm, power, power)
        except NotAnIsomorphism:
            _LOGGER.exception(
                "Lift failed verification.", extra={"props": {"group": G.name}}
            )
            failures += 1
    evidence = {"cases": cases, "failures": failures, "moved_identity": moved_identity}
    return failures == 0, evidence


def check_orientation(
    G: GroupModel, window: WindowSpec, seed: int = 0
) -> CheckResult:
    """Recovered orientations against the exponent equations."""
    report = orientation_report(build(G, window, Variant.ZPM))
    evidence = {
        "pairs": report.pairs_checked,
        "agreements": report.agreements,
        "agreement_ratio": report.agreement_ratio,
        "disagreements": [
            [format_element(x), format_element(y)] for x, y in report.disagreements[:10]
        ],
    }
    return report.agreements == report.pairs_checked, evidence


def check_reverse_growth(
    G: GroupModel, window: WindowSpec, seed: int = 0
) -> CheckResult:
    """For every directed edge x -> y, S(y, x) grows at each of three doublings."""
    _require_family(G, (Family.INTEGERS, Family.RATIONAL_SUBGROUP), "reverse-growth")
    bundle = build(G, window, Variant.ZPM)
    pairs = [
        (x, y)
        for x, y in admissible_pairs(bundle)
        if directed_adjacent(G, x, y, Variant.ZPM)
    ]
    stalled = [
        (x, y)
        for x, y in pairs
        if window_growth(G, y, x, base=window.bound).finite is not False
    ]
    evidence = {
        "edges": len(pairs),
        "stalled": [[format_element(x), format_element(y)] for x, y in stalled[:10]],
    }
    return not stalled, evidence


def growth_pairs(
    G: GroupModel, window: WindowSpec, positive_x: bool = False
) -> List[Tuple[Element, Element]]:
    """Ordered pairs of nonidentity carrier elements with x not in {y, y^-1}."""
    elements = [g for g in G.carrier(window) if g != G.identity]
    return [
        (x, y)
        for x in elements
        if not positive_x or x > 0
        for y in elements
        if x not in (y, G.inverse(y))
    ]


def check_growth(
    G: GroupModel, window: WindowSpec, seed: int = 0, positive_x: bool = False
) -> CheckResult:
    """Symbolic S-set finiteness against the window-growth oracle."""
    _require_family(G, (Family.INTEGERS, Family.RATIONAL_SUBGROUP), "growth")
    pairs = growth_pairs(G, window, positive_x=positive_x)
    disagreements = []
    for x, y in pairs:
        symbolic = s_set_is_finite(G, x, y)
        observed = window_growth(G, x, y, base=window.bound)
        if observed.finite != symbolic:
            disagreements.append(
                {
                    "x": format_element(x),
                    "y": format_element(y),
                    "symbolic_finite": symbolic,
                    "sizes": list(observed.sizes),
                }
            )
    evidence = {
        "pairs": len(pairs),
        "disagreements": len(disagreements),
        "examples": disagreements[:5],
    }
    return not disagreements, evidence


def check_phi(G: GroupModel, window: WindowSpec, seed: int = 0) -> CheckResult:
    """The maps x -> a^2/x for a = 1, 2, 3 on closed parts of a window of Q."""
    if not _is_rationals(G):
        raise UnsupportedFamily(G.family, "phi")
    reports = [verify_phi_a(a, window) for a in (1, 2, 3)]
    evidence = {
        str(r.a): {
            "vertices": r.vertices,
            "adjacency_preserved": r.adjacency_preserved,
            "edges_reversed": r.edges_reversed,
            "in_onto_out": r.in_onto_out,
        }
        for r in reports
    }
    return all(r.passed for r in reports), evidence


def check_is_q(
    G: GroupModel, window: WindowSpec = FULL_WINDOW, seed: int = 0
) -> CheckResult:
    """Neighbor-preorder symmetry against the height classification."""
    _require_family(G, (Family.RATIONAL_SUBGROUP,), "is-q")
    classification = classify_rational_subgroup(G.heights)
    by_symmetry = is_rationals_by_neighbor_symmetry(G)
    evidence = {
        "is_q": classification.is_q,
        "witness_prime": classification.witness_prime,
        "by_neighbor_symmetry": by_symmetry,
    }
    return by_symmetry == classification.is_q, evidence


def _symbolic_swap(bundle: PowerGraphBundle, rng: random.Random) -> Mapping:
    """Swap x and x^-1 on a random set of symbolic twin pairs."""
    G = bundle.group
    mapping = {v: v for v in bundle.graph}
    for v in bundle.graph:
        w = G.inverse(v)
        if v != w and mapping[v] == v and mapping[w] == w and rng.random() < 0.5:
            mapping[v], mapping[w] = w, v
    return mapping


def _compose(outer: Mapping, inner: Mapping) -> Mapping:
    return {v: outer[inner[v]] for v in inner}


def transfer_family(bundle: PowerGraphBundle, rng: random.Random) -> Dict[str, Mapping]:
    """
    Automorphisms of a window Z±-power graph used for the transfer check.

    Identity, group inversion and a seeded swap of {x, x^-1} pairs, plus x -> 1/x
    and its compositions when the window is a closed window of Q.
    """
    G = bundle.group
    identity = {v: v for v in bundle.graph}
    inversion = {v: G.inverse(v) for v in bundle.graph}
    family = {
        "identity": identity,
        "inversion": inversion,
        "pair-swap": _symbolic_swap(bundle, rng),
    }
    if _is_rationals(G):
        flip = {v: phi_a(1, v) for v in bundle.graph}
        if set(flip.values()) == set(bundle.graph):
            family["phi-1"] = flip
            family["phi-1-inversion"] = _compose(flip, inversion)
            family["phi-1-pair-swap"] = _compose(flip, family["pair-swap"])
    return family


def _transfer_bundle(G: GroupModel, window: WindowSpec) -> PowerGraphBundle:
    if _is_rationals(G):
        carrier = phi_closed_carrier(G.carrier(window), 1)
        return build_on_carrier(G, carrier, Variant.ZPM, window=window)
    return build(G, window, Variant.ZPM)


def check_transfer(G: GroupModel, window: WindowSpec, seed: int = 0) -> CheckResult:
    """Each automorphism acts on each component as an isomorphism or its reverse."""
    bundle = _transfer_bundle(G, window)
    rng = random.Random(seed)
    verdicts: Dict[str, Dict[str, int]] = {}
    mixed = []
    for name, phi in transfer_family(bundle, rng).items():
        counts = {v.value: 0 for v in TransferVerdict}
        for component in _nontrivial_components(bundle):
            report = check_directed_transfer(phi, bundle, bundle, component)
            counts[report.verdict.value] += 1
            broken = report.verdict == TransferVerdict.MIXED
            if broken or report.neighbor_exchange is False:
                mixed.append(
                    {
                        "map": name,
                        "component": format_element(component[0]),
                        "offending": [
                            [format_element(u), format_element(v)]
                            for u, v in report.offending[:5]
                        ],
                    }
                )
        verdicts[name] = counts
    return not mixed, {"verdicts": verdicts, "mixed": mixed}


def check_locally_cyclic(
    G: GroupModel, window: WindowSpec, seed: int = 0
) -> CheckResult:
    """Every pair in a component has a common root."""
    _require_family(
        G,
        (Family.INTEGERS, Family.RATIONAL_SUBGROUP, Family.HEISENBERG),
        "locally-cyclic",
    )
    bundle = build(G, window, Variant.ZPM)
    components = _nontrivial_components(bundle)
    failed = [
        format_element(c[0])
        for c in components
        if not locally_cyclic_component_check(bundle, c)
    ]
    return not failed, {"components": len(components), "failed": failed}


CHECKS: Dict[str, NamedCheck] = {
    "boxtimes": NamedCheck(
        check_boxtimes, Variant.ZPM, "strong product split of Z±-power components"
    ),
    "doubling": NamedCheck(
        check_doubling, Variant.NPLUS, "N-power components double Z±-power ones"
    ),
    "growth": NamedCheck(
        check_growth, Variant.ZPM, "S-set finiteness against window growth"
    ),
    "is-q": NamedCheck(check_is_q, None, "detect Q by neighbor symmetry"),
    "isolated": NamedCheck(
        check_isolated, Variant.ZPM, "isolated vertices of the Z±-power graph"
    ),
    "lift": NamedCheck(
        check_lift, Variant.Z, "lift Z±-power automorphisms to power graph ones"
    ),
    "locally-cyclic": NamedCheck(
        check_locally_cyclic, Variant.ZPM, "common roots inside components"
    ),
    "orientation": NamedCheck(
        check_orientation, Variant.ZPM, "recover edge directions from S-sets"
    ),
    "phi": NamedCheck(check_phi, Variant.ZPM, "inversion maps x -> a^2/x on Q"),
    "reverse-growth": NamedCheck(
        check_reverse_growth, Variant.ZPM, "S(y, x) grows whenever x -> y"
    ),
    "transfer": NamedCheck(
        check_transfer, Variant.ZPM, "directed edges under graph automorphisms"
    ),
    "twins": NamedCheck(check_twins, Variant.Z, "twin classes of the power graph"),
    "variants": NamedCheck(
        check_variants_coincide, Variant.Z, "variants coincide on torsion groups"
    ),
}


def run_check(
    name: str, G: GroupModel, window: WindowSpec, seed: int = 0
) -> CheckReport:
    """
    Run one named check and wrap the outcome in a report.

    :param str name: a key of CHECKS
    :param GroupModel G: the group to check
    :param WindowSpec window: the window to build
    :param int seed: seed for randomised checks
    :return CheckReport: the report, failed with the error text on exceptions
    """
    check = CHECKS[name]
    _LOGGER.info(
        "Running check.",
        extra={"props": {"check": name, "group": G.name, "window": window.describe()}},
    )
    report = CheckReport(
        check=name,
        group=G.name,
        window=window.describe(),
        variant=check.variant.value if check.variant else None,
        passed=False,
    )
    try:
        passed, evidence = check.run(G, window, seed)
    except (ConfigurationError, WindowTooLarge):
        raise
    except Exception as e:
        _LOGGER.exception(f"Check '{name}' raised an error")
        return report.model_copy(update={"error": f"{type(e).__name__}: {e}"})
    return report.model_copy(update={"passed": passed, "evidence": evidence})


Instance = Tuple[str, WindowSpec, Callable[[], CheckResult]]


def _combine(name: str, instances: List[Instance]) -> CheckReport:
    """Run a criterion's instances and merge them into one report."""
    evidence: Dict[str, Any] = {}
    passed = True
    for label, window, run in instances:
        instance_passed, instance_evidence = run()
        passed = passed and instance_passed
        key = f"{label}@{window.describe()}"
        if key in evidence:
            key = f"{key}#{len(evidence) + 1}"
        evidence[key] = {
            "pass": instance_passed,
            **instance_evidence,
        }
    return CheckReport(
        check=name,
        group=",".join(dict.fromkeys(label for label, _, _ in instances)),
        window=",".join(dict.fromkeys(w.describe() for _, w, _ in instances)),
        passed=passed,
        evidence=evidence,
    )


def _window(bound: int) -> WindowSpec:
    return WindowSpec(bound=bound)


def _instance(
    name: str, bound: Optional[int], run: Callable[..., CheckResult], **kwargs: Any
) -> Instance:
    G = preset(name)
    window = FULL_WINDOW if bound is None else _window(bound)
    return name, window, lambda: run(G, window, **kwargs)


def torsion_coincidence(profile: Profile, seed: int) -> CheckReport:
    instances = [
        (G.name, FULL_WINDOW, lambda G=G: check_variants_coincide(G, FULL_WINDOW))
        for G in finite_catalog(profile)
    ]
    return _combine("01-torsion-coincidence", instances)


def isolated_vertex_law(profile: Profile, seed: int) -> CheckReport:
    quick = profile == Profile.QUICK
    bounds = {
        "integers": 10 if quick else 20,
        "rationals": 3 if quick else 4,
        "z-inv-2": 3 if quick else 4,
        "height-one": 2 if quick else 3,
        "heisenberg": 1 if quick else 2,
    }
    instances = [_instance(n, b, check_isolated) for n, b in bounds.items()]
    instances += [_instance(n, None, check_isolated) for n in ("z6", "z8", "s3", "q8")]
    return _combine("02-isolated-vertex-law", instances)


def integer_twin_signature(profile: Profile, seed: int) -> CheckReport:
    bounds = (20, 30) if profile == Profile.QUICK else (20, 30, 50)
    instances = [_instance("integers", n, check_twins) for n in bounds]
    return _combine("03-integer-twin-signature", instances)


def boxtimes_decomposition(profile: Profile, seed: int) -> CheckReport:
    quick = profile == Profile.QUICK
    instances = [
        _instance("integers", 6 if quick else 12, check_boxtimes),
        _instance("rationals", 2 if quick else 3, check_boxtimes),
        _instance(
            "heisenberg", 2 if quick else 3, check_boxtimes, focus=HEISENBERG_FOCUS
        ),
    ]
    return _combine("04-boxtimes-decomposition", instances)


def doubling(profile: Profile, seed: int) -> CheckReport:
    quick = profile == Profile.QUICK
    bounds = {
        "integers": 6 if quick else 12,
        "rationals": 2 if quick else 3,
        "z-inv-2": 2 if quick else 4,
        "heisenberg": 1 if quick else 2,
    }
    instances = [_instance(n, b, check_doubling) for n, b in bounds.items()]
    return _combine("05-doubling-law", instances)


def tau_lift(profile: Profile, seed: int) -> CheckReport:
    total = 50 if profile == Profile.QUICK else 200
    groups = [
        ("z6", None),
        ("s3", None),
        ("q8", None),
        ("z8", None),
        ("integers", 10),
        ("rationals", 3),
        ("heisenberg", 1),
    ]
    instances = []
    for index, (name, bound) in enumerate(groups):
        cases = len(range(index, total, len(groups)))
        instances.append(
            _instance(name, bound, check_lift, seed=seed + index, cases=cases)
        )
    report = _combine("06-tau-lift", instances)
    report.evidence["total_cases"] = total
    return report


def orientation_recovery(profile: Profile, seed: int) -> CheckReport:
    bounds = (15, 30) if profile == Profile.QUICK else (30, 60)
    instances = [_instance("integers", n, check_orientation) for n in bounds]
    instances.append(_instance("integers", bounds[0], check_reverse_growth))
    return _combine("07-orientation-recovery", instances)


def oracle_agreement(profile: Profile, seed: int) -> CheckReport:
    bound = 15 if profile == Profile.QUICK else 30
    instances = [
        _instance("integers", bound, check_growth, positive_x=True),
        _instance("z-inv-2", 3, check_growth),
        _instance("height-one", 2, check_growth),
    ]
    report = _combine("08-oracle-agreement", instances)
    report.evidence["total_pairs"] = sum(
        e["pairs"] for e in report.evidence.values() if isinstance(e, dict)
    )
    return report


def phi_inversions(profile: Profile, seed: int) -> CheckReport:
    bound = 6 if profile == Profile.QUICK else 9
    return _combine("09-phi-inversions", [_instance("rationals", bound, check_phi)])


def rationals_detection(profile: Profile, seed: int) -> CheckReport:
    instances = []
    for name, heights in height_catalog():
        G = RationalSubgroup(heights, name=name)
        instances.append((name, FULL_WINDOW, lambda G=G: check_is_q(G)))
    report = _combine("10-rationals-detection", instances)
    detected = [
        label
        for label, e in report.evidence.items()
        if isinstance(e, dict) and e.get("by_neighbor_symmetry")
    ]
    report.evidence["detected"] = detected
    passed = report.passed and detected == ["rationals@full"]
    return report.model_copy(update={"passed": passed})


def directed_transfer(profile: Profile, seed: int) -> CheckReport:
    quick = profile == Profile.QUICK
    instances = [
        _instance("integers", 6 if quick else 12, check_transfer, seed=seed),
        _instance("heisenberg", 1 if quick else 2, check_transfer, seed=seed),
        _instance("rationals", 3, check_transfer, seed=seed),
        _instance("heisenberg", 1 if quick else 2, check_locally_cyclic),
    ]
    return _combine("11-directed-transfer", instances)


BUILD_CONFIGS = (
    ("integers", 10, Variant.ZPM, OutputFormat.DOT, False),
    ("z6", None, Variant.Z, OutputFormat.JSON, False),
    ("heisenberg", 2, Variant.ZPM, OutputFormat.DOT, False),
    ("rationals", 3, Variant.NPLUS, OutputFormat.JSON, True),
)


def render_twice(
    name: str,
    window: WindowSpec,
    variant: Variant,
    output_format: OutputFormat,
    directed: bool,
) -> CheckResult:
    """Build and render a preset twice from scratch and compare the bytes."""
    first, second = (
        render_bundle(build(preset(name), window, variant), output_format, directed)
        for _ in range(2)
    )
    return first == second, {"bytes": len(first.encode())}


def build_determinism(profile: Profile, seed: int) -> CheckReport:
    instances = []
    for name, bound, variant, output_format, directed in BUILD_CONFIGS:
        window = FULL_WINDOW if bound is None else _window(bound)
        args = (name, window, variant, output_format, directed)
        instances.append((name, window, lambda args=args: render_twice(*args)))
    return _combine("12-build-determinism", instances)


SUITE: Dict[str, Callable[[Profile, int], CheckReport]] = {
    "01-torsion-coincidence": torsion_coincidence,
    "02-isolated-vertex-law": isolated_vertex_law,
    "03-integer-twin-signature": integer_twin_signature,
    "04-boxtimes-decomposition": boxtimes_decomposition,
    "05-doubling-law": doubling,
    "06-tau-lift": tau_lift,
    "07-orientation-recovery": orientation_recovery,
    "08-oracle-agreement": oracle_agreement,
    "09-phi-inversions": phi_inversions,
    "10-rationals-detection": rationals_detection,
    "11-directed-transfer": directed_transfer,
    "12-build-determinism": build_determinism,
}


def run_criterion(name: str, profile: Profile, seed: int) -> CheckReport:
    """Run one suite criterion, turning an exception into a failed report."""
    started = time.perf_counter()
    try:
        report = SUITE[name](profile, seed)
    except Exception:
        _LOGGER.exception(f"Criterion '{name}' raised an error")
        report = CheckReport(
            check=name,
            group="",
            window="",
            passed=False,
            error=traceback.format_exc(),
        )
    report.evidence["seconds"] = round(time.perf_counter() - started, 3)
    _LOGGER.info(
        "Criterion finished.",
        extra={"props": {"check": name, "passed": report.passed}},
    )
    return report


def _run_concurrently(
    executor: Executor, names: List[str], profile: Profile, seed: int
) -> Generator[CheckReport, None, None]:
    tasks = {
        executor.submit(run_criterion, name, profile, seed): name for name in names
    }
    for future in as_completed(tasks):
        name = tasks[future]
        try:
            yield future.result()
        except Exception:
            _LOGGER.exception(f"Criterion '{name}' generated an unexpected exception")
            yield CheckReport(
                check=name,
                group="",
                window="",
                passed=False,
                error=traceback.format_exc(),
            )


def run_suite(
    profile: Profile = Profile.DESK,
    jobs: int = 1,
    seed: int = 0,
    names: Optional[List[str]] = None,
) -> List[CheckReport]:
    """
    Run suite criteria, concurrently when jobs > 1.

    :return List[CheckReport]: one report per criterion, sorted by name
    """
    names = sorted(names or SUITE)
    _LOGGER.info(
        "Running suite.",
        extra={"props": {"profile": profile.value, "jobs": jobs, "criteria": names}},
    )
    if jobs == 1:
        reports = [run_criterion(name, profile, seed) for name in names]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            reports = list(_run_concurrently(executor, names, profile, seed))
    return sorted(reports, key=lambda r: r.check)


def suite_summary(reports: List[CheckReport], profile: Profile) -> Dict[str, Any]:
    failing = [r.check for r in reports if not r.passed]
    return {
        "profile": profile.value,
        "passed": not failing,
        "first_failure": failing[0] if failing else None,
        "criteria": {r.check: r.passed for r in reports},
        "seconds": round(sum(r.evidence.get("seconds", 0.0) for r in reports), 3),
    }
