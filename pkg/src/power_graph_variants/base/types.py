"""Base definitions for power graph construction and checks"""
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import (
    Any,
    Dict,
    FrozenSet,
    Hashable,
    List,
    Optional,
    Tuple,
    Union,
)

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveInt,
    field_validator,
    model_validator,
)
from sympy import isprime

Element = Union[int, Fraction, Tuple[int, int, int]]
Vertex = Hashable
Mapping = Dict[Vertex, Vertex]
Height = Union[int, float]

INFINITE_HEIGHT = math.inf
DEFAULT_RESOURCE_CAP = 5000


class Family(str, Enum):
    """Group families with exact power arithmetic."""

    FINITE_CAYLEY = "finite_cayley"
    INTEGERS = "integers"
    RATIONAL_SUBGROUP = "rational_subgroup"
    HEISENBERG = "heisenberg"


class Variant(str, Enum):
    """Power graph variants, named by their exponent domain."""

    Z = "z"
    NPLUS = "nplus"
    ZPM = "zpm"


class OutputFormat(str, Enum):
    """Artifact formats written by the build command."""

    DOT = "dot"
    JSON = "json"
    REPORT = "report"


class Profile(str, Enum):
    """Acceptance suite profiles."""

    QUICK = "quick"
    DESK = "desk"


class Orientation(str, Enum):
    """Direction of an edge recovered from undirected data."""

    X_TO_Y = "XtoY"
    Y_TO_X = "YtoX"


class TransferVerdict(str, Enum):
    """How a graph isomorphism acts on the directed edges of a component."""

    ISO = "Iso"
    ANTI_ISO = "AntiIso"
    MIXED = "Mixed"


class MatchDirection(str, Enum):
    """Which variant isomorphism is built from which."""

    PLUS_FROM_PM = "PlusFromPm"
    PM_FROM_PLUS = "PmFromPlus"


class NeighborSide(str, Enum):
    """Side of a neighbor preorder."""

    OUT = "Out"
    IN = "In"


def _parse_height(value: Any) -> Height:
    if isinstance(value, str):
        if value.strip().lower() in {"inf", "infinity", "∞"}:
            return INFINITE_HEIGHT
        value = int(value)
    if value == INFINITE_HEIGHT:
        return INFINITE_HEIGHT
    if isinstance(value, bool) or not float(value).is_integer():
        raise ValueError(f"height must be a non-negative integer or 'inf': {value}")
    if value < 0:
        raise ValueError(f"height must be non-negative: {value}")
    return int(value)


class HeightFunction(BaseModel):
    """
    A prime to height map describing a subgroup of the rationals containing 1.

    Primes missing from `exceptions` take `default_height`. A rational q belongs to
    the subgroup when, for every prime p, the p-adic valuation of q is at least
    -height(p).
    """

    model_config = ConfigDict(frozen=True)

    default_height: Height = 0
    exceptions: Dict[int, Height] = Field(default_factory=dict)

    @field_validator("default_height", mode="before")
    @classmethod
    def _validate_default(cls, value: Any) -> Height:
        return _parse_height(value)

    @field_validator("exceptions", mode="before")
    @classmethod
    def _validate_exceptions(cls, value: Any) -> Dict[int, Height]:
        return _parse_exceptions(value)

    def height(self, prime: int) -> Height:
        """Height of a prime."""
        return self.exceptions.get(prime, self.default_height)

    @property
    def is_cyclic(self) -> bool:
        """True when the subgroup is (1/d)Z for some d."""
        return self.default_height == 0 and all(
            h != INFINITE_HEIGHT for h in self.exceptions.values()
        )

    @property
    def infinite_primes(self) -> Optional[FrozenSet[int]]:
        """Primes of infinite height, or None when there are infinitely many."""
        if self.default_height == INFINITE_HEIGHT:
            return None
        return frozenset(p for p, h in self.exceptions.items() if h == INFINITE_HEIGHT)

    def describe(self) -> str:
        """Render in the `default=...,p=...` syntax accepted by the CLI."""
        parts = [f"default={_format_height(self.default_height)}"]
        parts += [f"{p}={_format_height(h)}" for p, h in self.exceptions.items()]
        return ",".join(parts)


def _parse_exceptions(value: Any) -> Dict[int, Height]:
    if not isinstance(value, dict):
        raise ValueError("exceptions must be a mapping of prime to height")
    parsed = {}
    for prime, height in value.items():
        key = int(prime)
        if not isprime(key):
            raise ValueError(f"exception key {prime} is not a prime")
        parsed[key] = _parse_height(height)
    return dict(sorted(parsed.items()))


def _format_height(height: Height) -> str:
    return "inf" if height == INFINITE_HEIGHT else str(int(height))


class WindowSpec(BaseModel):
    """
    Family-specific truncation of a group to a finite carrier.

    `bound` is the largest absolute value for the integers, the largest absolute
    numerator for rational subgroups and the largest coordinate magnitude for the
    Heisenberg group. `denominator_bound` defaults to `bound`. Finite groups ignore
    both and use the full carrier.
    """

    model_config = ConfigDict(frozen=True)

    bound: Optional[PositiveInt] = None
    denominator_bound: Optional[PositiveInt] = None

    @property
    def max_denominator(self) -> Optional[int]:
        return self.denominator_bound or self.bound

    def describe(self) -> str:
        if self.bound is None:
            return "full"
        if self.denominator_bound and self.denominator_bound != self.bound:
            return f"{self.bound}/{self.denominator_bound}"
        return str(self.bound)

    def scaled(self, factor: int) -> "WindowSpec":
        """A window with every bound multiplied by `factor`."""
        if self.bound is None:
            return self
        return WindowSpec(
            bound=self.bound * factor,
            denominator_bound=(
                self.denominator_bound * factor if self.denominator_bound else None
            ),
        )


FULL_WINDOW = WindowSpec()


class GroupDescription(BaseModel):
    """JSON description of a group, as accepted by `--table`."""

    family: Family
    name: Optional[str] = None
    table: Optional[List[List[int]]] = None
    identity: Optional[int] = None
    default_height: Optional[Height] = None
    exceptions: Dict[int, Height] = Field(default_factory=dict)

    @field_validator("default_height", mode="before")
    @classmethod
    def _validate_default(cls, value: Any) -> Optional[Height]:
        return None if value is None else _parse_height(value)

    @field_validator("exceptions", mode="before")
    @classmethod
    def _validate_exceptions(cls, value: Any) -> Dict[int, Height]:
        return _parse_exceptions(value or {})

    @model_validator(mode="after")
    def _check_family_fields(self) -> "GroupDescription":
        if self.family == Family.FINITE_CAYLEY and not self.table:
            raise ValueError("finite_cayley groups need a 'table'")
        if self.family != Family.FINITE_CAYLEY and self.table is not None:
            raise ValueError(
                f"'table' is only valid for finite_cayley, not {self.family.value}"
            )
        if self.family != Family.RATIONAL_SUBGROUP and (
            self.default_height is not None or self.exceptions
        ):
            raise ValueError("heights are only valid for rational_subgroup")
        return self


@dataclass(frozen=True)
class ExponentSet:
    """
    The set {n : x^n = y} of an exponent equation.

    `residue` is None for the empty set. A `modulus` of 0 means the single value
    `residue`, otherwise the set is the residue class residue + modulus*Z.
    """

    residue: Optional[int]
    modulus: int = 0

    @classmethod
    def empty(cls) -> "ExponentSet":
        return cls(residue=None)

    @property
    def is_empty(self) -> bool:
        return self.residue is None

    def __contains__(self, n: int) -> bool:
        if self.residue is None:
            return False
        if self.modulus == 0:
            return n == self.residue
        return (n - self.residue) % self.modulus == 0

    def meets(self, variant: Variant) -> bool:
        """True if the set contains an exponent of the variant's domain."""
        if self.residue is None:
            return False
        if self.modulus > 0 or variant == Variant.Z:
            return True
        if variant == Variant.NPLUS:
            return self.residue >= 1
        return self.residue != 0


@dataclass(frozen=True)
class SubgroupClassification:
    """Whether a rational subgroup is Q, with a prime of finite height if not."""

    is_q: bool
    witness_prime: Optional[int] = None


@dataclass(frozen=True)
class TwinPartition:
    """Vertices grouped by equal closed neighborhoods, in first-seen order."""

    blocks: Tuple[Tuple[Vertex, ...], ...]

    def block_of(self, vertex: Vertex) -> Tuple[Vertex, ...]:
        for block in self.blocks:
            if vertex in block:
                return block
        raise KeyError(vertex)

    def as_sets(self) -> List[FrozenSet[Vertex]]:
        return [frozenset(block) for block in self.blocks]

    def sizes(self) -> List[int]:
        return sorted((len(block) for block in self.blocks), reverse=True)


@dataclass(frozen=True)
class ClassProfile:
    """Twin block sizes of a power graph and the integers-signature flag."""

    blocks: Tuple[Tuple[Vertex, ...], ...]
    size_counts: Dict[int, int]
    matches_integers: bool


@dataclass(frozen=True)
class ComponentSplit:
    """A Z±-power graph component and the two N-power graph components inside it."""

    phi: Tuple[Vertex, ...]
    psi_one: Tuple[Vertex, ...]
    psi_two: Tuple[Vertex, ...]
    witness: Mapping


class BoxtimesReport(BaseModel):
    """Isomorphism flags for the strong product decomposition of a component."""

    psi_isomorphic: bool
    product_isomorphic: bool
    quotient_isomorphic: bool

    @property
    def passed(self) -> bool:
        return (
            self.psi_isomorphic
            and self.product_isomorphic
            and self.quotient_isomorphic
        )


@dataclass
class ComponentClass:
    """One isomorphism class of connected components."""

    representative: Any
    members: List[Tuple[Vertex, ...]]
    torsion: bool = False

    @property
    def count(self) -> int:
        return len(self.members)


@dataclass
class MultiplicityTable:
    """Connected components of a window graph, counted by isomorphism class."""

    classes: List[ComponentClass] = field(default_factory=list)

    def counts(self) -> List[int]:
        return [c.count for c in self.classes]

    @property
    def component_count(self) -> int:
        return sum(self.counts())


@dataclass(frozen=True)
class DoublingRow:
    """Counts for one class of half components."""

    vertices: int
    edges: int
    plus_count: int
    pm_count: int

    @property
    def holds(self) -> bool:
        return self.plus_count == 2 * self.pm_count


@dataclass(frozen=True)
class DoublingReport:
    rows: Tuple[DoublingRow, ...]
    unmatched_plus_classes: int = 0

    @property
    def passed(self) -> bool:
        return self.unmatched_plus_classes == 0 and all(r.holds for r in self.rows)


@dataclass(frozen=True)
class VariantMatch:
    """An isomorphism built between variants, or None with the first mismatch."""

    mapping: Optional[Mapping]
    evidence: str


@dataclass(frozen=True)
class SSetDescriptor:
    """Window slice of S(x, y) and, where decided, whether S(x, y) is finite."""

    x: Element
    y: Element
    window_slice: Tuple[Vertex, ...]
    finite: Optional[bool] = None
    evidence: str = ""


@dataclass(frozen=True)
class GrowthObservation:
    """Sizes of S(x, y) window slices over doubling windows."""

    windows: Tuple[int, ...]
    sizes: Tuple[int, ...]

    @property
    def finite(self) -> Optional[bool]:
        """False on strict growth, True once the last doubling adds nothing."""
        if all(a < b for a, b in zip(self.sizes, self.sizes[1:])):
            return False
        if self.sizes[-1] == self.sizes[-2]:
            return True
        return None


@dataclass(frozen=True)
class PhiReport:
    """Checks of the inversion map x -> a^2/x on a closed window of Q."""

    a: Fraction
    vertices: int
    adjacency_preserved: bool
    edges_reversed: bool
    in_onto_out: bool

    @property
    def passed(self) -> bool:
        return self.adjacency_preserved and self.edges_reversed and self.in_onto_out


@dataclass(frozen=True)
class NeighborSplit:
    """In, out and mixed neighbors of z, all excluding z and its inverse."""

    z: Element
    incoming: FrozenSet[Vertex]
    outgoing: FrozenSet[Vertex]
    mixed: FrozenSet[Vertex]
    outgoing_components: Tuple[FrozenSet[Vertex], ...]

    @property
    def outgoing_closed(self) -> bool:
        """O(z) is a union of components of the complement graph on M(z)."""
        covered = frozenset().union(*self.outgoing_components)
        return covered == self.outgoing

    @property
    def outgoing_connected(self) -> bool:
        return len(self.outgoing_components) == 1 and self.outgoing_closed


@dataclass(frozen=True)
class PrimeSet:
    """A finite set of primes, or the complement of one when `cofinite`."""

    cofinite: bool
    primes: FrozenSet[int] = frozenset()

    def __contains__(self, prime: int) -> bool:
        return (prime in self.primes) != self.cofinite

    @property
    def is_infinite(self) -> bool:
        return self.cofinite

    def issubset(self, other: "PrimeSet") -> bool:
        if not self.cofinite and not other.cofinite:
            return self.primes <= other.primes
        if not self.cofinite:
            return not (self.primes & other.primes)
        if not other.cofinite:
            return False
        return other.primes <= self.primes


@dataclass(frozen=True)
class NeighborPreorder:
    """
    Preorder on the out or in neighbors of a base element of a rational subgroup.

    `minimal` holds the primes p whose class {base*p, -base*p} (out side) or
    {base/p, -base/p} (in side) is minimal, `chains` the primes whose minimal
    class starts an infinite ascending chain. Window classes are filled only when
    a window was supplied.
    """

    side: NeighborSide
    base: Fraction
    minimal: PrimeSet
    chains: PrimeSet
    window_classes: Tuple[Tuple[Fraction, Fraction], ...] = ()
    window_minimal: Tuple[Tuple[Fraction, Fraction], ...] = ()


@dataclass(frozen=True)
class OrientationReport:
    """Recovered directions compared with the exponent-equation ground truth."""

    pairs_checked: int
    agreements: int
    disagreements: Tuple[Tuple[Element, Element], ...] = ()

    @property
    def agreement_ratio(self) -> float:
        if self.pairs_checked == 0:
            return 1.0
        return self.agreements / self.pairs_checked


@dataclass(frozen=True)
class TransferReport:
    """Action of a Z±-power graph isomorphism on the directed edges of a component."""

    verdict: TransferVerdict
    preserved: int
    reversed: int
    offending: Tuple[Tuple[Vertex, Vertex], ...] = ()
    neighbor_exchange: Optional[bool] = None


class CheckReport(BaseModel):
    """One line of a JSON-lines check report."""

    model_config = ConfigDict(populate_by_name=True)

    check: str
    group: str
    window: str
    variant: Optional[str] = None
    passed: bool = Field(serialization_alias="pass")
    evidence: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None

    def to_json_line(self) -> str:
        return self.model_dump_json(by_alias=True)


class RunConfig(BaseModel):
    """Validated command line configuration."""

    command: str
    group: Optional[str] = None
    table: Optional[str] = None
    heights: Optional[str] = None
    window: Optional[PositiveInt] = None
    max_denominator: Optional[PositiveInt] = None
    variant: Variant = Variant.Z
    directed: bool = False
    output_format: OutputFormat = OutputFormat.DOT
    profile: Profile = Profile.DESK
    jobs: PositiveInt = 1
    seed: int = 0
    cap: PositiveInt = DEFAULT_RESOURCE_CAP
    output: str = "-"

    @model_validator(mode="after")
    def _check_group_source(self) -> "RunConfig":
        sources = [s for s in (self.group, self.table, self.heights) if s]
        if len(sources) > 1:
            raise ValueError("use only one of --group, --table and --heights")
        return self

    @property
    def window_spec(self) -> WindowSpec:
        return WindowSpec(bound=self.window, denominator_bound=self.max_denominator)


class PowerGraphError(Exception):
    """Base class for errors raised by the toolkit"""


class ConfigurationError(PowerGraphError):
    """An error in the requested group, window or run configuration"""


class GroupSpecError(ConfigurationError):
    """A group description that cannot be parsed"""

    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"Invalid group description at '{key}': {reason}")


class InvalidGroupTable(ConfigurationError):
    """A Cayley table failing the group axioms"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Cayley table is not a group table: {reason}")


class InvalidWindow(ConfigurationError):
    """A window that does not fit the group family"""

    def __init__(self, family: Family, reason: str):
        self.family = family
        self.reason = reason
        super().__init__(f"Invalid window for {family.value}: {reason}")


class WindowTooLarge(PowerGraphError):
    """A window whose carrier exceeds the resource cap"""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"Window carrier exceeds the resource cap of {cap} elements")


class ElementNotInGroup(PowerGraphError):
    """A value that is not an element of the group"""

    def __init__(self, element: Any, group_name: str):
        self.element = element
        self.group_name = group_name
        super().__init__(f"'{element}' is not an element of {group_name}")


class InvalidCarrier(PowerGraphError):
    """A carrier missing the identity or not closed under inversion"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Invalid carrier: {reason}")


class UnknownVertex(PowerGraphError):
    """A vertex that is not in the graph"""

    def __init__(self, vertex: Any):
        self.vertex = vertex
        super().__init__(f"Vertex '{vertex}' is not in the graph")


class PartitionMismatch(PowerGraphError):
    """A partition that is not the twin partition of the graph"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Partition is not the twin partition: {reason}")


class UnsupportedFamily(PowerGraphError):
    """An operation requested for a family it is not defined on"""

    def __init__(self, family: Family, operation: str):
        self.family = family
        self.operation = operation
        super().__init__(f"'{operation}' is not supported for {family.value} groups")


class TorsionComponent(PowerGraphError):
    """A component containing elements of finite order"""

    def __init__(self, element: Any):
        self.element = element
        super().__init__(f"Component contains '{element}' of finite order")


class SplitFailed(PowerGraphError):
    """A component that does not split into two inverse N-power components"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Component split failed: {reason}")


class NotAnIsomorphism(PowerGraphError):
    """A vertex map failing isomorphism verification"""

    def __init__(self, stage: str):
        self.stage = stage
        super().__init__(f"Map is not an isomorphism of the {stage} graphs")


class VariantMismatch(PowerGraphError):
    """A bundle of the wrong variant"""

    def __init__(self, expected: Variant, got: Variant):
        self.expected = expected
        self.got = got
        super().__init__(f"Expected a '{expected.value}' bundle, got '{got.value}'")


class HypothesisViolated(PowerGraphError):
    """A group without unique maximal cyclic subgroups"""

    def __init__(self, group_name: str):
        self.group_name = group_name
        super().__init__(
            f"{group_name} does not have unique maximal cyclic subgroups, "
            "orientation cannot be recovered"
        )


class NotAdjacent(PowerGraphError):
    """A pair of elements that is not an edge of the Z±-power graph"""

    def __init__(self, x: Any, y: Any):
        self.x = x
        self.y = y
        super().__init__(f"'{x}' and '{y}' are not adjacent in the Z±-power graph")


class PreconditionFailed(PowerGraphError):
    """An operation called outside its hypotheses"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Precondition failed: {reason}")
