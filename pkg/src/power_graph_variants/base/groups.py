"""Symbolic group models with exact power arithmetic."""
import itertools
import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Generator, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import factorint, nextprime

from power_graph_variants.base.types import (
    INFINITE_HEIGHT,
    Element,
    ElementNotInGroup,
    ExponentSet,
    Family,
    Height,
    HeightFunction,
    InvalidGroupTable,
    InvalidWindow,
    SubgroupClassification,
    WindowSpec,
    WindowTooLarge,
)

_LOGGER = logging.getLogger(__file__)

Order = Union[int, float]

# Coordinate cube [-3, 3]^3 sampled for the nilpotency class of infinite families
NILPOTENCY_SAMPLE_WINDOW = WindowSpec(bound=3)


@lru_cache(maxsize=None)
def _denominator_allowed(
    default_height: Height, exceptions: Tuple[Tuple[int, Height], ...], denominator: int
) -> bool:
    heights = dict(exceptions)
    return all(
        exponent <= heights.get(p, default_height)
        for p, exponent in factorint(denominator).items()
    )


class GroupModel(ABC):
    """Base class for all group families."""

    family: Family
    name: str

    @property
    @abstractmethod
    def identity(self) -> Element:
        """The identity element"""

        raise NotImplementedError("identity not implemented")

    @abstractmethod
    def contains(self, g: object) -> bool:
        """Whether a value is an element of the group"""

        raise NotImplementedError("contains() not implemented")

    @abstractmethod
    def mul(self, g: Element, h: Element) -> Element:
        """The group product g*h"""

        raise NotImplementedError("mul() not implemented")

    @abstractmethod
    def inverse(self, g: Element) -> Element:
        """The inverse of g"""

        raise NotImplementedError("inverse() not implemented")

    @abstractmethod
    def solve_power_of(self, y: Element, x: Element) -> ExponentSet:
        """The set of exponents n with x^n = y"""

        raise NotImplementedError("solve_power_of() not implemented")

    @abstractmethod
    def iter_carrier(self, window: WindowSpec) -> Generator[Element, None, None]:
        """Generate the window carrier, identity first, without repeats"""

        raise NotImplementedError("iter_carrier() not implemented")

    @abstractmethod
    def root_candidates(
        self, x: Element, bound: int
    ) -> Generator[Element, None, None]:
        """Generate the z with z^n = x for 1 <= n <= bound, largest n first"""

        raise NotImplementedError("root_candidates() not implemented")

    def check(self, g: Element) -> Element:
        if not self.contains(g):
            raise ElementNotInGroup(g, self.name)
        return g

    def power(self, g: Element, n: int) -> Element:
        """g^n by repeated squaring, negative n through the inverse."""
        if n < 0:
            g, n = self.inverse(g), -n
        result = self.identity
        square = g
        while n:
            if n & 1:
                result = self.mul(result, square)
            square = self.mul(square, square)
            n >>= 1
        return result

    def element_order(self, g: Element) -> Order:
        if g == self.identity:
            return 1
        return math.inf

    @property
    def is_torsion_free(self) -> bool:
        return True

    def commutator(self, g: Element, h: Element) -> Element:
        """[g, h] = g^-1 h^-1 g h"""
        return self.mul(
            self.mul(self.inverse(g), self.inverse(h)), self.mul(g, h)
        )

    def _nilpotency_sample(self) -> List[Element]:
        return list(self.iter_carrier(NILPOTENCY_SAMPLE_WINDOW))

    @cached_property
    def nilpotency_class_at_most_2(self) -> bool:
        """Every commutator of sample elements commutes with every sample element."""
        sample = self._nilpotency_sample()
        commutators = {self.commutator(g, h) for g in sample for h in sample}
        _LOGGER.debug(
            "Checking commutators are central.",
            extra={
                "props": {"group": self.name, "commutators": len(commutators)}
            },
        )
        return all(
            self.mul(c, k) == self.mul(k, c) for c in commutators for k in sample
        )

    def cyclic_generator(self) -> Optional[Element]:
        """A generator when the group is cyclic, None otherwise."""
        return None

    def has_unique_maximal_cyclic(self) -> bool:
        """Every nonidentity element lies in exactly one maximal cyclic subgroup."""
        return False

    def carrier(self, window: WindowSpec, cap: Optional[int] = None) -> List[Element]:
        """
        Materialise the window carrier.

        :param WindowSpec window: the family-specific truncation
        :param Optional[int] cap: the largest carrier allowed, checked while
            generating so oversized windows are rejected before construction
        :return List[Element]: the carrier, identity first
        """
        generator = self.iter_carrier(window)
        if cap is None:
            return list(generator)
        elements = list(itertools.islice(generator, cap + 1))
        if len(elements) > cap:
            raise WindowTooLarge(cap)
        return elements

    def largest_magnitude(self, elements: Iterable[Element]) -> int:
        """Bound on root exponents that makes witness searches complete."""
        return max((abs(int(g)) for g in elements), default=1)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class FiniteCayleyGroup(GroupModel):
    """A finite group given by a Cayley table on the indices 0..n-1."""

    family = Family.FINITE_CAYLEY

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        identity: Optional[int] = None,
        name: str = "group",
    ):
        self.name = name
        self.table: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self._validate_table()
        self._identity = self._find_identity(identity)
        self._inverses = tuple(self._find_inverse(g) for g in range(self.order))
        self._validate_associative()

    def _validate_table(self) -> None:
        n = self.order
        if n == 0:
            raise InvalidGroupTable("table is empty")
        if any(len(row) != n for row in self.table):
            raise InvalidGroupTable("table is not square")
        full = set(range(n))
        for i, row in enumerate(self.table):
            if set(row) != full:
                raise InvalidGroupTable(f"row {i} is not a permutation of 0..{n - 1}")
        for j in range(n):
            if {row[j] for row in self.table} != full:
                raise InvalidGroupTable(
                    f"column {j} is not a permutation of 0..{n - 1}"
                )

    def _find_identity(self, identity: Optional[int]) -> int:
        candidates = [identity] if identity is not None else range(self.order)
        for e in candidates:
            if not 0 <= e < self.order:
                raise InvalidGroupTable(f"identity {e} is out of range")
            if all(
                self.table[e][g] == g == self.table[g][e] for g in range(self.order)
            ):
                return e
        raise InvalidGroupTable("no two-sided identity")

    def _find_inverse(self, g: int) -> int:
        for h in range(self.order):
            if self.table[g][h] == self._identity == self.table[h][g]:
                return h
        raise InvalidGroupTable(f"element {g} has no two-sided inverse")

    def _validate_associative(self) -> None:
        t = self.table
        for a, b, c in itertools.product(range(self.order), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise InvalidGroupTable(f"({a}*{b})*{c} != {a}*({b}*{c})")

    @property
    def identity(self) -> int:
        return self._identity

    def contains(self, g: object) -> bool:
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.order

    def mul(self, g: int, h: int) -> int:
        return self.table[self.check(g)][self.check(h)]

    def inverse(self, g: int) -> int:
        return self._inverses[self.check(g)]

    def cyclic_sequence(self, g: int) -> List[int]:
        """g^0, g^1, ... up to the last power before returning to the identity."""
        sequence = [self._identity]
        current = self.check(g)
        while current != self._identity:
            sequence.append(current)
            current = self.table[current][g]
        return sequence

    def element_order(self, g: int) -> int:
        return len(self.cyclic_sequence(g))

    @property
    def is_torsion_free(self) -> bool:
        return self.order == 1

    def solve_power_of(self, y: int, x: int) -> ExponentSet:
        sequence = self.cyclic_sequence(x)
        self.check(y)
        if y not in sequence:
            return ExponentSet.empty()
        return ExponentSet(residue=sequence.index(y), modulus=len(sequence))

    def iter_carrier(self, window: WindowSpec) -> Generator[int, None, None]:
        yield self._identity
        for g in range(self.order):
            if g != self._identity:
                yield g

    def _nilpotency_sample(self) -> List[int]:
        return list(range(self.order))

    def cyclic_generator(self) -> Optional[int]:
        for g in range(self.order):
            if self.element_order(g) == self.order:
                return g
        return None

    @cached_property
    def _maximal_cyclic_subgroups(self) -> List[frozenset]:
        subgroups = {frozenset(self.cyclic_sequence(g)) for g in range(self.order)}
        return [s for s in subgroups if not any(s < t for t in subgroups)]

    def has_unique_maximal_cyclic(self) -> bool:
        return all(
            sum(g in s for s in self._maximal_cyclic_subgroups) == 1
            for g in range(self.order)
            if g != self._identity
        )

    def root_candidates(self, x: int, bound: int) -> Generator[int, None, None]:
        seen = set()
        for n in range(min(bound, self.order), 0, -1):
            for z in range(self.order):
                if z not in seen and self.power(z, n) == x:
                    seen.add(z)
                    yield z

    def largest_magnitude(self, elements: Iterable[int]) -> int:
        return self.order


class IntegerGroup(GroupModel):
    """The additive group of the integers."""

    family = Family.INTEGERS

    def __init__(self, name: str = "integers"):
        self.name = name

    @property
    def identity(self) -> int:
        return 0

    def contains(self, g: object) -> bool:
        return isinstance(g, int) and not isinstance(g, bool)

    def mul(self, g: int, h: int) -> int:
        return self.check(g) + self.check(h)

    def power(self, g: int, n: int) -> int:
        return n * self.check(g)

    def inverse(self, g: int) -> int:
        return -self.check(g)

    def solve_power_of(self, y: int, x: int) -> ExponentSet:
        self.check(x), self.check(y)
        if x == 0:
            return ExponentSet(residue=0, modulus=1) if y == 0 else ExponentSet.empty()
        if y % x:
            return ExponentSet.empty()
        return ExponentSet(residue=y // x)

    def iter_carrier(self, window: WindowSpec) -> Generator[int, None, None]:
        if window.bound is None:
            raise InvalidWindow(self.family, "a bound N is required")
        yield 0
        for k in range(1, window.bound + 1):
            yield k
            yield -k

    def cyclic_generator(self) -> int:
        return 1

    def has_unique_maximal_cyclic(self) -> bool:
        return True

    @cached_property
    def nilpotency_class_at_most_2(self) -> bool:
        return True

    def root_candidates(self, x: int, bound: int) -> Generator[int, None, None]:
        for n in range(min(bound, abs(x)), 0, -1):
            if x % n == 0:
                yield x // n


class RationalSubgroup(GroupModel):
    """The subgroup of (Q, +) described by a height function."""

    family = Family.RATIONAL_SUBGROUP

    def __init__(self, heights: HeightFunction, name: Optional[str] = None):
        self.heights = heights
        self.name = name or f"rationals[{heights.describe()}]"
        self._height_items = tuple(heights.exceptions.items())

    @property
    def identity(self) -> Fraction:
        return Fraction(0)

    def contains(self, g: object) -> bool:
        if not isinstance(g, (Fraction, int)) or isinstance(g, bool):
            return False
        return self.contains_denominator(Fraction(g).denominator)

    def contains_denominator(self, denominator: int) -> bool:
        """Whether a reduced fraction with this denominator belongs to the group."""
        return _denominator_allowed(
            self.heights.default_height, self._height_items, denominator
        )

    def check(self, g: Element) -> Fraction:
        if not self.contains(g):
            raise ElementNotInGroup(g, self.name)
        return Fraction(g)

    def mul(self, g: Fraction, h: Fraction) -> Fraction:
        return self.check(g) + self.check(h)

    def power(self, g: Fraction, n: int) -> Fraction:
        return n * self.check(g)

    def inverse(self, g: Fraction) -> Fraction:
        return -self.check(g)

    def solve_power_of(self, y: Fraction, x: Fraction) -> ExponentSet:
        x, y = self.check(x), self.check(y)
        if x == 0:
            return ExponentSet(residue=0, modulus=1) if y == 0 else ExponentSet.empty()
        ratio = y / x
        if ratio.denominator != 1:
            return ExponentSet.empty()
        return ExponentSet(residue=ratio.numerator)

    def iter_carrier(self, window: WindowSpec) -> Generator[Fraction, None, None]:
        if window.bound is None:
            raise InvalidWindow(self.family, "a numerator bound is required")
        yield Fraction(0)
        positives = sorted(
            Fraction(num, den)
            for den in range(1, window.max_denominator + 1)
            if self.contains_denominator(den)
            for num in range(1, window.bound + 1)
            if math.gcd(num, den) == 1
        )
        for q in positives:
            yield q
            yield -q

    def cyclic_generator(self) -> Optional[Fraction]:
        if not self.heights.is_cyclic:
            return None
        return Fraction(1, math.prod(p**h for p, h in self.heights.exceptions.items()))

    def has_unique_maximal_cyclic(self) -> bool:
        return self.heights.is_cyclic

    @cached_property
    def nilpotency_class_at_most_2(self) -> bool:
        return True

    def root_candidates(
        self, x: Fraction, bound: int
    ) -> Generator[Fraction, None, None]:
        x = self.check(x)
        for n in range(bound, 0, -1):
            if self.contains(x / n):
                yield x / n

    def largest_magnitude(self, elements: Iterable[Fraction]) -> int:
        elements = list(elements)
        numerator = max((abs(q.numerator) for q in elements), default=1)
        denominator = max((q.denominator for q in elements), default=1)
        return numerator * denominator**2


class HeisenbergGroup(GroupModel):
    """
    The discrete Heisenberg group as integer triples.

    (a, b, c)(a', b', c') = (a + a', b + b', c + c' + ab'), which is the product of
    the unitriangular matrices [[1, a, c], [0, 1, b], [0, 0, 1]].
    """

    family = Family.HEISENBERG

    def __init__(self, name: str = "heisenberg"):
        self.name = name

    @property
    def identity(self) -> Tuple[int, int, int]:
        return (0, 0, 0)

    def contains(self, g: object) -> bool:
        return (
            isinstance(g, tuple)
            and len(g) == 3
            and all(isinstance(v, int) and not isinstance(v, bool) for v in g)
        )

    def mul(self, g, h) -> Tuple[int, int, int]:
        (a, b, c), (d, e, f) = self.check(g), self.check(h)
        return (a + d, b + e, c + f + a * e)

    def power(self, g, n: int) -> Tuple[int, int, int]:
        a, b, c = self.check(g)
        return (n * a, n * b, n * c + n * (n - 1) // 2 * a * b)

    def inverse(self, g) -> Tuple[int, int, int]:
        a, b, c = self.check(g)
        return (-a, -b, a * b - c)

    def solve_power_of(self, y, x) -> ExponentSet:
        self.check(y)
        a, b, c = self.check(x)
        if (a, b, c) == self.identity:
            if y == self.identity:
                return ExponentSet(residue=0, modulus=1)
            return ExponentSet.empty()
        for coordinate, target in ((a, y[0]), (b, y[1]), (c, y[2])):
            if coordinate:
                if target % coordinate:
                    return ExponentSet.empty()
                n = target // coordinate
                break
        if self.power(x, n) != y:
            return ExponentSet.empty()
        return ExponentSet(residue=n)

    def iter_carrier(self, window: WindowSpec) -> Generator[Tuple, None, None]:
        if window.bound is None:
            raise InvalidWindow(self.family, "a coordinate bound is required")
        span = range(-window.bound, window.bound + 1)
        yield self.identity
        seen = {self.identity}
        cube = [g for g in itertools.product(span, repeat=3) if g != self.identity]
        # the cube is not closed under inversion, so its inverses are appended
        for g in itertools.chain(cube, (self.inverse(g) for g in cube)):
            if g not in seen:
                seen.add(g)
                yield g

    def _nilpotency_sample(self) -> List[Tuple[int, int, int]]:
        bound = NILPOTENCY_SAMPLE_WINDOW.bound
        return list(itertools.product(range(-bound, bound + 1), repeat=3))

    def has_unique_maximal_cyclic(self) -> bool:
        return True

    def root_candidates(self, x, bound: int) -> Generator[Tuple, None, None]:
        a, b, c = self.check(x)
        for n in range(bound, 0, -1):
            if a or b:
                if a % n or b % n:
                    continue
                root_a, root_b = a // n, b // n
                rest = c - n * (n - 1) // 2 * root_a * root_b
                if rest % n == 0:
                    yield (root_a, root_b, rest // n)
            elif c % n == 0:
                yield (0, 0, c // n)

    def largest_magnitude(self, elements: Iterable) -> int:
        return max((abs(v) for g in elements for v in g), default=1)


def mul(G: GroupModel, g: Element, h: Element) -> Element:
    return G.mul(g, h)


def power(G: GroupModel, g: Element, n: int) -> Element:
    return G.power(G.check(g), n)


def element_order(G: GroupModel, g: Element) -> Order:
    return G.element_order(G.check(g))


def solve_power_of(G: GroupModel, y: Element, x: Element) -> ExponentSet:
    return G.solve_power_of(y, x)


def nilpotency_class_at_most_2(G: GroupModel) -> bool:
    return G.nilpotency_class_at_most_2


def local_cyclicity_witness(
    G: GroupModel, x: Element, y: Element, bound: int
) -> Optional[Element]:
    """
    Find z with x and y both in the cyclic subgroup generated by z.

    Every common root of x and y is a root of x, so the roots of x with exponent at
    most `bound` are tried in turn. None means no witness within the bound.
    """
    for z in G.root_candidates(x, bound):
        if not G.solve_power_of(y, z).is_empty:
            return z
    return None


def classify_rational_subgroup(heights: HeightFunction) -> SubgroupClassification:
    """
    Decide whether a height function describes all of Q.

    :param HeightFunction heights: the subgroup description
    :return SubgroupClassification: `is_q` when every prime has infinite height,
        otherwise the smallest prime of finite height as witness
    """
    finite = sorted(p for p, h in heights.exceptions.items() if h != INFINITE_HEIGHT)
    if heights.default_height == INFINITE_HEIGHT:
        if not finite:
            return SubgroupClassification(is_q=True)
        return SubgroupClassification(is_q=False, witness_prime=finite[0])
    prime = 2
    while heights.height(prime) == INFINITE_HEIGHT:
        prime = nextprime(prime)
    return SubgroupClassification(is_q=False, witness_prime=prime)
