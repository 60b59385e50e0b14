import itertools
import math
import random
from fractions import Fraction

import pytest

from power_graph_variants.base.catalog import height_catalog, preset
from power_graph_variants.base.groups import (
    FiniteCayleyGroup,
    RationalSubgroup,
    classify_rational_subgroup,
    local_cyclicity_witness,
)
from power_graph_variants.base.types import (
    INFINITE_HEIGHT,
    ElementNotInGroup,
    ExponentSet,
    HeightFunction,
    InvalidGroupTable,
    InvalidWindow,
    Variant,
    WindowSpec,
    WindowTooLarge,
)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("y", "x", "want"),
    (
        [6, 2, ExponentSet(residue=3)],
        [-6, 2, ExponentSet(residue=-3)],
        [5, 2, ExponentSet.empty()],
        [0, 3, ExponentSet(residue=0)],
        [0, 0, ExponentSet(residue=0, modulus=1)],
        [4, 0, ExponentSet.empty()],
    ),
)
def test_integer_exponent_equations(integers, y, x, want):
    got = integers.solve_power_of(y, x)
    assert got == want


@pytest.mark.unit
def test_heisenberg_arithmetic(heisenberg):
    """Test the Heisenberg product, powers and inverses agree with each other."""
    x = (1, 1, 0)
    assert heisenberg.mul(x, x) == (2, 2, 1)
    assert heisenberg.power(x, 2) == (2, 2, 1)
    assert heisenberg.power(x, 3) == heisenberg.mul(heisenberg.mul(x, x), x)
    assert heisenberg.inverse(x) == (-1, -1, 1)
    assert heisenberg.mul(x, heisenberg.inverse(x)) == heisenberg.identity
    assert heisenberg.power(x, -2) == heisenberg.inverse(heisenberg.power(x, 2))


@pytest.mark.unit
def test_heisenberg_exponent_equations(heisenberg):
    assert heisenberg.solve_power_of((2, 2, 1), (1, 1, 0)) == ExponentSet(residue=2)
    assert heisenberg.solve_power_of((2, 2, 0), (1, 1, 0)).is_empty
    assert heisenberg.solve_power_of((0, 0, 3), (0, 0, 1)) == ExponentSet(residue=3)
    assert heisenberg.solve_power_of((0, 0, 0), (1, 0, 0)) == ExponentSet(residue=0)


@pytest.mark.unit
def test_finite_group_exponents(z6):
    assert z6.solve_power_of(4, 2) == ExponentSet(residue=2, modulus=3)
    assert z6.solve_power_of(0, 3) == ExponentSet(residue=0, modulus=2)
    assert z6.solve_power_of(1, 2).is_empty
    assert z6.element_order(1) == 6
    assert z6.element_order(3) == 2


@pytest.mark.unit
@pytest.mark.parametrize(
    ("residue", "modulus", "variant", "want"),
    (
        [0, 0, Variant.Z, True],
        [0, 0, Variant.ZPM, False],
        [0, 0, Variant.NPLUS, False],
        [-2, 0, Variant.ZPM, True],
        [-2, 0, Variant.NPLUS, False],
        [0, 3, Variant.NPLUS, True],
        [0, 3, Variant.ZPM, True],
    ),
)
def test_exponent_set_meets(residue, modulus, variant, want):
    got = ExponentSet(residue=residue, modulus=modulus).meets(variant)
    assert got == want


@pytest.mark.unit
@pytest.mark.parametrize(
    ("table", "reason"),
    (
        [[], "empty"],
        [[[0, 1], [1, 1]], "permutation"],
        [[[0, 1, 2], [1, 2, 0]], "square"],
        [[[0, 2, 1], [2, 1, 0], [1, 0, 2]], "identity"],
    ),
)
def test_invalid_cayley_tables(table, reason):
    with pytest.raises(InvalidGroupTable) as error:
        FiniteCayleyGroup(table)
    assert reason in str(error.value)


@pytest.mark.unit
def test_non_associative_table_is_rejected():
    """A Latin square with identity 0 that is not associative."""
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(InvalidGroupTable):
        FiniteCayleyGroup(table)


@pytest.mark.unit
def test_elements_are_checked(integers, dyadic):
    with pytest.raises(ElementNotInGroup):
        integers.mul(1, Fraction(1, 2))
    with pytest.raises(ElementNotInGroup):
        dyadic.inverse(Fraction(1, 3))
    assert dyadic.inverse(Fraction(1, 4)) == Fraction(-1, 4)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("name", "value", "want"),
    (
        ["z-inv-2", Fraction(1, 4), True],
        ["z-inv-2", Fraction(1, 3), False],
        ["height-one", Fraction(1, 2), True],
        ["height-one", Fraction(1, 6), True],
        ["height-one", Fraction(1, 4), False],
        ["rationals", Fraction(5, 48), True],
        ["integers", 3, True],
    ),
)
def test_membership(name, value, want):
    got = preset(name).contains(value)
    assert got == want


@pytest.mark.unit
def test_carriers(integers, rationals, heisenberg):
    assert integers.carrier(WindowSpec(bound=3)) == [0, 1, -1, 2, -2, 3, -3]
    assert rationals.carrier(WindowSpec(bound=2)) == [
        Fraction(0),
        Fraction(1, 2),
        Fraction(-1, 2),
        Fraction(1),
        Fraction(-1),
        Fraction(2),
        Fraction(-2),
    ]
    carrier = heisenberg.carrier(WindowSpec(bound=1))
    assert carrier[0] == (0, 0, 0)
    assert len(carrier) == len(set(carrier))
    assert {heisenberg.inverse(g) for g in carrier} == set(carrier)


@pytest.mark.unit
def test_carrier_limits(integers, heisenberg):
    with pytest.raises(WindowTooLarge):
        integers.carrier(WindowSpec(bound=10), cap=5)
    with pytest.raises(InvalidWindow):
        heisenberg.carrier(WindowSpec())


@pytest.mark.unit
@pytest.mark.parametrize(
    ("name", "want"),
    (
        ["integers", True],
        ["heisenberg", True],
        ["rationals", False],
        ["z6", True],
        ["s3", True],
        ["q8", False],
    ),
)
def test_unique_maximal_cyclic(name, want):
    got = preset(name).has_unique_maximal_cyclic()
    assert got == want


@pytest.mark.unit
@pytest.mark.parametrize(
    ("name", "want"),
    (
        ["integers", True],
        ["rationals", True],
        ["heisenberg", True],
        ["q8", True],
        ["s3", False],
    ),
)
def test_nilpotency_class(name, want):
    got = preset(name).nilpotency_class_at_most_2
    assert got == want


@pytest.mark.unit
def test_cyclic_generators(integers, rationals, z6):
    assert integers.cyclic_generator() == 1
    assert rationals.cyclic_generator() is None
    assert z6.element_order(z6.cyclic_generator()) == 6
    assert preset("q8").cyclic_generator() is None
    eighths = RationalSubgroup(HeightFunction(exceptions={2: 3}))
    assert eighths.cyclic_generator() == Fraction(1, 8)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("heights", "is_q", "witness"),
    (
        [HeightFunction(default_height=INFINITE_HEIGHT), True, None],
        [HeightFunction(default_height=1), False, 2],
        [HeightFunction(exceptions={2: INFINITE_HEIGHT}), False, 3],
        [
            HeightFunction(default_height=INFINITE_HEIGHT, exceptions={5: 2}),
            False,
            5,
        ],
        [HeightFunction(), False, 2],
    ),
)
def test_classify_rational_subgroup(heights, is_q, witness):
    got = classify_rational_subgroup(heights)
    assert got.is_q == is_q
    assert got.witness_prime == witness


@pytest.mark.unit
def test_local_cyclicity_witness(integers, heisenberg, rationals):
    z = local_cyclicity_witness(integers, 4, 6, bound=6)
    assert z is not None
    assert not integers.solve_power_of(4, z).is_empty
    assert not integers.solve_power_of(6, z).is_empty

    z = local_cyclicity_witness(rationals, Fraction(1, 2), Fraction(1, 3), bound=6)
    assert z == Fraction(1, 12)

    x, y = (2, 0, 0), (3, 0, 0)
    z = local_cyclicity_witness(heisenberg, x, y, bound=3)
    assert z == (1, 0, 0)
    assert local_cyclicity_witness(heisenberg, (1, 0, 0), (0, 1, 0), bound=3) is None


LAW_WINDOWS = (
    ["z6", WindowSpec()],
    ["s3", WindowSpec()],
    ["q8", WindowSpec()],
    ["integers", WindowSpec(bound=4)],
    ["rationals", WindowSpec(bound=2)],
    ["z-inv-2", WindowSpec(bound=3)],
    ["heisenberg", WindowSpec(bound=1)],
)


@pytest.mark.unit
@pytest.mark.parametrize(("name", "window"), LAW_WINDOWS)
def test_group_laws(name, window):
    G = preset(name)
    elements = G.carrier(window)
    e = G.identity
    for g in elements:
        assert G.mul(e, g) == g == G.mul(g, e)
        assert G.mul(g, G.inverse(g)) == e == G.mul(G.inverse(g), g)
    for g, h, k in itertools.product(elements, repeat=3):
        assert G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))


@pytest.mark.unit
@pytest.mark.parametrize(("name", "window"), LAW_WINDOWS)
def test_powers_add_exponents(name, window):
    G = preset(name)
    exponents = range(-12, 13)
    for g in G.carrier(window):
        assert G.power(g, 0) == G.identity
        for m, n in itertools.product(exponents, repeat=2):
            assert G.power(g, m + n) == G.mul(G.power(g, m), G.power(g, n))


@pytest.mark.unit
@pytest.mark.parametrize(("name", "window"), LAW_WINDOWS)
def test_exponent_equations_match_a_scan(name, window):
    """Solutions of x^n = y within these windows all have |n| <= 16."""
    G = preset(name)
    elements = G.carrier(window)
    scan = range(-16, 17)
    for x, y in itertools.product(elements, repeat=2):
        exponents = G.solve_power_of(y, x)
        got = {n for n in scan if n in exponents}
        want = {n for n in scan if G.power(x, n) == y}
        assert got == want
        assert exponents.is_empty == (not want)


@pytest.mark.unit
def test_heisenberg_power_matches_repeated_products(heisenberg):
    for g in itertools.product(range(-4, 5), repeat=3):
        want = heisenberg.identity
        for n in range(9):
            assert heisenberg.power(g, n) == want
            assert heisenberg.power(g, -n) == heisenberg.inverse(want)
            want = heisenberg.mul(want, g)


@pytest.mark.unit
@pytest.mark.parametrize(("name", "window"), LAW_WINDOWS)
def test_element_orders(name, window):
    G = preset(name)
    for g in G.carrier(window):
        order = G.element_order(g)
        if g == G.identity:
            assert order == 1
        elif G.is_torsion_free:
            assert order == math.inf
        else:
            assert G.order % order == 0
            assert G.power(g, order) == G.identity


@pytest.mark.unit
@pytest.mark.parametrize(("label", "heights"), height_catalog())
def test_height_subgroups_are_closed(label, heights):
    G = RationalSubgroup(heights, name=label)
    rng = random.Random(label)
    samples = (Fraction(rng.randint(-60, 60), rng.randint(1, 60)) for _ in range(400))
    members = [Fraction(1)] + [q for q in samples if G.contains(q)][:40]
    for q in members:
        assert G.contains(G.inverse(q))
        for r in members:
            assert G.contains(G.mul(q, r))


@pytest.mark.unit
def test_membership_leaves_the_group_unchanged(dyadic):
    before = dict(vars(dyadic))
    assert dyadic.contains(Fraction(3, 8))
    assert not dyadic.contains(Fraction(1, 6))
    assert list(dyadic.carrier(WindowSpec(bound=2, denominator_bound=4)))
    assert vars(dyadic) == before


@pytest.mark.unit
def test_heisenberg_nilpotency_sample_is_the_coordinate_cube(heisenberg):
    sample = heisenberg._nilpotency_sample()
    assert len(sample) == len(set(sample)) == 7**3
    assert {v for g in sample for v in g} == set(range(-3, 4))
