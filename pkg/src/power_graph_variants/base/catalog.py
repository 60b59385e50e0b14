"""Named group presets and group description loading."""
import itertools
import json
import logging
import re
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError
from sympy import isprime

from power_graph_variants.base.groups import (
    FiniteCayleyGroup,
    GroupModel,
    HeisenbergGroup,
    IntegerGroup,
    RationalSubgroup,
)
from power_graph_variants.base.types import (
    INFINITE_HEIGHT,
    Family,
    GroupDescription,
    GroupSpecError,
    HeightFunction,
    Profile,
    RunConfig,
    WindowTooLarge,
)
from power_graph_variants.base.utils import read_json_file

_LOGGER = logging.getLogger(__file__)

CYCLIC_PATTERN = re.compile(r"^z(\d+)$")
INVERSE_PRIME_PATTERN = re.compile(r"^z-inv-(\d+)$")

# Quaternion units as (sign, unit) in the order 1, -1, i, -i, j, -j, k, -k
_QUATERNION_ORDER = [(s, u) for u in "1ijk" for s in (1, -1)]
_UNIT_PRODUCTS = {
    ("1", "1"): (1, "1"),
    ("i", "i"): (-1, "1"),
    ("j", "j"): (-1, "1"),
    ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"),
    ("j", "k"): (1, "i"),
    ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"),
    ("k", "j"): (-1, "i"),
    ("i", "k"): (-1, "j"),
}


def cyclic_table(n: int) -> List[List[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def symmetric_table(degree: int) -> List[List[int]]:
    """Cayley table of the permutations of 0..degree-1, identity first."""
    perms = list(itertools.permutations(range(degree)))
    index = {p: i for i, p in enumerate(perms)}
    return [
        [index[tuple(p[q[k]] for k in range(degree))] for q in perms] for p in perms
    ]


def _unit_product(u: str, v: str) -> Tuple[int, str]:
    if u == "1":
        return 1, v
    if v == "1":
        return 1, u
    return _UNIT_PRODUCTS[(u, v)]


def quaternion_table() -> List[List[int]]:
    index = {q: i for i, q in enumerate(_QUATERNION_ORDER)}
    table = []
    for s1, u1 in _QUATERNION_ORDER:
        row = []
        for s2, u2 in _QUATERNION_ORDER:
            sign, unit = _unit_product(u1, u2)
            row.append(index[(s1 * s2 * sign, unit)])
        table.append(row)
    return table


def parse_heights(text: str) -> HeightFunction:
    """
    Parse a height description such as `default=1,2=inf,3=0`.

    :param str text: comma separated `key=value` pairs, keys `default` or a prime,
        values a non-negative integer or `inf`
    :return HeightFunction: the parsed heights
    """
    default = 0
    exceptions: Dict[int, str] = {}
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        key, sep, value = part.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not value:
            raise GroupSpecError(key or part, "expected key=value")
        if key == "default":
            default = value
            continue
        if not key.isdigit() or not isprime(int(key)):
            raise GroupSpecError(key, "keys must be 'default' or a prime")
        exceptions[int(key)] = value
    try:
        return HeightFunction(default_height=default, exceptions=exceptions)
    except ValidationError as e:
        error = e.errors()[0]
        raise GroupSpecError(".".join(str(k) for k in error["loc"]), error["msg"])


def _check_order(order: int, cap: Optional[int]) -> None:
    if cap is not None and order > cap:
        raise WindowTooLarge(cap)


def preset(name: str, cap: Optional[int] = None) -> GroupModel:
    """
    Look up a named preset group.

    :param str name: the preset name
    :param Optional[int] cap: largest finite order allowed, checked before the
        Cayley table is generated
    :return GroupModel: the group
    """
    name = name.strip().lower()
    if name == "integers":
        return IntegerGroup()
    if name == "rationals":
        return RationalSubgroup(
            HeightFunction(default_height=INFINITE_HEIGHT), name="rationals"
        )
    if name == "height-one":
        return RationalSubgroup(HeightFunction(default_height=1), name="height-one")
    if name == "heisenberg":
        return HeisenbergGroup()
    if name == "s3":
        _check_order(6, cap)
        return FiniteCayleyGroup(symmetric_table(3), name="s3")
    if name == "q8":
        _check_order(8, cap)
        return FiniteCayleyGroup(quaternion_table(), name="q8")
    match = CYCLIC_PATTERN.match(name)
    if match:
        n = int(match.group(1))
        if n < 1:
            raise GroupSpecError(name, "cyclic order must be positive")
        _check_order(n, cap)
        return FiniteCayleyGroup(cyclic_table(n), name=name)
    match = INVERSE_PRIME_PATTERN.match(name)
    if match:
        p = int(match.group(1))
        if not isprime(p):
            raise GroupSpecError(name, f"{p} is not a prime")
        return RationalSubgroup(
            HeightFunction(exceptions={p: INFINITE_HEIGHT}), name=name
        )
    raise GroupSpecError(name, "unknown preset")


def group_from_description(description: GroupDescription) -> GroupModel:
    if description.family == Family.FINITE_CAYLEY:
        return FiniteCayleyGroup(
            description.table,
            identity=description.identity,
            name=description.name or f"cayley{len(description.table)}",
        )
    if description.family == Family.INTEGERS:
        return IntegerGroup(name=description.name or "integers")
    if description.family == Family.HEISENBERG:
        return HeisenbergGroup(name=description.name or "heisenberg")
    heights = HeightFunction(
        default_height=(
            0 if description.default_height is None else description.default_height
        ),
        exceptions=description.exceptions,
    )
    return RationalSubgroup(heights, name=description.name)


def load_group_file(input_file: str, cap: Optional[int] = None) -> GroupModel:
    """Load a JSON group description from a local path or cloud URI."""
    try:
        document = read_json_file(input_file)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise GroupSpecError("table", f"cannot read {input_file}: {e}") from e
    try:
        description = GroupDescription.model_validate(document)
    except ValidationError as e:
        error = e.errors()[0]
        key = ".".join(str(k) for k in error["loc"]) or "<root>"
        raise GroupSpecError(key, error["msg"])
    if description.table is not None:
        _check_order(len(description.table), cap)
    return group_from_description(description)


def resolve_group(config: RunConfig) -> GroupModel:
    """The group named by --group, --table or --heights."""
    if config.table:
        group = load_group_file(config.table, cap=config.cap)
    elif config.heights:
        heights = parse_heights(config.heights)
        group = RationalSubgroup(heights)
    elif config.group:
        group = preset(config.group, cap=config.cap)
    else:
        raise GroupSpecError("group", "one of --group, --table or --heights is needed")
    _LOGGER.info(
        "Resolved group.",
        extra={"props": {"group": group.name, "family": group.family.value}},
    )
    return group


def height_catalog() -> List[Tuple[str, HeightFunction]]:
    """Height functions covering Q, Z and the subgroups in between."""
    return [
        ("rationals", HeightFunction(default_height=INFINITE_HEIGHT)),
        ("integers", HeightFunction()),
        ("z-inv-2", HeightFunction(exceptions={2: INFINITE_HEIGHT})),
        (
            "z-inv-6",
            HeightFunction(exceptions={2: INFINITE_HEIGHT, 3: INFINITE_HEIGHT}),
        ),
        ("height-one", HeightFunction(default_height=1)),
        (
            "rationals-without-halves",
            HeightFunction(default_height=INFINITE_HEIGHT, exceptions={2: 0}),
        ),
    ]


def finite_catalog(profile: Profile = Profile.DESK) -> List[FiniteCayleyGroup]:
    """The finite presets plus cyclic groups of order 2 up to 32, or 16 for quick."""
    largest = 16 if profile == Profile.QUICK else 32
    named = [preset(name) for name in ("z6", "z8", "s3", "q8")]
    cyclic = [preset(f"z{n}") for n in range(2, largest + 1) if n not in (6, 8)]
    return named + cyclic

