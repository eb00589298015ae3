"""Tables, canonical forms, and domain enumeration."""

import numpy as np
import pytest

from oracles import all_unary_maps, monotone_unary_maps

from hofix.errors import ContractViolation, ResourceLimit
from hofix.lattice import boolean, flat, powerset, two
from hofix.syntax import parse_type
from hofix.values import (
    ArrayTable,
    DictTable,
    apply_value,
    canonical_key,
    canonical_value,
    const_table,
    enumerate_domain,
    show_value,
    table_keys,
    value_eq,
    value_leq,
)


def test_array_table_apply_and_slice():
    t = ArrayTable(np.arange(4).reshape(2, 2))
    assert apply_value(t, [1, 0]) == 2
    row = apply_value(t, [1])
    assert isinstance(row, ArrayTable)
    assert apply_value(row, [1]) == 3
    with pytest.raises(ContractViolation):
        apply_value(t, [0, 0, 0])
    with pytest.raises(ContractViolation):
        apply_value(7, [0])


def test_dict_table_apply_and_slice():
    t = DictTable({(0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 0}, 2, True)
    assert apply_value(t, [0, 1]) == 2
    part = apply_value(t, [1])
    assert isinstance(part, DictTable) and part.arity == 1
    assert apply_value(part, [0]) == 3
    with pytest.raises(ContractViolation):
        apply_value(DictTable({(0,): 1}, 1, False), [5])


def test_canonical_value_identifies_equal_tables():
    a = ArrayTable(np.array([0, 1, 1]))
    b = ArrayTable(np.array([0, 1, 1]))
    c = ArrayTable(np.array([0, 1, 0]))
    assert canonical_value(a) == canonical_value(b)
    assert canonical_value(a) != canonical_value(c)
    assert value_eq(a, b) and not value_eq(a, c)
    d1 = DictTable({(0,): 1, (1,): 0}, 1, True)
    d2 = DictTable({(1,): 0, (0,): 1}, 1, True)  # insertion order differs
    assert canonical_value(d1) == canonical_value(d2)


def test_canonical_key_mixes_ground_and_tables():
    t = ArrayTable(np.array([1, 0]))
    key = canonical_key([2, t])
    assert key[0] == 2 and key[1] == t.canonical()


def test_value_leq_is_pointwise():
    lat = two()
    lo = ArrayTable(np.array([0, 0]))
    hi = ArrayTable(np.array([0, 1]))
    assert value_leq(lo, hi, lat)
    assert not value_leq(hi, lo, lat)
    assert value_leq(0, 1, lat)
    with pytest.raises(ContractViolation):
        value_leq(ArrayTable(np.array([0])), hi, lat)


def test_table_keys_row_major_and_cached():
    lat = two()
    coords = tuple(parse_type("(o+, o+) -> o").args)
    keys, canon = table_keys(coords, lat)
    assert keys == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert canon == keys
    again, _ = table_keys(coords, lat)
    assert again is keys  # cached per lattice


def test_table_keys_respects_cap():
    lat = flat(3)
    coords = tuple(parse_type("(o+, o+, o+) -> o").args)
    with pytest.raises(ResourceLimit):
        table_keys(coords, lat, cap=100)


def test_const_table():
    lat = boolean()
    t = const_table(tuple(parse_type("(o+, o+) -> o").args), lat, lat.top)
    assert isinstance(t, ArrayTable)
    assert (t.arr == lat.top).all() and t.arr.shape == (2, 2)


# frozen carrier sizes, cross-checked against brute-force map enumeration
CARRIER_SIZES = [
    ("(o+) -> o", two(), 3),
    ("(o-) -> o", two(), 3),
    ("(o+, o+) -> o", two(), 6),
    ("(o+) -> o", flat(2), 36),
    ("(o+-) -> o", flat(2), 256),
    ("(o+) -> o", powerset(["a", "b"]), 36),
    ("(o+-) -> o", powerset(["a", "b"]), 256),
    ("((o+) -> o +) -> o", two(), 4),
]


@pytest.mark.parametrize("text,lat,size", CARRIER_SIZES, ids=lambda v: str(v))
def test_enumerate_domain_sizes(text, lat, size):
    assert len(enumerate_domain(parse_type(text), lat)) == size


def test_enumerate_domain_ground():
    assert enumerate_domain(parse_type("o"), flat(2)) == [0, 1, 2, 3]


def test_enumerate_domain_matches_brute_force():
    """Generate-and-filter agrees with direct enumeration of unary maps."""
    for lat in [two(), boolean(), flat(2)]:
        got = {
            tuple(int(x) for x in t.arr)
            for t in enumerate_domain(parse_type("(o+) -> o"), lat)
        }
        assert got == set(monotone_unary_maps(lat.leq_matrix))
        unconstrained = {
            tuple(int(x) for x in t.arr)
            for t in enumerate_domain(parse_type("(o+-) -> o"), lat)
        }
        assert unconstrained == set(all_unary_maps(lat.size))


def test_enumerate_domain_antitone():
    lat = two()
    maps = {tuple(int(x) for x in t.arr) for t in enumerate_domain(parse_type("(o-) -> o"), lat)}
    assert maps == {(0, 0), (1, 1), (1, 0)}  # constants and negation


def test_enumerate_domain_monotone_in_each_coordinate():
    lat = two()
    for t in enumerate_domain(parse_type("(o+, o-) -> o"), lat):
        arr = t.arr
        assert lat.leq(int(arr[0, 0]), int(arr[1, 0]))  # up in the + slot
        assert lat.leq(int(arr[0, 1]), int(arr[1, 1]))
        assert lat.leq(int(arr[0, 1]), int(arr[0, 0]))  # down in the - slot
        assert lat.leq(int(arr[1, 1]), int(arr[1, 0]))


def test_enumerate_domain_cap():
    with pytest.raises(ResourceLimit):
        enumerate_domain(parse_type("(o+) -> o"), flat(6), cap=10)
    # a spine too large to even count candidate tables exactly
    with pytest.raises(ResourceLimit):
        enumerate_domain(parse_type("(o+, o+, o+, o+) -> o"), flat(8))


def test_higher_order_carrier_is_ordered_pointwise():
    """The carrier of ((o+)->o +)->o over the two-point lattice: monotone
    functionals over the 3-chain of monotone maps."""
    lat = two()
    vals = enumerate_domain(parse_type("((o+) -> o +) -> o"), lat)
    assert all(isinstance(v, DictTable) for v in vals)
    for v in vals:
        assert v.arity == 1 and v.total and len(v.entries) == 3


def test_show_value():
    lat = boolean()
    assert show_value(1, lat) == "top"
    t = ArrayTable(np.array([0, 1]))
    assert show_value(t, lat) == "{(bot): bot; (top): top}"
    big = ArrayTable(np.zeros((2, 2, 2, 2, 2), dtype=np.int64))
    rendered = show_value(big, lat, limit=4)
    assert "... 28 more" in rendered
