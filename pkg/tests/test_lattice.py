"""Order-theoretic invariants of the bundled lattice constructors."""

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hofix.errors import InputError, ValidationError
from hofix.lattice import Lattice, boolean, explicit, flat, from_spec, powerset, two


def small_corpus():
    return [
        two(),
        boolean(),
        flat(1),
        flat(3),
        powerset(["a"]),
        powerset(["a", "b", "c"]),
        explicit(["bot", "mid", "top"], [("bot", "mid"), ("mid", "top")], name="chain3"),
    ]


@pytest.mark.parametrize("lat", small_corpus(), ids=lambda l: l.name)
def test_lattice_axioms_exhaustive(lat):
    """Join/meet are commutative, associative, idempotent, absorbing, and
    consistent with the order relation, checked over every pair/triple."""
    els = range(lat.size)
    for a in els:
        assert lat.join(a, a) == a
        assert lat.meet(a, a) == a
        assert lat.leq(lat.bot, a) and lat.leq(a, lat.top)
    for a, b in itertools.product(els, repeat=2):
        assert lat.join(a, b) == lat.join(b, a)
        assert lat.meet(a, b) == lat.meet(b, a)
        assert lat.join(a, lat.meet(a, b)) == a
        assert lat.meet(a, lat.join(a, b)) == a
        assert lat.leq(a, b) == (lat.join(a, b) == b)
        assert lat.leq(a, b) == (lat.meet(a, b) == a)
    for a, b, c in itertools.product(els, repeat=3):
        assert lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c)
        assert lat.meet(a, lat.meet(b, c)) == lat.meet(lat.meet(a, b), c)


@pytest.mark.parametrize("lat", small_corpus(), ids=lambda l: l.name)
def test_join_meet_are_least_and_greatest_bounds(lat):
    els = range(lat.size)
    for a, b in itertools.product(els, repeat=2):
        j, m = lat.join(a, b), lat.meet(a, b)
        assert lat.leq(a, j) and lat.leq(b, j)
        assert lat.leq(m, a) and lat.leq(m, b)
        for c in els:
            if lat.leq(a, c) and lat.leq(b, c):
                assert lat.leq(j, c)
            if lat.leq(c, a) and lat.leq(c, b):
                assert lat.leq(c, m)


def test_two_shape():
    lat = two()
    assert lat.size == 2
    assert lat.bot == 0 and lat.top == 1
    assert lat.show(0) == "0" and lat.show(1) == "1"
    assert lat.leq(0, 1) and not lat.leq(1, 0)


def test_boolean_shape():
    lat = boolean()
    assert lat.size == 2
    assert lat.show(lat.bot) == "bot" and lat.show(lat.top) == "top"
    assert lat.complement(lat.bot) == lat.top
    assert lat.complement(lat.top) == lat.bot


def test_diamond_complements():
    """flat(2) is the four-element diamond; every element is complemented
    and complement is an involution."""
    lat = flat(2)
    assert lat.size == 4
    for a in range(lat.size):
        c = lat.complement(a)
        assert lat.meet(a, c) == lat.bot
        assert lat.join(a, c) == lat.top
        assert lat.complement(c) == a
    a = lat.element_index("0")
    b = lat.element_index("1")
    assert lat.join(a, b) == lat.top
    assert lat.meet(a, b) == lat.bot


def test_flat_atoms_are_incomparable():
    lat = flat(4)
    assert lat.size == 6
    atoms = [lat.element_index(str(i)) for i in range(4)]
    for x, y in itertools.combinations(atoms, 2):
        assert not lat.leq(x, y) and not lat.leq(y, x)
        assert lat.join(x, y) == lat.top
        assert lat.meet(x, y) == lat.bot
    # the middle elements of a flat lattice have no unique complement
    # once there are three or more atoms
    with pytest.raises(InputError):
        lat.complement(atoms[0])


def test_powerset_is_the_subset_order():
    names = ["p", "q", "r"]
    lat = powerset(names)
    assert lat.size == 8

    def as_set(i):
        shown = lat.show(i)
        if shown == "{}":
            return frozenset()
        return frozenset(shown.strip("{}").split(","))

    for a, b in itertools.product(range(8), repeat=2):
        assert lat.leq(a, b) == (as_set(a) <= as_set(b))
        assert as_set(lat.join(a, b)) == as_set(a) | as_set(b)
        assert as_set(lat.meet(a, b)) == as_set(a) & as_set(b)
    # powerset lattices are complemented
    for a in range(8):
        assert as_set(lat.complement(a)) == frozenset(names) - as_set(a)


def test_element_index_round_trip():
    for lat in small_corpus():
        for a in range(lat.size):
            assert lat.element_index(lat.show(a)) == a
    with pytest.raises(InputError):
        boolean().element_index("no-such-element")


def test_explicit_requires_lattice_structure():
    # a "diamond without a top" has two maximal elements: no unique join
    with pytest.raises(ValidationError):
        explicit(["bot", "l", "r"], [("bot", "l"), ("bot", "r")])
    # antisymmetry violation
    with pytest.raises(ValidationError):
        explicit(["a", "b"], [("a", "b"), ("b", "a")])
    # duplicate names
    with pytest.raises(ValidationError):
        explicit(["a", "a"], [("a", "a")])


def test_explicit_transitive_closure_is_applied():
    lat = explicit(["x", "y", "z"], [("x", "y"), ("y", "z")])
    assert lat.leq(lat.element_index("x"), lat.element_index("z"))


def test_direct_constructor_rejects_non_transitive_matrix():
    m = np.eye(3, dtype=bool)
    m[0, 1] = m[1, 2] = True  # missing 0 <= 2
    with pytest.raises(ValidationError):
        Lattice("broken", ["a", "b", "c"], m)


def test_from_spec_kinds(tmp_path):
    assert from_spec({"kind": "two"}).size == 2
    assert from_spec({"kind": "bool"}).show(1) == "top"
    assert from_spec({"kind": "flat", "atoms": 5}).size == 7
    assert from_spec({"kind": "powerset", "base": ["a", "b"]}).size == 4
    lat = from_spec(
        {
            "kind": "explicit",
            "elements": ["lo", "hi"],
            "order": [["lo", "hi"]],
        }
    )
    assert lat.leq(0, 1)
    path = tmp_path / "lat.json"
    path.write_text(json.dumps({"kind": "flat", "atoms": 2}))
    assert from_spec(str(path)).size == 4
    with pytest.raises(InputError):
        from_spec({"kind": "mystery"})
    with pytest.raises(InputError):
        from_spec({"kind": "flat"})
    with pytest.raises(InputError):
        from_spec([1, 2, 3])


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_powerset_axioms_random(a, b, c):
    lat = powerset(["w", "x", "y", "z"])
    assert lat.join(a, b) == lat.join(b, a)
    assert lat.meet(a, lat.join(a, b)) == a
    assert lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c)
    assert lat.leq(lat.meet(a, b), lat.join(a, c))
