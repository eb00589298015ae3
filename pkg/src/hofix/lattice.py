"""Finite lattices with total element enumerations.

Elements carry dense integer indices in construction order; every operation
works on indices and the `display` list maps them back to names.  The order
is stored as a full boolean matrix (the reflexive-transitive closure of a
covering relation), and join/meet tables are precomputed and validated at
construction: a finite poset with unique pairwise bounds and global bot/top
is a complete lattice.
"""

import json

import numpy as np

from .errors import InputError, ValidationError
from . import kernels


class Lattice:
    """A validated finite lattice over elements 0..size-1."""

    def __init__(self, name, display, leq_matrix):
        self.name = name
        self.display = list(display)
        self.size = len(self.display)
        if leq_matrix.shape != (self.size, self.size):
            raise ValidationError("order matrix shape does not match element count")
        self.leq_matrix = leq_matrix.astype(bool)
        self._index = {d: i for i, d in enumerate(self.display)}
        if len(self._index) != self.size:
            raise ValidationError("duplicate element names in %r" % name)
        self._validate_order()
        jt, ji, jj = kernels.bounds_table(self.leq_matrix, True)
        if ji >= 0:
            raise ValidationError(
                "no unique least upper bound for %s, %s in %r"
                % (self.display[ji], self.display[jj], name)
            )
        mt, mi, mj = kernels.bounds_table(self.leq_matrix, False)
        if mi >= 0:
            raise ValidationError(
                "no unique greatest lower bound for %s, %s in %r"
                % (self.display[mi], self.display[mj], name)
            )
        self.join_table = jt
        self.meet_table = mt
        self.bot = self._find_extremum(bottom=True)
        self.top = self._find_extremum(bottom=False)

    def _validate_order(self):
        m = self.leq_matrix
        if not m.diagonal().all():
            raise ValidationError("order is not reflexive in %r" % self.name)
        i, j = kernels.antisymmetry_witness(m)
        if i >= 0:
            raise ValidationError(
                "antisymmetry violated by %s, %s in %r"
                % (self.display[i], self.display[j], self.name)
            )
        closed = kernels.transitive_closure(m)
        if (closed != m).any():
            raise ValidationError("order is not transitively closed in %r" % self.name)

    def _find_extremum(self, bottom):
        m = self.leq_matrix
        rows = m.all(axis=1) if bottom else m.all(axis=0)
        hits = np.flatnonzero(rows)
        if len(hits) != 1:
            raise ValidationError(
                "%r has no unique %s element" % (self.name, "least" if bottom else "greatest")
            )
        return int(hits[0])

    # -- element access ----------------------------------------------------

    def check_element(self, a):
        if not isinstance(a, (int, np.integer)) or not (0 <= a < self.size):
            raise InputError("unknown element id %r in lattice %r" % (a, self.name))
        return int(a)

    def element_index(self, name):
        """Resolve a display name to its element index."""
        try:
            return self._index[name]
        except KeyError:
            raise InputError("unknown element %r in lattice %r" % (name, self.name)) from None

    def leq(self, a, b):
        return bool(self.leq_matrix[self.check_element(a), self.check_element(b)])

    def join(self, a, b):
        return int(self.join_table[self.check_element(a), self.check_element(b)])

    def meet(self, a, b):
        return int(self.meet_table[self.check_element(a), self.check_element(b)])

    def show(self, a):
        return self.display[self.check_element(a)]

    def complement(self, a):
        """The unique complement of `a` (meet bot, join top), if it has one."""
        a = self.check_element(a)
        table = getattr(self, "_complements", None)
        if table is None:
            table = []
            for x in range(self.size):
                mask = (self.meet_table[x] == self.bot) & (self.join_table[x] == self.top)
                hits = np.flatnonzero(mask)
                table.append(int(hits[0]) if len(hits) == 1 else None)
            self._complements = table
        if table[a] is None:
            raise InputError(
                "element %s has no unique complement in %r" % (self.display[a], self.name)
            )
        return table[a]

    def __repr__(self):
        return "Lattice(%s, %d elements)" % (self.name, self.size)


# ---------------------------------------------------------------------------
# builtin constructions


def _from_cover(name, display, cover_pairs):
    n = len(display)
    cover = np.zeros((n, n), dtype=bool)
    for lo, hi in cover_pairs:
        cover[lo, hi] = True
    return Lattice(name, display, kernels.transitive_closure(cover))


def two():
    """The two-point domain 0 <= 1 used by strictness reasoning."""
    return _from_cover("two", ["0", "1"], [(0, 1)])


def boolean():
    """The boolean lattice bot <= top."""
    return _from_cover("bool", ["bot", "top"], [(0, 1)])


def flat(k):
    """k pairwise-incomparable atoms between bot and top.

    Element order: [bot, top, 0, 1, ..., k-1]; atoms display as numerals.
    """
    if k < 1:
        raise InputError("flat lattice needs at least one atom")
    display = ["bot", "top"] + [str(i) for i in range(k)]
    cover = [(0, 2 + i) for i in range(k)] + [(2 + i, 1) for i in range(k)]
    lat = _from_cover("flat(%d)" % k, display, cover)
    lat.atoms = list(range(2, 2 + k))
    return lat


def powerset(base):
    """Subsets of `base` ordered by inclusion; element index == bitmask."""
    base = list(base)
    if len(set(base)) != len(base):
        raise InputError("powerset base has duplicate entries")
    if len(base) > 16:
        raise InputError("powerset base too large (max 16)")
    n = 1 << len(base)
    display = []
    for mask in range(n):
        members = [base[i] for i in range(len(base)) if mask >> i & 1]
        display.append("{%s}" % ",".join(members))
    masks = np.arange(n)
    leq = (masks[:, None] & ~masks[None, :]) == 0  # subset test on bitmasks
    lat = Lattice("powerset(%d)" % len(base), display, leq)
    lat.base = base
    return lat


def explicit(elements, order_pairs, name="explicit"):
    """User-defined lattice from a covering relation given by name pairs."""
    display = list(elements)
    index = {d: i for i, d in enumerate(display)}
    if len(index) != len(display):
        raise ValidationError("duplicate element names")
    cover = []
    for lo, hi in order_pairs:
        if lo not in index or hi not in index:
            raise InputError("order pair (%r, %r) mentions unknown elements" % (lo, hi))
        cover.append((index[lo], index[hi]))
    return _from_cover(name, display, cover)


def from_spec(spec):
    """Build a lattice from its JSON description (dict or file path)."""
    if isinstance(spec, str):
        with open(spec) as fh:
            spec = json.load(fh)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("lattice spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "two":
        return two()
    if kind == "bool":
        return boolean()
    if kind == "flat":
        try:
            atoms = int(spec["atoms"])
        except (KeyError, TypeError, ValueError):
            raise InputError("flat lattice spec needs an integer 'atoms' field") from None
        return flat(atoms)
    if kind == "powerset":
        if "base" not in spec or not isinstance(spec["base"], list):
            raise InputError("powerset lattice spec needs a 'base' list")
        return powerset(spec["base"])
    if kind == "explicit":
        if "elements" not in spec or "order" not in spec:
            raise InputError("explicit lattice spec needs 'elements' and 'order'")
        return explicit(spec["elements"], [tuple(p) for p in spec["order"]])
    raise InputError("unknown lattice kind %r" % kind)
