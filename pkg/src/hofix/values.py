"""Semantic values: lattice elements and function tables.

A ground value is a plain element index (int).  A function value is a total
table over the flattened argument spine of its type — the denotation of a
function type is the set of monotone maps from its (variance-adjusted)
argument product into the result, and every such map over a finite lattice
is a finite table.  Two backings:

* ArrayTable — numpy int64 array of shape (m,)*arity, used whenever every
  spine coordinate is ground.  Lookups are array indexing.
* DictTable — dict from canonical key tuples to element indices, used when
  a coordinate is itself function-typed, and (with total=False) for the
  growing partial tables inside fixpoint iteration.

Per type the backing is fixed by that rule, so values compare by canonical
form without cross-representation cases.
"""

import itertools

import numpy as np

from .errors import ContractViolation, ResourceLimit
from . import kernels
from .types import Fun, is_ground, spine, BOTH, MINUS

DEFAULT_DOMAIN_CAP = 1_000_000

# carriers above cap would be rejected anyway; this keeps int64 digit math safe
_HARD_CAP = 2**62


class ArrayTable:
    """Total table over an all-ground spine, backed by a numpy array."""

    __slots__ = ("arr", "_canon")

    def __init__(self, arr):
        self.arr = np.ascontiguousarray(arr, dtype=np.int64)
        self._canon = None

    @property
    def arity(self):
        return self.arr.ndim

    @property
    def total(self):
        return True

    def canonical(self):
        # tables are never mutated once built, so the form is cached
        if self._canon is None:
            self._canon = self.arr.tobytes()
        return self._canon

    def results(self):
        return self.arr.ravel()

    def items(self):
        for key, val in np.ndenumerate(self.arr):
            yield key, int(val)

    def __repr__(self):
        return "ArrayTable(arity=%d, size=%d)" % (self.arr.ndim, self.arr.size)


class DictTable:
    """Table keyed by canonical coordinate tuples; may be partial."""

    __slots__ = ("entries", "arity", "total", "_canon")

    def __init__(self, entries, arity, total):
        self.entries = entries
        self.arity = arity
        self.total = total
        self._canon = None

    def canonical(self):
        if self._canon is None:
            items = sorted(self.entries.items(), key=lambda kv: _sort_token(kv[0]))
            self._canon = tuple(items)
        return self._canon

    def results(self):
        return np.fromiter(self.entries.values(), dtype=np.int64, count=len(self.entries))

    def items(self):
        return self.entries.items()

    def __repr__(self):
        return "DictTable(arity=%d, size=%d, total=%s)" % (
            self.arity,
            len(self.entries),
            self.total,
        )


def _sort_token(x):
    # canonical key atoms are ints, bytes, or nested tuples; rank them so
    # mixed tuples sort deterministically
    if isinstance(x, (int, np.integer)):
        return (0, int(x))
    if isinstance(x, bytes):
        return (1, x)
    return (2, tuple(_sort_token(part) for part in x))


def canonical_value(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v.canonical()


def canonical_key(values):
    return tuple(canonical_value(v) for v in values)


def value_eq(a, b):
    if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
        return int(a) == int(b)
    return canonical_value(a) == canonical_value(b)


def value_leq(a, b, lattice):
    """Pointwise order on same-type values (tables compare result-wise)."""
    if isinstance(a, (int, np.integer)):
        return lattice.leq(int(a), int(b))
    if isinstance(a, ArrayTable) and isinstance(b, ArrayTable):
        if a.arr.shape != b.arr.shape:
            raise ContractViolation("comparing tables of different shapes")
        return bool(kernels.leq_pointwise(a.results(), b.results(), lattice.leq_matrix))
    if isinstance(a, DictTable) and isinstance(b, DictTable):
        if len(a.entries) != len(b.entries):
            raise ContractViolation("comparing tables over different key sets")
        for key, va in a.entries.items():
            if key not in b.entries:
                raise ContractViolation("comparing tables over different key sets")
            if not lattice.leq_matrix[va, b.entries[key]]:
                return False
        return True
    raise ContractViolation(
        "cannot compare %s with %s" % (type(a).__name__, type(b).__name__)
    )


# ---------------------------------------------------------------------------
# application


def apply_value(value, args):
    """Apply a table to leading argument values; partial application slices."""
    if not args:
        return value
    if isinstance(value, (int, np.integer)):
        raise ContractViolation("cannot apply a ground value")
    if isinstance(value, ArrayTable):
        idx = tuple(int(a) for a in args)
        if len(idx) > value.arity:
            raise ContractViolation("too many arguments for table")
        sub = value.arr[idx]
        if sub.ndim == 0:
            return int(sub)
        return ArrayTable(sub)
    if len(args) > value.arity:
        raise ContractViolation("too many arguments for table")
    prefix = canonical_key(args)
    if len(args) == value.arity:
        try:
            return value.entries[prefix]
        except KeyError:
            raise ContractViolation("lookup outside table domain") from None
    rest = {
        key[len(prefix):]: val
        for key, val in value.entries.items()
        if key[: len(prefix)] == prefix
    }
    return DictTable(rest, value.arity - len(args), value.total)


# ---------------------------------------------------------------------------
# domain enumeration


def _cache(lattice):
    cache = getattr(lattice, "_domain_cache", None)
    if cache is None:
        cache = {}
        lattice._domain_cache = cache
    return cache


def _all_ground(coords):
    return all(is_ground(t) for t, _ in coords)


def table_keys(coords, lattice, cap=DEFAULT_DOMAIN_CAP):
    """All keys of a table over `coords`: (value tuples, canonical tuples).

    Lexicographic in the per-coordinate carrier enumerations; for an
    all-ground spine this is numpy row-major order over shape (m,)*arity.
    """
    coords = tuple(coords)
    cache = _cache(lattice)
    hit = cache.get(("keys", coords))
    if hit is not None:
        if len(hit[0]) > cap:
            raise ResourceLimit(
                "table over %d keys exceeds domain cap %d" % (len(hit[0]), cap),
                size_bound=len(hit[0]),
            )
        return hit
    carriers = []
    count = 1
    for t, _ in coords:
        vals = enumerate_domain(t, lattice, cap)
        carriers.append(vals)
        count *= len(vals)
        if count > cap:
            raise ResourceLimit(
                "table over %d keys exceeds domain cap %d" % (count, cap),
                size_bound=count,
            )
    values = list(itertools.product(*carriers))
    canon = [canonical_key(vs) for vs in values]
    cache[("keys", coords)] = (values, canon)
    return values, canon


def enumerate_domain(ty, lattice, cap=DEFAULT_DOMAIN_CAP):
    """All values of a type: element indices, or every monotone table.

    Function types enumerate by generate-and-filter: all m**K result
    assignments over the K spine keys in lexicographic order, kept when
    monotone with respect to the variance-adjusted key order (`-` inverts a
    coordinate, `+-` flattens it to equality).  The unfiltered bound m**K is
    checked against `cap` before any table is built.
    """
    if is_ground(ty):
        return list(range(lattice.size))
    cache = _cache(lattice)
    hit = cache.get(("carrier", ty))
    if hit is not None:
        if len(hit) > cap:
            raise ResourceLimit(
                "domain of %s has %d values, over cap %d" % (ty, len(hit), cap),
                size_bound=len(hit),
            )
        return hit

    coords = tuple(spine(ty))
    orders = [_carrier_order(t, lattice, cap) for t, _ in coords]
    sizes = [o.shape[0] for o in orders]
    nkeys = 1
    for d in sizes:
        nkeys *= d
    m = lattice.size
    candidates = m**nkeys if nkeys < 64 else _HARD_CAP + 1
    if candidates > cap or candidates > _HARD_CAP:
        raise ResourceLimit(
            "domain of %s has up to %s candidate tables, over cap %d"
            % (ty, candidates if candidates <= _HARD_CAP else "huge", cap),
            size_bound=min(candidates, _HARD_CAP),
        )
    key_values, key_canon = table_keys(coords, lattice, cap)

    # adjacency of keys under the variance-adjusted product order
    key_idx = np.array(
        list(itertools.product(*[range(d) for d in sizes])), dtype=np.int64
    ).reshape(nkeys, len(coords))
    adj = np.ones((nkeys, nkeys), dtype=bool)
    for c, (_, var) in enumerate(coords):
        order = orders[c]
        if var == BOTH:
            order = np.eye(sizes[c], dtype=bool)
        elif var == MINUS:
            order = order.T
        adj &= order[key_idx[:, None, c], key_idx[None, :, c]]
    np.fill_diagonal(adj, False)
    pairs = np.argwhere(adj).astype(np.int64).reshape(-1, 2)

    ground_spine = _all_ground(coords)
    shape = tuple(sizes)
    powers = m ** np.arange(nkeys - 1, -1, -1, dtype=np.int64)
    out = []
    for start in range(0, candidates, 65536):
        stop = min(start + 65536, candidates)
        rows = (np.arange(start, stop, dtype=np.int64)[:, None] // powers) % m
        mask = kernels.monotone_mask(rows, pairs, lattice.leq_matrix)
        for row in rows[mask]:
            if ground_spine:
                out.append(ArrayTable(row.reshape(shape)))
            else:
                entries = dict(zip(key_canon, (int(v) for v in row)))
                out.append(DictTable(entries, len(coords), True))
    cache[("carrier", ty)] = out
    return out


def _carrier_order(ty, lattice, cap):
    """Pointwise order matrix over the carrier of `ty` (its own order)."""
    if is_ground(ty):
        return lattice.leq_matrix
    cache = _cache(lattice)
    hit = cache.get(("order", ty))
    if hit is not None:
        return hit
    vals = enumerate_domain(ty, lattice, cap)
    d = len(vals)
    if d > 20000:
        raise ResourceLimit(
            "order matrix over %d tables is too large" % d, size_bound=d * d
        )
    results = np.stack([v.results() for v in vals]) if d else np.zeros((0, 0), np.int64)
    leq = lattice.leq_matrix
    order = np.empty((d, d), dtype=bool)
    for i in range(d):
        order[i] = leq[results[i][None, :], results].all(axis=1)
    cache[("order", ty)] = order
    return order


def const_table(coords, lattice, element, cap=DEFAULT_DOMAIN_CAP):
    """The constant table over `coords` mapping every key to `element`."""
    coords = tuple(coords)
    if _all_ground(coords):
        shape = (lattice.size,) * len(coords)
        return ArrayTable(np.full(shape, element, dtype=np.int64))
    _, canon = table_keys(coords, lattice, cap)
    return DictTable({key: element for key in canon}, len(coords), True)


def show_value(v, lattice, limit=16):
    if isinstance(v, (int, np.integer)):
        return lattice.show(int(v))
    pieces = []
    for key, val in itertools.islice(v.items(), limit):
        pieces.append("%s: %s" % (_show_key(key, lattice), lattice.show(val)))
    extra = ""
    size = v.arr.size if isinstance(v, ArrayTable) else len(v.entries)
    if size > limit:
        extra = ", ... %d more" % (size - limit)
    return "{%s%s}" % ("; ".join(pieces), extra)


def _show_key(key, lattice):
    parts = []
    for atom in key:
        if isinstance(atom, (int, np.integer)):
            parts.append(lattice.show(int(atom)))
        else:
            parts.append("<fn>")
    return "(%s)" % ", ".join(parts)
