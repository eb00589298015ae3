"""Interpreted base symbols and signatures.

A base symbol couples a name, a type, and an interpretation.  Interpretations
always see the full flattened argument spine of the symbol's type (function
coordinates arrive as tables, ground ones as element indices) and return a
ground element.  Ordinarily the evaluator forces all arguments left to right
before calling; a symbol constructed with shortcircuit=True receives
zero-argument thunks instead and forces only what it needs, which is how
conditional operators avoid demanding untaken branches.
"""

import json

from .errors import InputError, ValidationError
from .syntax import parse_type
from .types import BOTH, Fun, GROUND, PLUS, is_ground, spine
from .values import ArrayTable
from . import kernels

import numpy as np


class BaseSymbol:
    def __init__(self, name, ty, interp, shortcircuit=False):
        self.name = name
        self.ty = ty
        self.interp = interp
        self.shortcircuit = shortcircuit

    def __repr__(self):
        return "BaseSymbol(%s : %s)" % (self.name, self.ty)


class Signature:
    """A named collection of base symbols."""

    def __init__(self, symbols=()):
        self.symbols = {}
        for sym in symbols:
            self.add(sym)

    def add(self, sym):
        if sym.name in self.symbols:
            raise InputError("duplicate base symbol %r" % sym.name)
        self.symbols[sym.name] = sym
        return sym

    def __contains__(self, name):
        return name in self.symbols

    def get(self, name):
        return self.symbols.get(name)

    @property
    def types(self):
        return {name: sym.ty for name, sym in self.symbols.items()}


# ---------------------------------------------------------------------------
# generic interpretations, usable over any lattice


def _and(lattice, thunks):
    x = thunks[0]()
    if x == lattice.bot:
        return lattice.bot
    return lattice.meet(x, thunks[1]())


def _or(lattice, thunks):
    x = thunks[0]()
    if x == lattice.top:
        return lattice.top
    return lattice.join(x, thunks[1]())


def _not(lattice, thunks):
    return lattice.complement(thunks[0]())


def _join(lattice, thunks):
    out = lattice.bot
    for th in thunks:
        out = lattice.join(out, th())
    return out


def _meet(lattice, thunks):
    out = lattice.top
    for th in thunks:
        out = lattice.meet(out, th())
    return out


def _comp(lattice, thunks):
    f, g, x = (th() for th in thunks)
    return int(f.arr[int(g.arr[int(x)])])


def _cat(lattice, thunks):
    # relational composition with the middle point ranging over atoms
    f, g, i, j = (th() for th in thunks)
    mids = getattr(lattice, "atoms", range(lattice.size))
    for mid in mids:
        if f.arr[int(i), mid] == lattice.top and g.arr[mid, int(j)] == lattice.top:
            return lattice.top
    return lattice.bot


def _alt(lattice, thunks):
    f, g, i, j = (th() for th in thunks)
    return lattice.join(int(f.arr[int(i), int(j)]), int(g.arr[int(i), int(j)]))


# whole-table forms of the relational builtins, used by the evaluator to
# tabulate an operand like comp(a, f) in one vectorized step


def _comp_table(lattice, args):
    f, g = args
    return ArrayTable(kernels.compose_gather(f.arr, g.arr))


def _cat_table(lattice, args):
    f, g = args
    mids = np.asarray(list(getattr(lattice, "atoms", range(lattice.size))), dtype=np.int64)
    return ArrayTable(kernels.cat_tables(f.arr, g.arr, mids, lattice.top, lattice.bot))


def _alt_table(lattice, args):
    f, g = args
    return ArrayTable(lattice.join_table[f.arr, g.arr])


_TABLE_IMPLS = {"comp": _comp_table, "cat": _cat_table, "alt": _alt_table}

_GG = (GROUND, PLUS)
_REL = Fun(((GROUND, BOTH), (GROUND, BOTH)), GROUND)
_MONO1 = Fun(((GROUND, PLUS),), GROUND)

BUILTINS = {
    "and": (Fun((_GG, _GG), GROUND), _and),
    "or": (Fun((_GG, _GG), GROUND), _or),
    "not": (Fun(((GROUND, "-"),), GROUND), _not),
    "join": (Fun((_GG, _GG), GROUND), _join),
    "meet": (Fun((_GG, _GG), GROUND), _meet),
    "comp": (Fun(((_MONO1, BOTH), (_MONO1, BOTH)), _MONO1), _comp),
    "cat": (Fun(((_REL, PLUS), (_REL, PLUS)), _REL), _cat),
    "alt": (Fun(((_REL, PLUS), (_REL, PLUS)), _REL), _alt),
}


def builtin(name, ty=None, rename=None, shortcircuit=False):
    """A BaseSymbol for a builtin implementation, optionally retyped."""
    if name not in BUILTINS:
        raise InputError("unknown builtin %r" % name)
    default_ty, interp = BUILTINS[name]
    sym = BaseSymbol(rename or name, ty or default_ty, interp, shortcircuit)
    if name in _TABLE_IMPLS:
        sym.table_impl = _TABLE_IMPLS[name]
    return sym


def value_interp(fn):
    """Wrap a value-style function(lattice, args) into the thunk protocol."""

    def interp(lattice, thunks):
        return fn(lattice, [th() for th in thunks])

    return interp


def table_symbol(name, ty, mapping, lattice, shortcircuit=False):
    """A base symbol from an explicit table over an all-ground spine.

    `mapping` sends comma-joined element names to an element name; it must
    be total and monotone with respect to the declared argument variances.
    """
    coords = spine(ty)
    if not all(is_ground(t) for t, _ in coords):
        raise InputError("table symbol %r needs an all-ground type" % name)
    m = lattice.size
    arity = len(coords)
    if m**arity > 65536:
        raise InputError("table symbol %r would need %d entries" % (name, m**arity))
    arr = np.full((m,) * arity, -1, dtype=np.int64)
    for key_text, val_text in mapping.items():
        parts = [p.strip() for p in key_text.split(",")]
        if len(parts) != arity:
            raise InputError(
                "table key %r of %r has %d parts, expected %d"
                % (key_text, name, len(parts), arity)
            )
        key = tuple(lattice.element_index(p) for p in parts)
        arr[key] = lattice.element_index(val_text.strip())
    if (arr < 0).any():
        missing = next(zip(*np.nonzero(arr < 0)))
        raise ValidationError(
            "table for %r is missing key (%s)"
            % (name, ", ".join(lattice.display[i] for i in missing))
        )
    _check_table_variances(name, coords, arr, lattice)
    table = ArrayTable(arr)

    def interp(lattice_, args):
        return int(table.arr[tuple(int(a) for a in args)])

    return BaseSymbol(name, ty, value_interp(interp), shortcircuit)


def _check_table_variances(name, coords, arr, lattice):
    leq = lattice.leq_matrix
    m = lattice.size
    for c, (_, var) in enumerate(coords):
        if var == BOTH:
            continue
        order = leq if var == PLUS else leq.T
        moved = np.moveaxis(arr, c, 0)
        for lo in range(m):
            for hi in range(m):
                if lo != hi and order[lo, hi]:
                    if not leq[moved[lo].ravel(), moved[hi].ravel()].all():
                        raise ValidationError(
                            "table for %r is not %s in argument %d"
                            % (name, "monotone" if var == PLUS else "antitone", c + 1)
                        )


# ---------------------------------------------------------------------------
# JSON form


def load_signature(spec, lattice):
    """Load `{"symbols": [...], "vars": {...}}` (dict or file path).

    Each symbol entry has "name", "type", and either "impl": "builtin:<name>"
    or a "table" object mapping comma-joined argument element names to result
    element names, plus an optional "shortcircuit" flag.  Returns
    (Signature, var_types) where var_types maps declared variable names to
    types.
    """
    if isinstance(spec, str):
        with open(spec) as fh:
            spec = json.load(fh)
    if not isinstance(spec, dict):
        raise InputError("signature spec must be an object")
    sig = Signature()
    for entry in spec.get("symbols", []):
        try:
            name = entry["name"]
            ty = parse_type(entry["type"])
        except (KeyError, TypeError):
            raise InputError(
                "signature symbol entries need 'name' and 'type'"
            ) from None
        shortcircuit = bool(entry.get("shortcircuit", False))
        impl = entry.get("impl")
        if isinstance(impl, str) and impl.startswith("builtin:"):
            sig.add(builtin(impl[len("builtin:"):], ty, rename=name, shortcircuit=shortcircuit))
        elif "table" in entry:
            sig.add(table_symbol(name, ty, entry["table"], lattice, shortcircuit))
        else:
            raise InputError(
                "symbol %r needs 'impl': 'builtin:<name>' or a 'table'" % name
            )
    var_types = {}
    for name, text in spec.get("vars", {}).items():
        var_types[name] = parse_type(text)
    return sig, var_types
