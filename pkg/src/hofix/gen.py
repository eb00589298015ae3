"""Seeded random generation of well-typed terms over small lattices.

Generation is type- and variance-directed: a target type plus a context
of usable variables (each carrying the variance of the current position
relative to its binder) determine the menu of constructions, so every
produced term passes the type checker by construction -- and is
re-checked afterwards as a safety net.  Base functions are drawn fresh
per term: random tables rejection-sampled to match their declared
argument variances, plus the logical builtins.

The two entry points back the randomized equivalence and monotonicity
test suites:

* ``random_closed_ground`` -- closed ground terms mixing constants,
  random tables, the builtins, beta redexes and mu/nu fixpoints up to
  order 2.
* ``random_polarized`` -- ground terms with one free function variable
  ``f`` occurring only at positive (or only at negative) positions, so
  the term's value must depend monotonically (antitonically) on ``f``.
"""

import random

from .errors import InputError
from .lattice import boolean, explicit, flat, two
from .signature import BaseSymbol, Signature, builtin, value_interp
from .syntax import App, Fix, Lam, Var, free_vars
from .typecheck import typecheck
from .types import BOTH, Fun, GROUND, MINUS, PLUS, is_ground

__all__ = ["TermGen", "random_closed_ground", "random_polarized", "small_lattices"]


def small_lattices():
    """The generation menu: orders with at most four elements."""
    chain3 = explicit(["bot", "mid", "top"], [("bot", "mid"), ("mid", "top")],
                      name="chain3")
    chain4 = explicit(
        ["bot", "lo", "hi", "top"],
        [("bot", "lo"), ("lo", "hi"), ("hi", "top")],
        name="chain4",
    )
    return [two(), boolean(), chain3, chain4, flat(1), flat(2)]


def _flip(v):
    return {PLUS: MINUS, MINUS: PLUS, BOTH: BOTH}[v]


def _compose(outer, inner):
    """Variance of a position nested with variance `inner` inside `outer`."""
    if outer == PLUS:
        return inner
    if outer == MINUS:
        return _flip(inner)
    return inner if inner == BOTH else None  # dead under an unordered position


def _shift_ctx(ctx, v):
    out = {}
    for name, (ty, cur) in ctx.items():
        nxt = _compose(v, cur)
        if nxt is not None:
            out[name] = (ty, nxt)
    return out


_UNARY = {
    PLUS: Fun(((GROUND, PLUS),), GROUND),
    MINUS: Fun(((GROUND, MINUS),), GROUND),
    BOTH: Fun(((GROUND, BOTH),), GROUND),
}


class TermGen:
    """Stateful generator: one instance per term, accumulating a signature."""

    def __init__(self, lattice, rng):
        self.lattice = lattice
        self.rng = rng
        self.sig = Signature()
        self.sig.add(builtin("join"))
        self.sig.add(builtin("meet"))
        try:
            for e in range(lattice.size):
                lattice.complement(e)
            self.has_not = True
            self.sig.add(builtin("not"))
        except InputError:
            self.has_not = False  # not every order is complemented
        self.var_types = {}
        self._counter = 0
        self._consts = {}

    # -- raw material -------------------------------------------------------

    def fresh(self, prefix):
        self._counter += 1
        return "%s%d" % (prefix, self._counter)

    def constant(self, element=None):
        """A nullary base symbol denoting a fixed lattice element."""
        if element is None:
            element = self.rng.randrange(self.lattice.size)
        name = self._consts.get(element)
        if name is None:
            name = "k%d" % element
            self._consts[element] = name
            self.sig.add(BaseSymbol(name, GROUND, lambda lat, th, e=element: e))
        return Var(name)

    def _sample_table(self, variance):
        """A random unary table respecting `variance`, by rejection."""
        size = self.lattice.size
        leq = self.lattice.leq_matrix
        for _ in range(64):
            tab = [self.rng.randrange(size) for _ in range(size)]
            ok = True
            if variance != BOTH:
                for i in range(size):
                    for j in range(size):
                        if not leq[i, j] or i == j:
                            continue
                        lo, hi = (tab[i], tab[j]) if variance == PLUS else (tab[j], tab[i])
                        if not leq[lo, hi]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                return tab
        if variance == MINUS:
            return [self.lattice.bot] * size  # constants are antitone too
        return list(range(size))  # identity is monotone

    def unary_base(self, variance):
        """A fresh random unary base symbol with the given argument variance."""
        tab = self._sample_table(variance)
        name = self.fresh({PLUS: "m", MINUS: "a", BOTH: "u"}[variance])
        self.sig.add(BaseSymbol(
            name, _UNARY[variance],
            value_interp(lambda lat, vals, t=tuple(tab): t[int(vals[0])]),
        ))
        return Var(name)

    # -- terms ---------------------------------------------------------------

    def gen(self, ty, ctx, fuel):
        if is_ground(ty):
            return self.gen_ground(ctx, fuel)
        return self.gen_fun(ty, ctx, fuel)

    def _usable(self, ctx, ty):
        return [
            name
            for name, (vty, cur) in ctx.items()
            if vty == ty and cur in (PLUS, BOTH)
        ]

    def gen_ground(self, ctx, fuel):
        rng = self.rng
        ground_vars = self._usable(ctx, GROUND)
        if fuel <= 0:
            if ground_vars and rng.random() < 0.7:
                return Var(rng.choice(ground_vars))
            return self.constant()
        menu = ["const", "unary", "binary", "fix", "redex"]
        if self.has_not:
            menu.append("neg")
        if ground_vars:
            menu += ["var", "var"]
        if fuel >= 3:
            menu.append("fixfun")
        pick = rng.choice(menu)
        if pick == "const":
            return self.constant()
        if pick == "var":
            return Var(rng.choice(ground_vars))
        if pick == "unary":
            v = rng.choice((PLUS, MINUS, BOTH))
            head = self.unary_base(v)
            arg = self.gen_ground(_shift_ctx(ctx, v), fuel - 1)
            return App(head, (arg,))
        if pick == "binary":
            head = Var(rng.choice(("join", "meet")))
            return App(head, (
                self.gen_ground(ctx, fuel - 1),
                self.gen_ground(ctx, fuel - 1),
            ))
        if pick == "neg":
            arg = self.gen_ground(_shift_ctx(ctx, MINUS), fuel - 1)
            return App(Var("not"), (arg,))
        if pick == "redex":
            v = rng.choice((PLUS, MINUS, BOTH))
            x = self.fresh("y")
            self.var_types[x] = GROUND
            body = self.gen_ground({**ctx, x: (GROUND, v)}, fuel - 1)
            arg = self.gen_ground(_shift_ctx(ctx, v), fuel - 1)
            return App(Lam(((x, v),), body), (arg,))
        if pick == "fix":
            return self.gen_fix_ground(ctx, fuel)
        return self.gen_fix_fun(ctx, fuel)

    def gen_fix_ground(self, ctx, fuel):
        """A fixpoint over one ground coordinate, applied to an argument."""
        rng = self.rng
        kind = rng.choice(("mu", "nu"))
        fname = self.fresh("F")
        xname = self.fresh("x")
        fty = Fun(((GROUND, BOTH),), GROUND)
        self.var_types[fname] = fty
        self.var_types[xname] = GROUND
        inner = {**ctx, fname: (fty, PLUS), xname: (GROUND, BOTH)}
        body = self.gen_ground(inner, fuel - 2)
        if rng.random() < 0.7:
            # let the fixpoint actually recurse; the argument sits at the
            # unordered coordinate, so only unordered variables survive there
            body = App(Var(rng.choice(("join", "meet"))), (
                body,
                App(Var(fname), (
                    self.gen_ground(_shift_ctx(inner, BOTH), max(fuel - 3, 0)),
                )),
            ))
        fix = Fix(kind, fname, Lam(((xname, BOTH),), body))
        return App(fix, (self.gen_ground(_shift_ctx(ctx, BOTH), fuel - 2),))

    def gen_fix_fun(self, ctx, fuel):
        """An order-2 fixpoint: one function-typed coordinate, applied."""
        rng = self.rng
        kind = rng.choice(("mu", "nu"))
        fname = self.fresh("G")
        gname = self.fresh("g")
        gty = _UNARY[PLUS]
        fty = Fun(((gty, PLUS),), GROUND)
        self.var_types[fname] = fty
        self.var_types[gname] = gty
        inner = {**ctx, fname: (fty, PLUS), gname: (gty, PLUS)}
        body = App(Var(rng.choice(("join", "meet"))), (
            App(Var(gname), (self.gen_ground(inner, fuel - 3),)),
            App(Var(fname), (self.gen_fun(gty, inner, fuel - 3),)),
        ))
        fix = Fix(kind, fname, Lam(((gname, PLUS),), body))
        return App(fix, (self.gen_fun(gty, ctx, fuel - 2),))

    def gen_fun(self, ty, ctx, fuel):
        rng = self.rng
        candidates = self._usable(ctx, ty)
        if candidates and rng.random() < 0.4:
            return Var(rng.choice(candidates))
        if ty == _UNARY[PLUS] and rng.random() < 0.3:
            return self.unary_base(PLUS)
        params = []
        inner = dict(ctx)
        for cty, cv in ty.args:
            pname = self.fresh("z")
            self.var_types[pname] = cty
            inner[pname] = (cty, cv)
            params.append((pname, cv))
        body = self.gen(ty.res, inner, fuel - 1)
        return Lam(tuple(params), body)


def random_closed_ground(rng, lattice, fuel=6):
    """A random closed ground term; returns (term, signature, var_types)."""
    g = TermGen(lattice, rng)
    term = g.gen_ground({}, fuel)
    ty, _ = typecheck(term, g.sig.types, g.var_types)
    if not is_ground(ty):
        raise InputError("generator produced a non-ground term")
    return term, g.sig, g.var_types


def random_polarized(rng, lattice, polarity=PLUS, fuel=6):
    """A ground term whose free variable ``f`` occurs only at `polarity`.

    ``f`` has type (o+)->o; every occurrence sits at a position whose
    composed variance from the root equals `polarity`, so the denotation
    is monotone (PLUS) or antitone (MINUS) in the table bound to ``f``.
    Returns (term, signature, var_types).
    """
    if polarity not in (PLUS, MINUS):
        raise InputError("polarity must be '+' or '-'")
    g = TermGen(lattice, rng)
    if polarity == MINUS and not g.has_not:
        raise InputError("antitone terms need a complemented lattice")
    fty = _UNARY[PLUS]
    g.var_types["f"] = fty

    ctx = {"f": (fty, PLUS)}
    term = g.gen_ground(ctx, fuel)
    if polarity == MINUS:
        term = App(Var("not"), (term,))
    if "f" not in free_vars(term):
        # guarantee at least one occurrence without disturbing polarity
        probe = App(Var("f"), (g.constant(),))
        if polarity == MINUS:
            probe = App(Var("not"), (probe,))
        term = App(Var("join"), (term, probe))
    typecheck(term, g.sig.types, g.var_types)
    return term, g.sig, g.var_types
