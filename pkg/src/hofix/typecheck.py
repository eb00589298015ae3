"""Variance-aware type checking.

The context maps names to (type, variance) pairs.  Checking an operand of a
`-` argument flips every variance in the context; checking a `+-` argument
keeps only the `+-` entries.  A variable use is legal when its recorded
variance is `+` or `+-`: monotone use is the default, and a `-` variable may
only be touched inside an odd number of antitone positions, where flipping
has turned it back into `+`.
"""

from .errors import TypeError_
from .syntax import App, Fix, Lam, Var, free_vars, show_term
from .types import BOTH, Fun, GROUND, MINUS, PLUS


def flip(variance):
    if variance == PLUS:
        return MINUS
    if variance == MINUS:
        return PLUS
    return BOTH


def update(ctx, variance):
    """Context for checking an operand at the given argument variance."""
    if variance == PLUS:
        return ctx
    if variance == MINUS:
        return {name: (ty, flip(v)) for name, (ty, v) in ctx.items()}
    return flatten(ctx)


def flatten(ctx):
    return {name: (ty, v) for name, (ty, v) in ctx.items() if v == BOTH}


def typecheck(term, base_types, var_types=None):
    """Check `term`; returns (type, subterm type cache keyed by id(node)).

    `base_types` types the interpreted symbols; `var_types` types every
    variable name, free or binder-bound (binders carry variances but not
    types in the syntax).  Bound names shadow base symbols.
    """
    var_types = var_types or {}
    cache = {}

    def check(t, ctx):
        ty = rule(t, ctx)
        cache[id(t)] = ty
        return ty

    def rule(t, ctx):
        if isinstance(t, Var):
            if t.name in ctx:  # x: tau^v in ctx, v in {+, +-}
                ty, v = ctx[t.name]
                if v == MINUS:
                    raise TypeError_(
                        "variable %r is antitone here and cannot be used directly"
                        % t.name,
                        subterm=show_term(t),
                    )
                return ty
            if t.name in base_types:
                return base_types[t.name]
            raise TypeError_("unknown name %r" % t.name, subterm=show_term(t))

        if isinstance(t, App):  # operand i checked under ctx^{v_i}
            fty = check(t.fn, ctx)
            if not isinstance(fty, Fun):
                raise TypeError_(
                    "applying a term of ground type", subterm=show_term(t)
                )
            if len(t.args) != len(fty.args):
                raise TypeError_(
                    "expected %d arguments, got %d" % (len(fty.args), len(t.args)),
                    subterm=show_term(t),
                )
            for arg, (aty, v) in zip(t.args, fty.args):
                got = check(arg, update(ctx, v))
                if got != aty:
                    raise TypeError_(
                        "argument has type %s, expected %s" % (got, aty),
                        subterm=show_term(arg),
                    )
            return fty.res

        if isinstance(t, Lam):  # body under ctx[x_i: tau_i^{v_i}]
            inner = dict(ctx)
            anns = []
            for name, v in t.params:
                # undeclared binders default to ground type, as for
                # fixpoints; a wrong default fails at the use site
                pty = var_types.get(name, GROUND)
                inner[name] = (pty, v)
                anns.append((pty, v))
            return Fun(tuple(anns), check(t.body, inner))

        if isinstance(t, Fix):  # body under ctx[x: tau_x^+], body type tau_x
            # undeclared fixpoint binders default to ground type; a wrong
            # default surfaces as the body-type mismatch below
            fty = var_types.get(t.name, GROUND)
            inner = dict(ctx)
            inner[t.name] = (fty, PLUS)
            bty = check(t.body, inner)
            if bty != fty:
                raise TypeError_(
                    "fixpoint body has type %s, expected %s" % (bty, fty),
                    subterm=show_term(t),
                )
            return fty

        raise TypeError_("not a term: %r" % (t,))

    free = free_vars(term)
    top = {
        name: (ty, BOTH)
        for name, ty in var_types.items()
        if name in free and name not in base_types
    }
    return check(term, top), cache
