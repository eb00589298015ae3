"""Two evaluators for fixpoint terms, sharing one value model.

eval_global is the reference: Kleene iteration from the extremal table,
re-tabulating every function space in full each pass.  It needs the whole
(possibly enormous) argument domain of each fixpoint up front, which is
exactly what makes it a good oracle and a bad algorithm.

eval_local computes only what the demanded cell needs.  Fixpoint variables
hold partial tables that grow when a body evaluation applies the variable to
arguments not seen before; newly registered cells start at the extremal
element and join the sweep queue immediately, and sweeps repeat until one
full pass over the (possibly grown) queue changes nothing.  Reads are live:
a body evaluation sees the freshest cell values.  Function-typed operands
are tabulated in full over their flattened spine on first force and memoized
against the bindings of their free variables, so a strict base never causes
more tabulation than its demands; short-circuit bases receive thunks and
force only the branches they take.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ChainViolation, ContractViolation
from .syntax import App, Fix, Lam, Var, beta_normalize, free_vars
from .typecheck import typecheck
from .types import GROUND, is_ground, spine
from .values import (
    DEFAULT_DOMAIN_CAP,
    ArrayTable,
    DictTable,
    apply_value,
    canonical_key,
    canonical_value,
    const_table,
    show_value,
    table_keys,
    value_eq,
    value_leq,
)

Env = dict


@dataclass
class FixStat:
    var: str
    width: int = 0
    height: int = 0
    body_evals: int = 0
    keys: list = field(default_factory=list)

    def to_json(self):
        return {
            "var": self.var,
            "width": self.width,
            "height": self.height,
            "body_evals": self.body_evals,
        }


@dataclass
class EvalStats:
    mode: str
    result: str = ""
    value: object = None
    rounds: int = 1
    fixpoints: list = field(default_factory=list)
    duration_ms: float = 0.0
    operand_tabulations: int = 0

    def to_json(self):
        return {
            "mode": self.mode,
            "result": self.result,
            "fixpoints": [f.to_json() for f in self.fixpoints],
            "duration_ms": self.duration_ms,
        }

    def finalize(self, value, lattice, started):
        self.value = value
        self.result = show_value(value, lattice)
        self.duration_ms = (time.perf_counter() - started) * 1000.0
        self.rounds = max((f.height for f in self.fixpoints), default=1)
        return self


def _assemble(coords, pairs, lattice):
    """Build a total table over `coords` from (leading key, sub-value) pairs.

    Each sub-value is ground or a table over the remaining coordinates.
    """
    if all(is_ground(t) for t, _ in coords):
        m = lattice.size
        arr = np.empty((m,) * len(coords), dtype=np.int64)
        for key, sub in pairs:
            idx = tuple(int(k) for k in key)
            arr[idx] = sub if isinstance(sub, (int, np.integer)) else sub.arr
        return ArrayTable(arr)
    entries = {}
    for key, sub in pairs:
        canon = canonical_key(key)
        if isinstance(sub, (int, np.integer)):
            entries[canon] = int(sub)
        else:
            for subkey, subval in sub.items():
                entries[canon + tuple(subkey)] = int(subval)
    return DictTable(entries, len(coords), True)


# ---------------------------------------------------------------------------
# global (Kleene) evaluation


class GlobalEvaluator:
    def __init__(self, signature, lattice, ty_cache, var_types, cap, stats):
        self.signature = signature
        self.lattice = lattice
        self.ty_cache = ty_cache
        self.var_types = var_types
        self.cap = cap
        self.stats = stats
        self._base_tables = {}
        self._fix_stats = {}

    def collect_stats(self):
        return self.stats

    def run(self, term, env, args=None):
        value = self.val(term, env)
        if args:
            value = apply_value(value, list(args))
        return value

    def val(self, t, env):
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            return self.base_value(t.name)

        if isinstance(t, App):
            groups = []
            node = t
            while isinstance(node, App):
                groups.append(node.args)
                node = node.fn
            args = [self.val(a, env) for g in reversed(groups) for a in g]
            if isinstance(node, Var) and node.name not in env:
                sym = self._symbol(node.name)
                if len(args) == len(spine(sym.ty)):
                    return self.apply_base(sym, args)
            return apply_value(self.val(node, env), args)

        if isinstance(t, Lam):
            ty = self.ty_cache[id(t)]
            keys, _ = table_keys(ty.args, self.lattice, self.cap)
            pairs = []
            for key in keys:
                inner = dict(env)
                for (name, _), v in zip(t.params, key):
                    inner[name] = v
                pairs.append((key, self.val(t.body, inner)))
            return _assemble(spine(ty), pairs, self.lattice)

        if isinstance(t, Fix):
            return self.fixpoint(t, env)

        raise ContractViolation("not a term: %r" % (t,))

    def _symbol(self, name):
        sym = self.signature.get(name)
        if sym is None:
            raise ContractViolation("unknown name %r survived type checking" % name)
        return sym

    def apply_base(self, sym, args):
        return sym.interp(self.lattice, [lambda v=v: v for v in args])

    def base_value(self, name):
        """The full table of a base symbol (its type's ground result spine)."""
        hit = self._base_tables.get(name)
        if hit is not None:
            return hit
        sym = self._symbol(name)
        if is_ground(sym.ty):
            value = sym.interp(self.lattice, [])
        else:
            coords = spine(sym.ty)
            keys, _ = table_keys(coords, self.lattice, self.cap)
            pairs = [(key, self.apply_base(sym, list(key))) for key in keys]
            value = _assemble(coords, pairs, self.lattice)
        self._base_tables[name] = value
        return value

    def fixpoint(self, t, env):
        lattice = self.lattice
        # same default as the type checker: undeclared binders are ground
        ty = self.var_types.get(t.name, GROUND)
        extremum = lattice.bot if t.kind == "mu" else lattice.top
        if is_ground(ty):
            cur = extremum
        else:
            cur = const_table(spine(ty), lattice, extremum, self.cap)
        stat = self._fix_stats.get(id(t))
        if stat is None:
            stat = FixStat(var=t.name)
            self._fix_stats[id(t)] = stat
            self.stats.fixpoints.append(stat)
        passes = 0
        while True:
            inner = dict(env)
            inner[t.name] = cur
            nxt = self.val(t.body, inner)
            passes += 1
            stat.body_evals += 1 if is_ground(ty) else _table_size(nxt)
            lo, hi = (cur, nxt) if t.kind == "mu" else (nxt, cur)
            if not value_leq(lo, hi, lattice):
                raise ChainViolation(
                    "iteration for %s %s left the %s chain"
                    % (t.kind, t.name, "ascending" if t.kind == "mu" else "descending")
                )
            if value_eq(cur, nxt):
                break
            cur = nxt
        stat.width = 1 if is_ground(ty) else _table_size(cur)
        stat.height = passes + 1
        return cur


def _table_size(v):
    if isinstance(v, ArrayTable):
        return int(v.arr.size)
    return len(v.entries)


# ---------------------------------------------------------------------------
# local (demand-driven) evaluation


class _FixState:
    __slots__ = (
        "node", "kind", "default", "coords", "table", "queue",
        "epoch", "stable", "active", "env", "sweeps", "stat",
    )

    def __init__(self, node, kind, default, coords, env, stat):
        self.node = node
        self.kind = kind
        self.default = default
        self.coords = coords
        self.table = {}
        self.queue = []
        self.epoch = 0
        self.stable = True
        self.active = False
        self.env = env
        self.sweeps = 0
        self.stat = stat


class LocalEvaluator:
    def __init__(
        self,
        signature,
        lattice,
        ty_cache,
        var_types,
        cap,
        stats,
        reuse_fixpoint_tables=True,
        fast_tables=True,
    ):
        self.signature = signature
        self.lattice = lattice
        self.ty_cache = ty_cache
        self.var_types = var_types
        self.cap = cap
        self.stats = stats
        self.reuse = reuse_fixpoint_tables
        self.fast_tables = fast_tables
        self.operand_memo = {}
        self.fix_cache = {}
        self._free = {}

    def collect_stats(self):
        return self.stats

    def run(self, term, env, args=None):
        bound = {name: ("val", v) for name, v in env.items()}
        if args:
            return self.eval(term, bound, list(args))
        ty = self.ty_cache[id(term)]
        if is_ground(ty):
            return self.eval(term, bound, [])
        return self.tabulate_operand(term, bound)

    # -- core dispatch -------------------------------------------------------

    def eval(self, t, env, args):
        if isinstance(t, Var):
            binding = env.get(t.name)
            if binding is None:
                return self.base_apply(t.name, env, args)
            kind, payload = binding
            if kind == "val":
                return apply_value(payload, args) if args else payload
            if len(args) < len(payload.coords):
                return self._saturate_call(
                    lambda key: self.fix_apply(payload, list(args) + list(key)),
                    payload.coords[len(args):],
                )
            return self.fix_apply(payload, args)

        if isinstance(t, App):
            return self.eval_app(t, env, args)

        if isinstance(t, Lam):
            n = len(t.params)
            if len(args) < n:
                coords = spine(self.ty_cache[id(t)])
                return self.saturate(t, env, args, coords[len(args):])
            inner = dict(env)
            for (name, _), v in zip(t.params, args):
                inner[name] = ("val", v)
            return self.eval(t.body, inner, args[n:])

        if isinstance(t, Fix):
            state = self.fix_state(t, env)
            coords = state.coords
            if len(args) < len(coords):
                return self.saturate(t, env, args, coords[len(args):])
            return self.fix_apply(state, args)

        raise ContractViolation("not a term: %r" % (t,))

    def eval_app(self, t, env, extra):
        head = t.fn
        if isinstance(head, Var) and head.name not in env:
            sym = self.signature.get(head.name)
            if sym is None:
                raise ContractViolation(
                    "unknown name %r survived type checking" % head.name
                )
            if len(t.args) + len(extra) == len(spine(sym.ty)):
                if sym.shortcircuit:
                    thunks = [self.lazy_operand(a, env) for a in t.args]
                    thunks += [(lambda v=v: v) for v in extra]
                else:
                    vals = [self.operand_value(a, env) for a in t.args] + list(extra)
                    thunks = [(lambda v=v: v) for v in vals]
                return self.apply_base(sym, thunks)
        vals = [self.operand_value(a, env) for a in t.args]
        return self.eval(head, env, vals + extra)

    def base_apply(self, name, env, args):
        sym = self.signature.get(name)
        if sym is None:
            raise ContractViolation("unknown name %r survived type checking" % name)
        coords = spine(sym.ty)
        if len(args) == len(coords):
            return self.apply_base(sym, [(lambda v=v: v) for v in args])
        node = Var(name)
        return self._saturate_call(
            lambda key: self.eval(node, env, list(args) + list(key)),
            coords[len(args):],
        )

    def apply_base(self, sym, thunks):
        return sym.interp(self.lattice, thunks)

    def saturate(self, t, env, args, remaining):
        return self._saturate_call(
            lambda key: self.eval(t, env, list(args) + list(key)), remaining
        )

    def _saturate_call(self, fn, coords):
        keys, _ = table_keys(coords, self.lattice, self.cap)
        pairs = [(key, fn(key)) for key in keys]
        return _assemble(tuple(coords), pairs, self.lattice)

    # -- operands -------------------------------------------------------------

    def operand_value(self, node, env):
        ty = self.ty_cache[id(node)]
        if is_ground(ty):
            return self.eval(node, env, [])
        return self.tabulate_operand(node, env)

    def lazy_operand(self, node, env):
        slot = []

        def force():
            if not slot:
                slot.append(self.operand_value(node, env))
            return slot[0]

        return force

    def tabulate_operand(self, node, env):
        """Total table of a function-typed operand, memoized per environment.

        The memo key pairs the syntax node with the canonical bindings of its
        free variables; fixpoint bindings contribute their epoch, which moves
        only when a cell's value changes, so registrations alone never
        invalidate a tabulation.
        """
        key = (id(node), self.env_signature(self.free(node), env))
        hit = self.operand_memo.get(key)
        if hit is not None:
            return hit
        coords = tuple(spine(self.ty_cache[id(node)]))
        value = self.fix_slice_operand(node, env)
        if value is None and self.fast_tables:
            value = self.fast_table(node, env)
        if value is None:
            keys, _ = table_keys(coords, self.lattice, self.cap)
            pairs = [(kv, self.eval(node, env, list(kv))) for kv in keys]
            value = _assemble(coords, pairs, self.lattice)
        self.stats.operand_tabulations += 1
        self.operand_memo[key] = value
        return value

    def fix_slice_operand(self, node, env):
        """Tabulate a fixpoint application by reading its state directly.

        An operand like F(g) with F a fixpoint variable denotes a slice of
        F's cell table; enumerating the slice through the generic per-cell
        evaluator would re-dispatch into fix_apply once per cell, so the
        cells are registered and read in bulk here instead.  Registration
        order and the values read match the generic path exactly.
        """
        prefix_nodes = ()
        if isinstance(node, App):
            head = node.fn
            prefix_nodes = node.args
        else:
            head = node
        if isinstance(head, Fix):
            state = self.fix_state(head, env)
        elif isinstance(head, Var):
            binding = env.get(head.name)
            if binding is None or binding[0] != "fix":
                return None
            state = binding[1]
        else:
            return None
        if len(prefix_nodes) > len(state.coords):
            return None
        prefix = [self.operand_value(a, env) for a in prefix_nodes]
        coords = tuple(state.coords[len(prefix):])
        keys, _ = table_keys(coords, self.lattice, self.cap)
        table = state.table
        for kv in keys:
            full = prefix + list(kv)
            canon = canonical_key(full)
            if canon not in table:
                table[canon] = state.default
                state.queue.append(tuple(full))
                state.stat.keys.append(tuple(full))
                state.stable = False
        if not state.stable and not state.active:
            self.stabilize(state)
        pairs = [
            (kv, table[canonical_key(prefix + list(kv))]) for kv in keys
        ]
        return _assemble(coords, pairs, self.lattice)

    def fast_table(self, node, env):
        """Whole-table base evaluation when the symbol provides one."""
        if not (isinstance(node, App) and isinstance(node.fn, Var)):
            return None
        if node.fn.name in env:
            return None
        sym = self.signature.get(node.fn.name)
        impl = getattr(sym, "table_impl", None)
        if impl is None:
            return None
        args = [self.operand_value(a, env) for a in node.args]
        if not all(isinstance(a, ArrayTable) for a in args):
            return None
        return impl(self.lattice, args)

    def free(self, node):
        names = self._free.get(id(node))
        if names is None:
            names = sorted(free_vars(node))
            self._free[id(node)] = names
        return names

    def env_signature(self, names, env):
        sig = []
        for name in names:
            binding = env.get(name)
            if binding is None:
                continue
            kind, payload = binding
            if kind == "val":
                sig.append((name, canonical_value(payload)))
            else:
                sig.append((name, id(payload), payload.epoch))
        return tuple(sig)

    # -- fixpoints -------------------------------------------------------------

    def fix_state(self, t, env):
        sig_key = self.env_signature(self.free(t), env)
        if self.reuse:
            hit = self.fix_cache.get(id(t))
            if hit is not None and hit[0] == sig_key:
                return hit[1]
        ty = self.var_types.get(t.name, GROUND)
        coords = () if is_ground(ty) else tuple(spine(ty))
        default = self.lattice.bot if t.kind == "mu" else self.lattice.top
        stat = FixStat(var=t.name)
        self.stats.fixpoints.append(stat)
        inner = dict(env)
        state = _FixState(t, t.kind, default, coords, inner, stat)
        inner[t.name] = ("fix", state)
        if self.reuse:
            self.fix_cache[id(t)] = (sig_key, state)
        return state

    def fix_apply(self, state, args):
        canon = canonical_key(args)
        if canon not in state.table:
            state.table[canon] = state.default
            state.queue.append(tuple(args))
            state.stat.keys.append(tuple(args))
            state.stable = False
        if not state.stable and not state.active:
            self.stabilize(state)
        return state.table[canon]

    def stabilize(self, state):
        """Sweep the queue (live reads, same-sweep discoveries) to a fixpoint."""
        lattice = self.lattice
        body = state.node.body
        state.active = True
        try:
            while True:
                changed = False
                i = 0
                while i < len(state.queue):
                    key = state.queue[i]
                    i += 1
                    canon = canonical_key(key)
                    new = self.eval(body, state.env, list(key))
                    state.stat.body_evals += 1
                    old = state.table[canon]
                    if new != old:
                        lo, hi = (old, new) if state.kind == "mu" else (new, old)
                        if not lattice.leq_matrix[lo, hi]:
                            raise ChainViolation(
                                "cell %s of %s %s moved from %s to %s, off the chain"
                                % (
                                    canon,
                                    state.kind,
                                    state.node.name,
                                    lattice.show(old),
                                    lattice.show(new),
                                )
                            )
                        state.table[canon] = new
                        state.epoch += 1
                        changed = True
                state.sweeps += 1
                if not changed:
                    break
            state.stable = True
        finally:
            state.active = False
        state.stat.width = len(state.table)
        state.stat.height = state.sweeps + 1


# ---------------------------------------------------------------------------
# entry points


def eval_global(
    term,
    signature,
    lattice,
    var_types=None,
    env=None,
    args=None,
    cap=DEFAULT_DOMAIN_CAP,
):
    """Reference evaluation by Kleene iteration over total tables.

    `args` are query values applied to the fully tabulated term value.
    """
    var_types = dict(var_types or {})
    _, cache = typecheck(term, signature.types, var_types)
    stats = EvalStats(mode="global")
    started = time.perf_counter()
    ev = GlobalEvaluator(signature, lattice, cache, var_types, cap, stats)
    value = ev.run(term, dict(env or {}), args)
    return value, stats.finalize(value, lattice, started)


def eval_local(
    term,
    signature,
    lattice,
    var_types=None,
    env=None,
    args=None,
    cap=DEFAULT_DOMAIN_CAP,
    reuse_fixpoint_tables=True,
    fast_tables=True,
):
    """Demand-driven evaluation; beta-normalizes first, then runs locally.

    `args` are query values for the term's curried spine; only the cells
    they demand are computed.
    """
    var_types = dict(var_types or {})
    typecheck(term, signature.types, var_types)  # errors against the source term
    log = {}
    norm = beta_normalize(term, reserved=set(signature.types), rename_log=log)
    renamed_types = dict(var_types)
    for new, old in log.items():
        if old in var_types:
            renamed_types[new] = var_types[old]
    _, cache = typecheck(norm, signature.types, renamed_types)
    stats = EvalStats(mode="local")
    started = time.perf_counter()
    ev = LocalEvaluator(
        signature,
        lattice,
        cache,
        renamed_types,
        cap,
        stats,
        reuse_fixpoint_tables=reuse_fixpoint_tables,
        fast_tables=fast_tables,
    )
    value = ev.run(norm, dict(env or {}), args)
    return value, stats.finalize(value, lattice, started)
