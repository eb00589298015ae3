"""Command-line front end.

Three subcommands share one set of input flags:

* ``check``   -- parse and type-check a term, print its type.
* ``eval``    -- evaluate a term (demand-driven or whole-domain) and print
                 the result; optionally dump evaluation statistics as JSON.
* ``compare`` -- run both evaluators on the same problem and print a
                 per-fixpoint table of widths, heights and durations.

The term under evaluation comes either from ``--term`` (a file path, or
inline source text if no such file exists) or from ``--app``, which names
one of the bundled example problems and builds lattice, signature and term
in one go.

Exit codes: 0 success, 2 malformed input (syntax, bad query, bad JSON),
3 typing error, 4 resource cap exceeded, 5 evaluator disagreement.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .apps import (
    build_collatz,
    build_hfl,
    build_indent,
    build_reach,
    build_strictness,
    build_worstcase,
    ProblemInstance,
)
from .errors import HofixError, InputError, ResourceLimit
from .lattice import boolean, flat, from_spec, powerset, two
from .signature import BUILTINS, Signature, builtin, load_signature
from .syntax import free_vars, parse_term
from .typecheck import typecheck
from .types import show_type
from .values import DEFAULT_DOMAIN_CAP, canonical_value

APP_NAMES = ("collatz", "reach", "indent", "hfl", "strictness", "worstcase")


@dataclass
class RunConfig:
    """Everything one invocation needs, resolved from flags."""

    mode: str = "local"
    term: str = None
    app: str = None
    n: int = 3
    word: str = None
    query: str = None
    lattice: str = None
    signature: str = None
    stats_out: str = None
    max_domain: int = DEFAULT_DOMAIN_CAP
    seed: int = None


def _resolve_lattice(src):
    """Turn a ``--lattice`` argument into a Lattice.

    Accepts the shorthands ``two``, ``bool``, ``flat:<k>`` and
    ``powerset:a,b,c`` directly; anything else is read as a JSON spec
    file.  No argument means the four-element boolean lattice.
    """
    if src is None:
        return boolean()
    if src in ("two", "2"):
        return two()
    if src in ("bool", "boolean"):
        return boolean()
    if src.startswith("flat:"):
        try:
            return flat(int(src[len("flat:"):]))
        except ValueError:
            raise InputError("flat:<k> needs an integer atom count") from None
    if src.startswith("powerset:"):
        names = [t for t in src[len("powerset:"):].split(",") if t]
        if not names:
            raise InputError("powerset:<names> needs at least one base name")
        return powerset(names)
    if os.path.exists(src):
        return from_spec(src)
    raise InputError(
        "unknown lattice %r (expected two, bool, flat:<k>, "
        "powerset:<names>, or a JSON file path)" % src
    )


def _default_signature():
    """All builtin base symbols at their default types."""
    sig = Signature()
    for name in BUILTINS:
        sig.add(builtin(name, shortcircuit=name in ("and", "or")))
    return sig


def _read_term_source(src):
    """Return term text from a file path, or the string itself."""
    if os.path.exists(src):
        with open(src) as fh:
            return fh.read()
    return src


def _parse_bits(text):
    bits = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in ("0", "1"):
            raise InputError("query bits must be 0 or 1, got %r" % tok)
        bits.append(int(tok))
    return tuple(bits)


def _build_app_instance(cfg):
    """Construct the named bundled problem from the flag values."""
    name = cfg.app
    if name == "collatz":
        bits = _parse_bits(cfg.query) if cfg.query else None
        return build_collatz(cfg.n, bits)
    if name == "reach":
        choice, cut = "flat", False
        for tok in (cfg.query or "").split(","):
            tok = tok.strip()
            if not tok:
                continue
            if tok == "cut":
                cut = True
            elif tok in ("flat", "powerset"):
                choice = tok
            else:
                raise InputError(
                    "reach query tokens are 'cut', 'flat', 'powerset'; got %r" % tok
                )
        return build_reach(cfg.n, choice, cut)
    if name == "indent":
        if cfg.word is None:
            raise InputError("the indent application needs --word")
        return build_indent(cfg.word)
    if name == "hfl":
        return build_hfl(cfg.n)
    if name == "worstcase":
        return build_worstcase(cfg.n)
    if name == "strictness":
        parts = [p.strip() for p in (cfg.query or "const1,identity").split(",")]
        if len(parts) != 2:
            raise InputError(
                "strictness query names two functions, e.g. --query const1,identity"
            )
        return build_strictness(parts[0], parts[1])
    raise InputError("unknown application %r (one of %s)" % (name, ", ".join(APP_NAMES)))


def _build_term_instance(cfg):
    """Package a user-supplied term with its lattice and signature."""
    text = _read_term_source(cfg.term)
    lattice = _resolve_lattice(cfg.lattice)
    if cfg.signature:
        sig, var_types = load_signature(cfg.signature, lattice)
    else:
        sig, var_types = _default_signature(), {}
    term = parse_term(text)
    args = []
    if cfg.query:
        for tok in cfg.query.split(","):
            args.append(lattice.element_index(tok.strip()))
    return ProblemInstance(
        name="term",
        lattice=lattice,
        signature=sig,
        term_text=text,
        term=term,
        var_types=var_types,
        args=args,
    )


def _build_instance(cfg):
    if cfg.app is not None:
        return _build_app_instance(cfg)
    if cfg.term is not None:
        return _build_term_instance(cfg)
    raise InputError("nothing to run: pass --term or --app")


def _require_closed(inst):
    """Evaluation needs every name bound; checking does not."""
    unbound = sorted(free_vars(inst.term) - set(inst.signature.types) - set(inst.env))
    if unbound:
        raise InputError(
            "term has free variables (%s); evaluation needs a closed term -- "
            "bind them with a lambda and pass --query values" % ", ".join(unbound)
        )


def cmd_check(cfg):
    """Parse and type-check, print the term's type."""
    inst = _build_instance(cfg)
    ty, _ = typecheck(inst.term, inst.signature.types, inst.var_types)
    print(show_type(ty))
    return 0


def _write_stats(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_eval(cfg):
    """Evaluate in the configured mode and print the result."""
    inst = _build_instance(cfg)
    _require_closed(inst)
    if cfg.mode == "global":
        _, stats = inst.run_global(cap=cfg.max_domain)
    else:
        _, stats = inst.run_local(cap=cfg.max_domain)
    print(stats.result)
    if cfg.stats_out:
        _write_stats(cfg.stats_out, stats.to_json())
    return 0


def _fix_rows(local_stats, global_stats):
    """Pair up per-fixpoint statistics from the two runs by variable name."""
    local = {f.var: f for f in local_stats.fixpoints}
    glob = {f.var: f for f in global_stats.fixpoints} if global_stats else {}
    order = [f.var for f in local_stats.fixpoints]
    order += [v for v in glob if v not in local]
    rows = []
    for var in order:
        l, g = local.get(var), glob.get(var)
        rows.append(
            (
                var,
                str(l.width) if l else "-",
                str(l.height) if l else "-",
                str(g.width) if g else "-",
                str(g.height) if g else "-",
            )
        )
    return rows


def _print_table(rows):
    header = ("fixpoint", "local-width", "local-height", "global-width", "global-height")
    table = [header] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    for row in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())


def cmd_compare(cfg):
    """Run both evaluators, print a comparison report, flag disagreement."""
    inst = _build_instance(cfg)
    _require_closed(inst)
    local_value, local_stats = inst.run_local(cap=cfg.max_domain)
    try:
        global_value, global_stats = inst.run_global(cap=cfg.max_domain)
    except ResourceLimit as exc:
        print("global evaluation skipped: %s" % exc)
        print("result: local=%s" % local_stats.result)
        _print_table(_fix_rows(local_stats, None))
        print("duration_ms: local=%.1f" % local_stats.duration_ms)
        if cfg.stats_out:
            _write_stats(cfg.stats_out, {"agree": None, "local": local_stats.to_json()})
        return 4

    agree = canonical_value(local_value) == canonical_value(global_value)
    print(
        "result: local=%s global=%s agree=%s"
        % (local_stats.result, global_stats.result, "yes" if agree else "NO")
    )
    _print_table(_fix_rows(local_stats, global_stats))
    print(
        "duration_ms: local=%.1f global=%.1f"
        % (local_stats.duration_ms, global_stats.duration_ms)
    )
    if cfg.stats_out:
        _write_stats(
            cfg.stats_out,
            {
                "agree": agree,
                "local": local_stats.to_json(),
                "global": global_stats.to_json(),
            },
        )
    if not agree:
        print("evaluators disagree on %s" % inst.name, file=sys.stderr)
        return 5
    return 0


def _add_common_flags(sub):
    sub.add_argument("--term", help="term file path, or inline term text")
    sub.add_argument("--app", choices=APP_NAMES, help="bundled example problem")
    sub.add_argument("--n", type=int, default=3, help="size parameter for --app")
    sub.add_argument("--word", help="input word for the indent application ('_' for space)")
    sub.add_argument(
        "--query",
        help="application arguments: comma-separated element names for a user "
        "term; bits for collatz; two function names for strictness; "
        "'cut'/'powerset' for reach",
    )
    sub.add_argument(
        "--lattice",
        help="two | bool | flat:<k> | powerset:<names> | JSON spec file "
        "(default: bool); ignored with --app",
    )
    sub.add_argument(
        "--signature", help="JSON signature file for user terms; ignored with --app"
    )
    sub.add_argument(
        "--max-domain",
        type=int,
        default=DEFAULT_DOMAIN_CAP,
        help="largest table domain either evaluator may enumerate",
    )
    sub.add_argument("--stats-out", help="write evaluation statistics JSON here")
    sub.add_argument(
        "--seed", type=int, default=None, help="seed for randomized term generation"
    )


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hofix",
        description="Evaluate higher-order fixpoint terms over finite lattices.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    check = subs.add_parser("check", help="parse and type-check a term")
    _add_common_flags(check)
    ev = subs.add_parser("eval", help="evaluate a term and print the result")
    _add_common_flags(ev)
    ev.add_argument(
        "--mode",
        choices=("local", "global"),
        default="local",
        help="demand-driven (local) or whole-domain (global) evaluation",
    )
    comp = subs.add_parser("compare", help="run both evaluators and compare")
    _add_common_flags(comp)
    return parser


def _config_from_args(args):
    return RunConfig(
        mode=getattr(args, "mode", "local"),
        term=args.term,
        app=args.app,
        n=args.n,
        word=args.word,
        query=args.query,
        lattice=args.lattice,
        signature=args.signature,
        stats_out=args.stats_out,
        max_domain=args.max_domain,
        seed=args.seed,
    )


def main(argv=None):
    args = _build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    handlers = {"check": cmd_check, "eval": cmd_eval, "compare": cmd_compare}
    try:
        return handlers[args.command](cfg)
    except HofixError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
