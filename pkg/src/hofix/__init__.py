"""Higher-order fixpoint evaluation over finite lattices.

The package evaluates terms of a simply-typed lambda calculus with least
and greatest fixpoints, interpreted over a finite lattice.  Two engines
share one semantics: a whole-domain reference evaluator that iterates
every table entry, and a demand-driven evaluator that only touches the
arguments a query actually needs.

Typical use::

    from hofix import boolean, builtin, Signature, parse_term, eval_local

    lat = boolean()
    sig = Signature([builtin("join"), builtin("meet")])
    term = parse_term("mu x. join(x, x)")
    value, stats = eval_local(term, sig, lat)
"""

from .errors import (
    ChainViolation,
    ContractViolation,
    HofixError,
    InputError,
    OracleDisagreement,
    ParseError,
    ResourceLimit,
    TypeError_,
    ValidationError,
)
from .lattice import Lattice, boolean, explicit, flat, from_spec, powerset, two
from .types import BOTH, Fun, GROUND, MINUS, PLUS, is_ground, show_type, spine
from .syntax import App, Fix, Lam, Var, free_vars, parse_term, parse_type, show_term
from .typecheck import typecheck
from .values import (
    ArrayTable,
    DictTable,
    apply_value,
    canonical_value,
    const_table,
    enumerate_domain,
    show_value,
    value_eq,
    value_leq,
)
from .signature import (
    BaseSymbol,
    Signature,
    builtin,
    load_signature,
    table_symbol,
    value_interp,
)
from .evaluator import EvalStats, FixStat, beta_normalize, eval_global, eval_local
from .apps import (
    ProblemInstance,
    build_collatz,
    build_hfl,
    build_indent,
    build_reach,
    build_strictness,
    build_worstcase,
)

__all__ = [
    "HofixError",
    "InputError",
    "ParseError",
    "TypeError_",
    "ValidationError",
    "ResourceLimit",
    "ContractViolation",
    "ChainViolation",
    "OracleDisagreement",
    "Lattice",
    "two",
    "boolean",
    "flat",
    "powerset",
    "explicit",
    "from_spec",
    "Fun",
    "GROUND",
    "PLUS",
    "MINUS",
    "BOTH",
    "is_ground",
    "spine",
    "parse_type",
    "show_type",
    "Var",
    "App",
    "Lam",
    "Fix",
    "parse_term",
    "show_term",
    "free_vars",
    "typecheck",
    "ArrayTable",
    "DictTable",
    "apply_value",
    "canonical_value",
    "const_table",
    "enumerate_domain",
    "show_value",
    "value_eq",
    "value_leq",
    "BaseSymbol",
    "Signature",
    "builtin",
    "table_symbol",
    "value_interp",
    "load_signature",
    "eval_local",
    "eval_global",
    "beta_normalize",
    "EvalStats",
    "FixStat",
    "ProblemInstance",
    "build_collatz",
    "build_reach",
    "build_indent",
    "build_hfl",
    "build_strictness",
    "build_worstcase",
]

__version__ = "0.1.0"
