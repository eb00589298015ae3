"""Term syntax: AST, parser, printer, and the rewrites the evaluators rely on.

Concrete grammar:

    term  ::= '\\' params '.' term                 abstraction
            | ('mu' | 'nu') NAME params? '.' term  fixpoint (params sugar a
                                                   leading abstraction in)
            | atom ( '(' term (',' term)* ')' )*   application, left-nested
    atom  ::= NAME | '(' term ')'
    params::= NAME variance (',' NAME variance)*   bare, or in parentheses
    variance ::= '+-' | '+' | '-'

Types are written `o` for the base lattice and `(o+, (o+-) -> o-) -> o` for
functions.  Identifiers are not classified here: a name is a bound variable,
a declared free variable, or a base symbol, decided by scope at type checking
and evaluation time.
"""

from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .types import GROUND, Fun, VARIANCES


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fn: object
    args: tuple


@dataclass(frozen=True)
class Lam:
    params: tuple  # of (name, variance)
    body: object


@dataclass(frozen=True)
class Fix:
    kind: str  # "mu" or "nu"
    name: str
    body: object


# ---------------------------------------------------------------------------
# lexer

_SYMBOLS = ("->", "+-", "+", "-", "(", ")", ",", ".", "\\")


def _lex(text):
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalnum() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            tokens.append(("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError("unexpected character %r" % ch, line, col)
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message):
        kind, value, line, col = self.peek()
        found = "end of input" if kind == "eof" else repr(value)
        raise ParseError("%s, found %s" % (message, found), line, col)

    def expect(self, value):
        kind, got, _, _ = self.peek()
        if kind == "eof" or got != value:
            self.fail("expected %r" % value)
        return self.next()

    def expect_name(self):
        kind, value, _, _ = self.peek()
        if kind != "name" or value in ("mu", "nu"):
            self.fail("expected a name")
        return self.next()[1]

    # -- terms --------------------------------------------------------------

    def term(self):
        kind, value, _, _ = self.peek()
        if kind == "sym" and value == "\\":
            self.next()
            params = self.params()
            self.expect(".")
            return Lam(params, self.term())
        if kind == "name" and value in ("mu", "nu"):
            self.next()
            name = self.expect_name()
            params = ()
            if self.peek()[:2] == ("sym", "("):
                self.next()
                params = self.params()
                self.expect(")")
            self.expect(".")
            body = self.term()
            if params:
                body = Lam(params, body)
            return Fix(value, name, body)
        return self.application()

    def params(self):
        out = [self.param()]
        while self.peek()[:2] == ("sym", ","):
            self.next()
            out.append(self.param())
        return tuple(out)

    def param(self):
        name = self.expect_name()
        kind, value, _, _ = self.peek()
        if kind == "sym" and value in VARIANCES:
            self.next()
            return (name, value)
        self.fail("expected a variance (+, - or +-) after parameter %r" % name)

    def application(self):
        t = self.atom()
        while self.peek()[:2] == ("sym", "("):
            self.next()
            args = [self.term()]
            while self.peek()[:2] == ("sym", ","):
                self.next()
                args.append(self.term())
            self.expect(")")
            t = App(t, tuple(args))
        return t

    def atom(self):
        kind, value, _, _ = self.peek()
        if kind == "name" and value not in ("mu", "nu"):
            self.next()
            return Var(value)
        if kind == "sym" and value == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        self.fail("expected a term")

    # -- types --------------------------------------------------------------

    def type(self):
        kind, value, _, _ = self.peek()
        if kind == "name" and value == "o":
            self.next()
            return GROUND
        if kind == "sym" and value == "(":
            self.next()
            args = [self.type_arg()]
            while self.peek()[:2] == ("sym", ","):
                self.next()
                args.append(self.type_arg())
            self.expect(")")
            self.expect("->")
            return Fun(tuple(args), self.type())
        self.fail("expected a type")

    def type_arg(self):
        ty = self.type()
        kind, value, _, _ = self.peek()
        if kind == "sym" and value in VARIANCES:
            self.next()
            return (ty, value)
        self.fail("expected a variance (+, - or +-) after argument type")


def parse_term(text):
    parser = _Parser(_lex(text))
    t = parser.term()
    if parser.peek()[0] != "eof":
        parser.fail("expected end of input")
    return t


def parse_type(text):
    parser = _Parser(_lex(text))
    ty = parser.type()
    if parser.peek()[0] != "eof":
        parser.fail("expected end of input")
    return ty


# ---------------------------------------------------------------------------
# printing


def show_term(t):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, App):
        fn = show_term(t.fn)
        if isinstance(t.fn, (Lam, Fix)):
            fn = "(%s)" % fn
        return "%s(%s)" % (fn, ", ".join(show_term(a) for a in t.args))
    if isinstance(t, Lam):
        params = ", ".join(name + var for name, var in t.params)
        return "\\%s. %s" % (params, show_term(t.body))
    if isinstance(t, Fix):
        if isinstance(t.body, Lam):
            params = ", ".join(name + var for name, var in t.body.params)
            return "%s %s(%s). %s" % (t.kind, t.name, params, show_term(t.body.body))
        return "%s %s. %s" % (t.kind, t.name, show_term(t.body))
    raise TypeError("not a term: %r" % (t,))


# ---------------------------------------------------------------------------
# names and binding


def free_vars(t):
    """Names with a free occurrence (includes base symbols; scope decides)."""
    out = set()

    def walk(t, bound):
        if isinstance(t, Var):
            if t.name not in bound:
                out.add(t.name)
        elif isinstance(t, App):
            walk(t.fn, bound)
            for a in t.args:
                walk(a, bound)
        elif isinstance(t, Lam):
            inner = bound | {name for name, _ in t.params}
            walk(t.body, inner)
        elif isinstance(t, Fix):
            walk(t.body, bound | {t.name})

    walk(t, frozenset())
    return out


def ensure_well_named(t, reserved=()):
    """Reject reused binder names and binders shadowing `reserved` names.

    With globally distinct binders, a name-to-type map describes every
    binder unambiguously and substitution cannot capture.
    """
    seen = set(reserved)

    def claim(name):
        if name in seen:
            raise ValidationError("binder name %r is reused or shadows" % name)
        seen.add(name)

    def walk(t):
        if isinstance(t, App):
            walk(t.fn)
            for a in t.args:
                walk(a)
        elif isinstance(t, Lam):
            for name, _ in t.params:
                claim(name)
            walk(t.body)
        elif isinstance(t, Fix):
            claim(t.name)
            walk(t.body)

    walk(t)
    return t


def well_name(t, reserved=(), rename_log=None):
    """Rename binders to be globally distinct (fresh `name_2`, `name_3`...).

    When `rename_log` is a dict it records new_name -> original_name for
    every binder, so per-name type declarations can follow the renaming.
    """
    used = set(reserved) | free_vars(t)
    counters = {}

    def fresh(name):
        chosen = name
        if name in used:
            k = counters.get(name, 1)
            while True:
                k += 1
                chosen = "%s_%d" % (name, k)
                if chosen not in used:
                    counters[name] = k
                    break
        used.add(chosen)
        if rename_log is not None:
            rename_log[chosen] = name
        return chosen

    def walk(t, ren):
        if isinstance(t, Var):
            return Var(ren.get(t.name, t.name))
        if isinstance(t, App):
            return App(walk(t.fn, ren), tuple(walk(a, ren) for a in t.args))
        if isinstance(t, Lam):
            new = []
            inner = dict(ren)
            for name, var in t.params:
                nn = fresh(name)
                inner[name] = nn
                new.append((nn, var))
            return Lam(tuple(new), walk(t.body, inner))
        if isinstance(t, Fix):
            nn = fresh(t.name)
            inner = dict(ren)
            inner[t.name] = nn
            return Fix(t.kind, nn, walk(t.body, inner))
        raise TypeError("not a term: %r" % (t,))

    return walk(t, {})


# ---------------------------------------------------------------------------
# beta reduction


def _subst(t, mapping):
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(_subst(t.fn, mapping), tuple(_subst(a, mapping) for a in t.args))
    if isinstance(t, Lam):
        inner = {k: v for k, v in mapping.items() if k not in {n for n, _ in t.params}}
        return Lam(t.params, _subst(t.body, inner))
    if isinstance(t, Fix):
        inner = {k: v for k, v in mapping.items() if k != t.name}
        return Fix(t.kind, t.name, _subst(t.body, inner))
    raise TypeError("not a term: %r" % (t,))


def beta_normalize(t, reserved=(), rename_log=None):
    """Contract every saturated redex (\\x...,y. b)(s...,t).

    Binders are freshened *before* contracting, so naive substitution
    cannot capture a free variable under a like-named binder; they are
    freshened again afterwards because substitution can duplicate
    subterms.  Terms are simply typed, so contraction terminates.
    """
    pre = {}
    t = well_name(t, reserved, pre)

    def norm(t):
        if isinstance(t, Var):
            return t
        if isinstance(t, Lam):
            return Lam(t.params, norm(t.body))
        if isinstance(t, Fix):
            return Fix(t.kind, t.name, norm(t.body))
        fn = norm(t.fn)
        args = tuple(norm(a) for a in t.args)
        if isinstance(fn, Lam) and len(fn.params) == len(args):
            mapping = {name: arg for (name, _), arg in zip(fn.params, args)}
            return norm(_subst(fn.body, mapping))
        return App(fn, args)

    post = {}
    out = well_name(norm(t), reserved, post)
    if rename_log is not None:
        for new, mid in post.items():
            rename_log[new] = pre.get(mid, mid)
    return out
