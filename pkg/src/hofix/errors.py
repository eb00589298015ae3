"""Exception hierarchy shared by all hofix modules.

Each error class maps to one CLI exit code, so scripted callers can tell
parse errors from type errors from blown resource caps.
"""


class HofixError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class InputError(HofixError):
    """Malformed user input outside the term language itself (unknown
    element names, bad queries, bad JSON structure)."""

    exit_code = 2


class ParseError(HofixError):
    """Syntax error in a term, type, or signature file."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "line %d, column %d: %s" % (line, column, message)
        super().__init__(message)


class TypeError_(HofixError):
    """Typing-rule violation. Carries the offending subterm rendered back
    to concrete syntax so error messages can point at it."""

    exit_code = 3

    def __init__(self, message, subterm=None):
        self.subterm = subterm
        if subterm is not None:
            message = "%s (in `%s`)" % (message, subterm)
        super().__init__(message)


class ValidationError(HofixError):
    """A lattice or signature failed an internal consistency check
    (antisymmetry, unique bounds, variance of a table, ...)."""

    exit_code = 2


class ResourceLimit(HofixError):
    """A domain enumeration or tabulation would exceed the configured cap."""

    exit_code = 4

    def __init__(self, message, size_bound=None):
        self.size_bound = size_bound
        super().__init__(message)


class ContractViolation(HofixError):
    """An internal precondition was broken (arity mismatch between a value
    spine and an argument list, comparing partial tables pointwise, ...)."""

    exit_code = 1


class ChainViolation(HofixError):
    """A fixpoint cell moved against its chain direction (down during a
    least fixpoint or up during a greatest one). This indicates a
    non-monotone base interpretation slipped past the type system."""

    exit_code = 5


class OracleDisagreement(HofixError):
    """Local and global evaluation disagreed on the same input."""

    exit_code = 5
