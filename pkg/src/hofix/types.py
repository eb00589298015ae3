"""Type expressions over a single base lattice type.

A type is either the ground type `o` (the lattice itself) or a function
type with variance-annotated arguments, written `(o+, o-) -> o`.  The
variance marks how the function may depend on that argument: `+` monotone,
`-` antitone, `+-` arbitrary.
"""

from dataclasses import dataclass

PLUS = "+"
MINUS = "-"
BOTH = "+-"
VARIANCES = (PLUS, MINUS, BOTH)


class _GroundType:
    """The base lattice type; a single shared instance is enough."""

    __slots__ = ()

    def __repr__(self):
        return "o"

    def __eq__(self, other):
        return isinstance(other, _GroundType)

    def __hash__(self):
        return hash("_GroundType")


GROUND = _GroundType()


@dataclass(frozen=True)
class Fun:
    """Function type: args is a tuple of (type, variance) pairs."""

    args: tuple
    res: object

    def __post_init__(self):
        for _, v in self.args:
            if v not in VARIANCES:
                raise ValueError("bad variance %r" % (v,))

    def __repr__(self):
        return show_type(self)


def is_ground(ty):
    return isinstance(ty, _GroundType)


def show_type(ty):
    if is_ground(ty):
        return "o"
    parts = []
    for t, v in ty.args:
        # `o+` binds tight; a function argument reads `(o+) -> o +-`, with
        # the variance after the result (a variance can never start a type,
        # so the notation parses back unambiguously)
        sep = "" if is_ground(t) else " "
        parts.append(show_type(t) + sep + v)
    return "(%s) -> %s" % (", ".join(parts), show_type(ty.res))


def spine(ty):
    """Flatten nested result arrows into one argument list.

    `(a) -> (b) -> o` and `(a, b) -> o` describe tables over the same keys;
    the spine is that shared key shape, ending at the ground result.
    """
    coords = []
    while isinstance(ty, Fun):
        coords.extend(ty.args)
        ty = ty.res
    assert is_ground(ty)
    return coords


def order_of(ty):
    """Type order: 0 for ground, 1 + max over argument orders otherwise."""
    if is_ground(ty):
        return 0
    return 1 + max((order_of(t) for t, _ in spine(ty)), default=0)
