"""Exception hierarchy shared by every module of the package."""


class RuspiniError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMF(RuspiniError, ValueError):
    """A membership function violates one of the normalized-shape invariants.

    ``label`` names the violated invariant (``core``, ``support``, ``symmetry``,
    ``monotonicity``, ``complement``, ``continuity`` or ``evaluation``) and
    ``witness`` is the offending sample point.
    """

    def __init__(self, label, witness=None, detail=""):
        self.label = label
        self.witness = witness
        self.detail = detail
        msg = f"invalid membership function: {label} violated"
        if witness is not None:
            msg += f" at x={witness!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InvalidAxis(RuspiniError, ValueError):
    pass


class DimensionMismatch(RuspiniError, ValueError):
    pass


class IndexOutOfRange(RuspiniError, IndexError):
    pass


class OutOfUniverse(RuspiniError, ValueError):
    pass


class EmptyHistogram(RuspiniError, ValueError):
    pass


class UnsupportedDimension(RuspiniError, ValueError):
    pass


class ConfigError(RuspiniError, ValueError):
    pass


class DSLError(RuspiniError, ValueError):
    """Base for membership-expression parse errors; ``offset`` is a byte offset."""

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} at byte {offset}")


class MFSyntaxError(DSLError):
    def __init__(self, offset, expected, found=""):
        self.expected = frozenset(expected)
        self.found = found
        what = f"unexpected {found}" if found else "syntax error"
        super().__init__(f"{what}; expected one of {sorted(self.expected)}", offset)


class UnknownIdentifier(DSLError):
    def __init__(self, name, offset):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset)
