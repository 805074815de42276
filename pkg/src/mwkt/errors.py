"""Exception types shared across the package."""


class MwktError(Exception):
    """Base class for package errors."""


class Unsupported(MwktError):
    """The operation is mathematically meaningful but outside the supported
    catalog (e.g. factoring a degree-5 polynomial over a function field, or
    deciding equality over a number field with incomplete invariants)."""


class ParseError(MwktError):
    """Malformed descriptor or element literal."""


class TwistMismatch(MwktError):
    """Two values carry different twist labels and cannot be compared or
    combined without an explicit trivialization."""
