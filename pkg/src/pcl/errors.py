"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`PclError`,
and the CLI maps each subclass to one exit code.
"""


class PclError(Exception):
    """Base class for library errors."""


class DomainError(PclError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class PreconditionError(PclError, ValueError):
    """A caller-side requirement is unmet (e.g. a sieve table that is too small)."""


class HypothesisError(PclError, ValueError):
    """The input violates a theorem hypothesis the operation depends on."""


class ResourceError(PclError, RuntimeError):
    """An enumeration bound or memory budget would be exceeded."""


class ArithmeticOverflow(PclError, ArithmeticError):
    """A result does not fit the signed 64-bit budget."""


class FormatError(PclError, ValueError):
    """A dump or checkpoint file is corrupt or has the wrong version."""


class IntegrityError(PclError, RuntimeError):
    """Two routes that must agree exactly did not; indicates a bug, not bad input."""
