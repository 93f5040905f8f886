"""Exception types raised by finstoch.

Every error derives from :class:`FinStochError` so callers (notably the CLI)
can map the whole family onto exit codes.
"""


class FinStochError(Exception):
    """Base class for all library errors."""

    exit_code = 8


class ParseError(FinStochError, ValueError):
    """Malformed input: bad JSON, bad rational, invalid space or kernel."""

    exit_code = 3


class SpaceMismatch(FinStochError, ValueError):
    """Two spaces that must coincide do not."""

    exit_code = 4


class NotMeasurable(FinStochError, ValueError):
    """A set or map is not measurable for the relevant sigma-algebra."""


class CopyNeedsPoints(FinStochError, ValueError):
    """Copy was requested on a space whose atoms are not all singletons."""


class NotAProduct(FinStochError, ValueError):
    """A state was expected to live on a product space but does not."""


class NotDeterministic(FinStochError, ValueError):
    """A kernel was required to be zero-one and is not."""


class NotInvariant(FinStochError, ValueError):
    """A state or observable is not invariant under the dynamics."""

    exit_code = 5


class UnsupportedGenerators(FinStochError, ValueError):
    """The generator set is outside what an operation supports."""

    exit_code = 6


class NotDeterministicSystem(FinStochError, ValueError):
    """The dynamical system has a generator that is not zero-one."""

    exit_code = 7


class RowsDisagree(FinStochError, AssertionError):
    """A kernel expected to be constant on quotient atoms is not."""
