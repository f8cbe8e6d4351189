"""Exception hierarchy.

Every domain failure raised by the toolkit derives from :class:`SumdiffError`;
the CLI maps those to exit status 1 and argument problems to status 2.
"""


class SumdiffError(Exception):
    """Base class for domain errors."""


class ArithmeticOverflow(SumdiffError, OverflowError):
    """A result left the signed 64-bit range."""


class InvalidArgument(SumdiffError, ValueError):
    pass


class InvalidDilation(InvalidArgument):
    pass


class PreconditionViolation(InvalidArgument):
    pass


class InvalidForm(InvalidArgument):
    pass


class InvalidPolynomial(InvalidArgument):
    pass


class InvalidPolynomialForModulus(InvalidPolynomial):
    """A binomial-basis polynomial without an integer monomial expansion was used mod m."""


class UnsupportedOrder(InvalidArgument):
    pass


class BudgetExceeded(SumdiffError):
    """An enumeration would exceed its declared budget.

    ``bound`` names the limit that was hit, ``needed`` and ``limit`` give the numbers.
    """

    def __init__(self, bound: str, needed: int, limit: int):
        super().__init__(f"{bound}: need {needed}, limit is {limit}")
        self.bound = bound
        self.needed = needed
        self.limit = limit


class CheckpointInvalid(SumdiffError):
    pass


class InternalError(SumdiffError):
    """A self-check failed. Indicates a bug, never a user error."""
