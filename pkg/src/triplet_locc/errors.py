"""Exception hierarchy shared by every module."""


class LoccError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(LoccError, ValueError):
    """Signatures, lengths or party indices do not fit together."""


class ZeroVectorError(LoccError, ValueError):
    """An amplitude vector is too close to zero to normalize."""


class PreconditionError(LoccError, ValueError):
    """An input violates an operation's precondition (dependence, wrong count, ...)."""


class RankError(PreconditionError):
    """A list of vectors expected to be linearly independent is not."""


class SearchFailure(LoccError, RuntimeError):
    """A randomized witness search exhausted its retries."""


class InternalContradiction(LoccError, RuntimeError):
    """A branch that theory rules out was reached; indicates numerical breakdown."""
