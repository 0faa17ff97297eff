"""Exception hierarchy shared by every module."""


class BarbilianError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(BarbilianError, ValueError):
    """An input violates an operation's precondition (bad point, radius, slope...)."""


class ConfigurationError(PreconditionError):
    """A closed form was asked for outside the region where its geometric assumptions hold."""


class ConvergenceError(BarbilianError, RuntimeError):
    """An iterative refinement did not reach its tolerance."""
