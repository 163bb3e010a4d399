class RacgLieError(Exception):
    """Base class for errors raised by racglie."""


class InputError(RacgLieError, ValueError):
    """Malformed or out-of-range input."""


class NotFlagError(InputError):
    """A simplicial complex was given whose faces are not its clique complex."""


class IdentityViolated(RacgLieError, ArithmeticError):
    """Exponent extraction produced a negative multiplicity."""


class ResourceCapExceeded(RacgLieError, RuntimeError):
    """A computation would exceed a configured size bound."""


class InternalInconsistency(RacgLieError, AssertionError):
    """A result guaranteed by theory was not obtained."""
