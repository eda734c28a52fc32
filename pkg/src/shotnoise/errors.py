"""Exception hierarchy shared by all modules."""


class ShotNoiseError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ShotNoiseError, ValueError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    """A gamma function argument hit a nonpositive integer."""


class OverflowGuardError(ShotNoiseError, OverflowError):
    """Argument beyond the overflow guard; use a log-scaled variant."""


class NonConvergenceError(ShotNoiseError, RuntimeError):
    """An iterative procedure exhausted its iteration budget."""


class CancellationError(ShotNoiseError, ArithmeticError):
    """A series lost too many digits; switch to an asymptotic form."""


class IntegerParameterError(DomainError):
    """Shifted hypergeometric parameters reached a nonpositive integer."""


class ValidityError(DomainError):
    """An asymptotic form was requested below its validity floor."""


class ConfigError(ShotNoiseError, ValueError):
    """Invalid configuration; the message names the offending field."""


class IllConditionedError(ShotNoiseError, ArithmeticError):
    """A linear system is too ill-conditioned to trust."""


class UnsupportedLawError(ShotNoiseError, ValueError):
    """The requested method is not available for this amplitude law."""


class FormulaMismatchError(ShotNoiseError):
    """A candidate closed form disagrees with the Monte-Carlo reference."""
