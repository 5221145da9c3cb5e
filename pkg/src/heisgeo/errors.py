"""Exception hierarchy shared by every heisgeo module."""


class HeisgeoError(Exception):
    """Base class for all errors raised by heisgeo."""


class DomainError(HeisgeoError, ValueError):
    """A function was evaluated outside its domain (1/0, log of a non-positive, ...).

    ``value`` carries the offending argument when it is known.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class EvaluationError(HeisgeoError):
    """An integrand or map produced a non-finite sample."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class ConvergenceError(HeisgeoError):
    """Adaptive quadrature ran out of budget; ``best`` holds the last estimate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InternalError(HeisgeoError):
    """An identity that must hold by construction was violated."""


class BasePointMismatch(HeisgeoError, ValueError):
    """Two frame vectors anchored at different points were combined."""


class NotHorizontallyRegular(HeisgeoError):
    """The contact part of a curve's velocity vanishes somewhere."""


class NotUnitHorizontalSpeed(HeisgeoError):
    """An operation needing horizontal arc-length got another parametrization."""


class NotClosed(HeisgeoError):
    """A curve or surface is not closed where closedness is required."""


class NotClosedProfile(NotClosed):
    """A tube cross-section profile does not close up."""


class NotUnitSpeedProfile(HeisgeoError):
    """A profile with f'^2 + g'^2 != 1 was given where unit speed is required."""


class HypothesisViolated(HeisgeoError):
    """A precondition of a Pappus-type identity failed numerically.

    ``which`` names the failed precondition, ``residual`` its measured size.
    """

    def __init__(self, message, which=None, residual=None):
        super().__init__(message)
        self.which = which
        self.residual = residual


# -- scene language ---------------------------------------------------------


class DslError(HeisgeoError):
    """Base class for scene-language errors. ``line``/``col`` are 1-based."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)
        self.line = line
        self.col = col


class UnknownCharacter(DslError):
    pass


class DslSyntaxError(DslError):
    pass


class UnboundIdentifier(DslError):
    pass


class UnresolvedReference(DslError):
    pass


class SceneDomainError(DslError):
    """Invalid domain or closedness declaration in a scene file."""


class UnknownObject(HeisgeoError):
    """A command named an object the scene does not define, or of the wrong kind."""
