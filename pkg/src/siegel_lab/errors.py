"""Exception hierarchy shared by every module."""


class SiegelError(Exception):
    """Base class for all library errors."""


class InputError(SiegelError, ValueError):
    """Shapes or values that do not fit the objects they describe."""


class DivergenceError(SiegelError):
    """A defining integral does not converge for the given parameters."""


class NotASubspaceError(SiegelError):
    """The zero set of an indefinite form was requested as a subspace."""


class DomainError(SiegelError):
    """A point lies outside the Siegel domain."""


class ConsistencyError(SiegelError):
    """An identity that must hold exactly was violated beyond tolerance."""


class NumericalError(SiegelError):
    """A finite-difference or branch-tracking step became unreliable."""


class CapabilityError(SiegelError):
    """The requested computation is outside the supported sizes or families."""


class AccuracyError(SiegelError):
    """Two independent numerical routes disagree beyond tolerance."""


class NotMultiplicityFreeError(SiegelError):
    """A construction requires Im Q(W, W) = 0 and it fails."""


class ConfigError(InputError):
    """Configuration validation failure; ``problems`` lists every violation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.problems))


class AccuracyWarning(UserWarning):
    """Quadrature is used outside the region where it is certified."""
