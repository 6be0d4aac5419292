"""Exception and warning types shared across the package."""


class RegistryLookupError(KeyError):
    """Requested species, material, constant set or report topic is not registered."""


class BracketingError(ValueError):
    """Root bracket does not contain a sign change."""


class PotentialDomainError(ValueError):
    """Point lies outside the validity domain of the disk-gate potential."""


class SectorCouplingError(RuntimeError):
    """Nonzero matrix element found between different total-projection sectors."""


class TrackingResolutionError(RuntimeError):
    """Eigenvector continuation became ambiguous; the sweep grid is too coarse."""


class ExchangeValidityWarning(UserWarning):
    """Exchange asymptote evaluated below its trusted separation range."""


class StarkValidityWarning(UserWarning):
    """Quadratic Stark formula evaluated beyond its smallness condition."""
