"""Exception hierarchy shared by every module."""


class NucsError(Exception):
    """Base class for all errors raised by this package."""


class DegreeError(NucsError):
    pass


class NotPerfectSquare(NucsError):
    pass


class NoRealK(NucsError):
    pass


class NoPhysicalBranch(NucsError):
    pass


class NoSignChange(NucsError):
    pass


class BranchFlip(NucsError):
    pass


class UnsupportedSigmaShape(NucsError):
    pass


class DomainError(NucsError, ValueError):
    pass


class EnergySignError(NucsError, ValueError):
    pass


class UnsolvableAngular(NucsError, ValueError):
    pass


class GridTooSmall(NucsError):
    pass


class AmbiguousCase(UserWarning):
    """Issued when the Aharonov-Bohm monopole sits exactly at |q| == |m_tilde|."""
