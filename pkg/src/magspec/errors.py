"""Exception and warning types shared across the package."""


class MagspecError(Exception):
    """Base class for all package errors."""


class NonConvergence(MagspecError):
    """An iterative eigenvalue or eigenvector computation failed to converge."""


class SingularSystem(MagspecError):
    """A bordered resolvent system is numerically singular.

    Signals a (numerically) multiple eigenvalue, which the Sturm-Liouville
    problems solved here cannot have; treated as a hard fault.
    """


class ConsistencyError(MagspecError):
    """Two routes to the same spectral quantity disagree beyond tolerance."""


class BracketError(MagspecError):
    """A root or minimum could not be bracketed by a sign/scan search."""


class PoleError(MagspecError):
    """Special function evaluated at a pole (non-positive integer argument)."""


class DomainError(MagspecError):
    """Argument outside the implemented domain of an operation."""


class NoRootInBracket(MagspecError):
    """The implicit eigenvalue equation has no root in the scanned interval."""


class NoPositiveRoot(MagspecError):
    """A field-strength equation has no positive solution for the given index."""


class WindowExhausted(MagspecError):
    """An angular-momentum scan ended without certifying completeness."""


class GapViolation(MagspecError):
    """Temple's inequality hypothesis (spectral gap above the quasi-mode) fails."""


class FitWindowTooNoisy(MagspecError):
    """A linear fit over the profile window has too large a residual."""


class SchemaError(MagspecError):
    """A CSV/JSON artifact does not conform to the documented schema."""


class TruncationWarning(UserWarning):
    """Eigenfunction mass near the artificial right endpoint exceeds tolerance."""
