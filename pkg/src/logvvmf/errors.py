"""Exception and warning types shared across the package."""


class LogVvmfError(Exception):
    """Base class for all library errors."""


class BackendMismatch(LogVvmfError):
    """Exact and floating matrices were mixed without explicit conversion."""


class SingularMatrix(LogVvmfError):
    """A matrix required to be invertible is singular."""


class DimensionMismatch(LogVvmfError):
    """Operands have incompatible dimensions."""


class DomainError(LogVvmfError):
    """An argument lies outside the mathematical domain (e.g. Im tau <= 0)."""


class RelationViolation(LogVvmfError):
    """Candidate generator images do not satisfy S^4 = I and (ST)^3 = S^2."""


class NonUnitaryEigenvalue(LogVvmfError):
    """An eigenvalue of the T-image deviates from the unit circle."""


class IllConditioned(LogVvmfError):
    """Eigenvalue clustering is ambiguous at the working tolerance."""


class OffsetMismatch(LogVvmfError):
    """q-series with different fractional exponent offsets cannot be added."""


class TruncationUnreliable(LogVvmfError):
    """Truncation tail bounds are too large for the requested computation."""


class NonPolynomialResult(LogVvmfError):
    """A slashed polynomial vector does not clear its denominators."""


class ZeroSum(LogVvmfError):
    """Every layer of a regrouped sum vanishes."""


class InexactInput(LogVvmfError):
    """Classification requires series with the exact (complete) flag set."""


class InconsistentInput(LogVvmfError):
    """Input contradicts constraints that hold for genuine modular forms."""


class UnsupportedWeight(LogVvmfError):
    """No fixture series of the requested weight is available."""


class DegenerateFit(LogVvmfError):
    """Too few usable sample points for a growth fit."""


class TruncationWarning(UserWarning):
    """Emitted when a truncated series is evaluated with a non-negligible tail."""
