"""Exception hierarchy and warning categories for the whole package."""


class LambdaSolitonError(Exception):
    """Base class for all errors raised by this package."""


class ZeroVectorError(LambdaSolitonError):
    """A projector was requested for a (numerically) zero vector."""


class NotAProjectorError(LambdaSolitonError):
    """Matrix handed to involution_from_projector is not a hermitian projector."""


class SingularMatrixError(LambdaSolitonError):
    """3x3 inverse rejected: condition estimate above the configured cap."""


class RegimeMismatchError(LambdaSolitonError):
    """Asymptotic-regime request inconsistent with the soliton type."""


class DegenerateSpectralParamsError(LambdaSolitonError):
    """Two solitons share (nearly) the same duration; superposition is singular."""


class GridTooNarrowError(LambdaSolitonError):
    """Pulse tails do not vanish at the grid edges."""


class NoImprintFoundError(LambdaSolitonError):
    """No ground-state population peak above threshold in the scanned profile."""


class OverlappingImprintsError(LambdaSolitonError):
    """Detected population peaks too close to resolve as separate imprints."""


class NonPhysicalStateError(LambdaSolitonError):
    """Numerical integration produced a density matrix violating conservation."""


class UnsupportedSequenceError(LambdaSolitonError):
    """Pulse sequence outside the closed-form prediction's domain of validity."""


class UnknownPresetError(LambdaSolitonError):
    """Requested figure preset name does not exist."""


class ConfigError(LambdaSolitonError):
    """Scenario configuration failed to parse or validate.

    ``field`` names the offending config entry when known.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class FieldStepWarning(UserWarning):
    """Field changed by more than 10% of its running peak in one spatial step."""
