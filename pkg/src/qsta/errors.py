"""Exception types shared across the toolkit."""


class QstaError(Exception):
    """Base class for all toolkit errors."""


class DegenerateSpectrum(QstaError):
    """The field magnitude f = |(x, y, z)| vanishes; eigenstructure undefined."""


class InvalidDuration(QstaError):
    """Non-positive or otherwise unusable protocol/schedule duration."""


class NonCommensurateDuration(QstaError):
    """Protocol duration is not an integer multiple of the sampling time."""


class SingularControl(QstaError):
    """A solution family divides by a control component that vanishes."""


class AmplitudeOutOfRange(QstaError):
    """A dimensionless pulse amplitude left the hardware range [0, 1]."""


class UnsupportedPhase(QstaError):
    """Pulse carrier phase is not one of the supported quadratures {0, pi/2}."""


class FitDiverged(QstaError):
    """Iterative curve fit failed to reduce the residual."""


class InsufficientData(QstaError):
    """Too few data points for the requested fit or selection."""


class InvalidAmplitude(QstaError):
    """A constant-drive amplitude d outside (0, 1]."""


class SchemaViolation(QstaError):
    """A serialized file does not conform to its schema.

    ``path`` locates the offending element, e.g. ``runs[3].per_repeat_p0``.
    """

    def __init__(self, message, path=""):
        super().__init__(message if not path else f"{path}: {message}")
        self.path = path
