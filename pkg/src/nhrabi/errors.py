"""Exception hierarchy. Every error raised by the package derives from NhrabiError."""


class NhrabiError(Exception):
    pass


class RangeError(NhrabiError, ValueError):
    """Argument outside the supported domain of a kernel."""


class BracketError(NhrabiError, ValueError):
    """Root bracket without a sign change."""


class ConvergenceError(NhrabiError, RuntimeError):
    pass


class ShapeError(NhrabiError, ValueError):
    pass


class IntegrationError(NhrabiError, RuntimeError):
    """ODE step size underflow or step budget exhausted."""


class SamplingError(NhrabiError, ValueError):
    """Non-uniform or too-short sample grid."""


class SeriesError(NhrabiError, RuntimeError):
    pass


class SearchError(NhrabiError, RuntimeError):
    """1-D optimizer found no interior extremum."""


class ConfigError(NhrabiError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
