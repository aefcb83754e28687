"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class RadarMIError(Exception):
    """Base class for every error raised by radar_mi."""


class ConfigError(RadarMIError, ValueError):
    """Invalid input, configuration or usage. The CLI exits with status 2."""


class DimensionError(ConfigError):
    """Operands whose shapes do not conform."""


class NumericalError(RadarMIError, ArithmeticError):
    """A computation could not produce a trustworthy number. The CLI exits with status 1."""


class SingularMatrixError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass
