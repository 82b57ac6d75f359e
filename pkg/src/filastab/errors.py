"""Exception hierarchy.

Every error carries a distinct ``exit_code`` so the command line front end
can map failures to process status without string matching.
"""

from __future__ import annotations


class FilamentError(Exception):
    """Base class for all hard errors raised by the package."""

    exit_code = 1


class InvalidInputError(FilamentError, ValueError):
    exit_code = 10


class DegenerateCurveError(FilamentError, ValueError):
    exit_code = 11


class DegenerateNormalError(FilamentError, ValueError):
    """Curvature vanished where a principal normal is required."""

    exit_code = 12

    def __init__(self, index: int, kappa: float, threshold: float):
        self.index = index
        self.kappa = kappa
        self.threshold = threshold
        super().__init__(
            f"curvature {kappa:.3e} below threshold {threshold:.3e} at sample {index}; "
            "supply fallback_normal to continue"
        )


class InvalidConventionError(FilamentError, ValueError):
    exit_code = 13


class InvalidDensityError(FilamentError, ValueError):
    exit_code = 14


class DegenerateAmplitudeError(FilamentError, ValueError):
    exit_code = 15


class NoRootInBracketError(FilamentError, ValueError):
    exit_code = 16


class SweepTooLargeError(FilamentError, ValueError):
    exit_code = 17


class ConfigError(FilamentError, ValueError):
    """Configuration could not be parsed; ``field`` names the offending key."""

    exit_code = 2

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
