"""Exception types raised by the hazard engine.

Every error the library raises deliberately derives from :class:`HazardError`
so callers (notably the CLI) can map failures onto exit codes without
catching bare exceptions.
"""


class HazardError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HazardError):
    """A config file is missing, unparseable, or violates its schema."""


class DimensionMismatch(HazardError):
    """A vector or joint array has the wrong length for the robot model."""


class NonFiniteValue(HazardError):
    """An ingested number is NaN or infinite."""


class NonUnitGaze(HazardError):
    """A gaze direction is not a unit vector within tolerance."""


class NonMonotoneTimestamp(HazardError):
    """Frame timestamps are not strictly increasing."""


class EmptyGeometry(HazardError):
    """A distance query was issued with no capsules on one side."""


class ZeroTimeDelta(HazardError):
    """Finite-difference velocity requested across a zero time step."""


class InvalidCalibration(HazardError):
    """Calibration inputs are inconsistent (e.g. d_min >= d_reach)."""


class EmptyScenario(HazardError):
    """A scenario stream contained no frames."""
