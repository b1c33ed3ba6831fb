"""Error types shared across the package.

Every error carries the process exit code the CLI maps it to:
2 config, 3 I/O, 4 invalid data, 5 degenerate geometry under --strict.
"""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_DEGENERATE = 5


class VolsalError(Exception):
    """Base class for all package errors."""

    exit_code = EXIT_CONFIG


class ConfigError(VolsalError):
    """A parameter violates a precondition; rejected before any compute."""

    exit_code = EXIT_CONFIG


class CubeTooLarge(ConfigError):
    """Window cube side exceeds a volume axis."""


class BadStride(ConfigError):
    """Stride outside [1, floor(cube_side/2)]; breaks the >50% overlap rule."""


class EvenCube(ConfigError):
    """Cube side is even (no center voxel) or below the minimum of 3."""


class BadWindow(ConfigError):
    """Comparison window length is even or below 3."""


class BadSigma(ConfigError):
    """Gaussian sigma is not a positive number."""


class ShapeMismatch(ConfigError):
    """Array shapes disagree with each other or with the window grid."""


class BadSpec(ConfigError):
    """Synthetic volume spec is degenerate (zero normal, blob out of bounds, ...)."""


class IndexOutOfRange(ConfigError):
    """Slice index outside the chosen axis extent."""


class IoFailure(VolsalError):
    """OS-level read/write failure."""

    exit_code = EXIT_IO


class DataError(VolsalError):
    """File content is not a valid volume."""

    exit_code = EXIT_DATA


class BadMagic(DataError):
    """Missing VOLSAL01 magic or unsupported dtype code."""


class DimMismatch(DataError):
    """Payload length disagrees with the header dimensions."""


class NonFiniteSample(DataError):
    """Volume contains NaN or Inf samples."""


class DegenerateAxis(VolsalError):
    """Degenerate comparison geometry, escalated to an error by --strict."""

    exit_code = EXIT_DEGENERATE


class DegenerateAxisWarning(UserWarning):
    """A directional pass had no neighbors (grid extent 1 along the direction)."""
