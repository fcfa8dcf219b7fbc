"""
Error types for the TF phase-space toolkit.

Every error raised on purpose by the calculus and evolution modules derives
from PhaseSpaceError, and also from the builtin it specializes, so callers can
catch either.
"""


class PhaseSpaceError(Exception):
    """Base class for toolkit errors."""


class DimensionMismatchError(PhaseSpaceError, ValueError):
    """Phase points or matrices of incompatible dimension."""


class GridMismatchError(PhaseSpaceError, ValueError):
    """Fields sampled on different or incompatible grids."""


class NotSymplecticError(PhaseSpaceError, ValueError):
    """A matrix failed the S^T J S = J check."""


class SingularCayleyError(PhaseSpaceError, ValueError):
    """det(S - I) vanishes; the chirp of S is undefined."""

    def __init__(self, det: float):
        super().__init__(
            f"S - I is singular (|det| = {abs(det):.3e}); "
            "factor S with split_for_singular and apply the factors instead"
        )
        self.det = det


class FactorizationError(PhaseSpaceError, RuntimeError):
    """No admissible angle was found on the rotation grid."""


class CalibrationError(PhaseSpaceError, RuntimeError):
    """Metaplectic phase calibration failed."""


class UnsupportedSymbolError(PhaseSpaceError, ValueError):
    """Symbol outside the quantizable classes."""


class DumpFormatError(PhaseSpaceError, ValueError):
    """Malformed TFGRID text."""


class ConfigurationError(PhaseSpaceError, ValueError):
    """Invalid scenario file: unknown key or section, or a value failing validation."""
