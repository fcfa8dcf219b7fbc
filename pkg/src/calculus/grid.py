"""
Phase-space grid module for the TF phase-space toolkit.

This module handles the Fourier-compatible discretization of phase space
(n = 1) and of configuration space, complex fields on those grids, inner
products, spectral derivatives and shifts, and the symplectic Fourier
transform.

Field layout is row-major with values[j][k] = Psi(x_j, p_k); the first index
is always the x index.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import fft as sfft

from .errors import GridMismatchError
from .symplectic import PhasePoint

logger = logging.getLogger(__name__)

PERIODIC_TOL = 1e-8
COMPAT_TOL = 1e-9

AXES = {"x": 0, "p": 1}


def fft_workers() -> int:
    """Thread count for scipy.fft, from TFPS_FFT_WORKERS (default 1)."""
    return max(1, int(os.environ.get("TFPS_FFT_WORKERS", "1")))


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform periodic grid with N points per axis.

    Lp is derived as 2 pi hbar N / Lx, which makes the x and p grids
    Fourier duals: dx * dp = 2 pi hbar / N.
    """
    N: int
    Lx: float
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 4 or self.N % 2:
            raise ValueError(f"N must be an even integer >= 4, got {self.N}")
        if not self.Lx > 0:
            raise ValueError(f"Lx must be positive, got {self.Lx}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "Lx", float(self.Lx))
        object.__setattr__(self, "hbar", float(self.hbar))

    @classmethod
    def from_windows(cls, N: int, Lx: float, Lp: float, hbar: float) -> "GridSpec":
        """Build from all four numbers, rejecting an incompatible Lp."""
        if abs(Lx * Lp - 2 * np.pi * hbar * N) > COMPAT_TOL * abs(Lx * Lp):
            raise GridMismatchError(
                f"Lx * Lp = {Lx * Lp:.17g} is not 2 pi hbar N = {2 * np.pi * hbar * N:.17g}"
            )
        return cls(N=N, Lx=Lx, hbar=hbar)

    @property
    def Lp(self) -> float:
        return 2 * np.pi * self.hbar * self.N / self.Lx

    @property
    def dx(self) -> float:
        return self.Lx / self.N

    @property
    def dp(self) -> float:
        return self.Lp / self.N

    @property
    def cell(self) -> float:
        return self.dx * self.dp

    @property
    def x(self) -> np.ndarray:
        return -self.Lx / 2 + self.dx * np.arange(self.N)

    @property
    def p(self) -> np.ndarray:
        return -self.Lp / 2 + self.dp * np.arange(self.N)

    def mesh(self):
        """Return (X, P) arrays of shape (N, N), X varying along axis 0."""
        return np.meshgrid(self.x, self.p, indexing="ij")

    def frequencies(self, axis: str) -> np.ndarray:
        """Angular frequencies conjugate to the x or p axis."""
        spacing = self.dx if AXES[axis] == 0 else self.dp
        return 2 * np.pi * sfft.fftfreq(self.N, d=spacing)

    def centered_index(self, offset: np.ndarray) -> np.ndarray:
        """Index of the grid point (j - m + N/2) mod N, i.e. x_j - x_m wrapped."""
        return np.mod(offset + self.N // 2, self.N)


@dataclass(frozen=True, eq=False)
class PhaseField:
    """Complex field Psi(x_j, p_k) on a GridSpec."""
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.N, self.grid.N):
            raise GridMismatchError(f"values shape {values.shape} does not match N={self.grid.N}")
        if not np.all(np.isfinite(values)):
            raise ValueError("phase field has non-finite entries")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "PhaseField":
        return cls(grid, np.zeros((grid.N, grid.N), dtype=complex))

    def with_values(self, values: np.ndarray) -> "PhaseField":
        return PhaseField(self.grid, values)

    def norm(self) -> float:
        return l2_norm(self)

    def __add__(self, other: "PhaseField") -> "PhaseField":
        _same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "PhaseField") -> "PhaseField":
        _same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> "PhaseField":
        return self.with_values(scalar * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class ConfigField:
    """Complex wavefunction psi(x_j) on the x axis of a GridSpec."""
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.N,):
            raise GridMismatchError(f"values shape {values.shape} does not match N={self.grid.N}")
        if not np.all(np.isfinite(values)):
            raise ValueError("configuration field has non-finite entries")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ConfigField":
        return cls(grid, np.zeros(grid.N, dtype=complex))

    def with_values(self, values: np.ndarray) -> "ConfigField":
        return ConfigField(self.grid, values)

    def norm(self) -> float:
        return l2_norm(self)

    def __add__(self, other: "ConfigField") -> "ConfigField":
        _same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "ConfigField") -> "ConfigField":
        _same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> "ConfigField":
        return self.with_values(scalar * self.values)

    __rmul__ = __mul__


Field = Union[PhaseField, ConfigField]


def _same_grid(a: Field, b: Field) -> None:
    if type(a) is not type(b):
        raise GridMismatchError(f"cannot combine {type(a).__name__} with {type(b).__name__}")
    if a.grid != b.grid:
        raise GridMismatchError(f"grid mismatch: {a.grid} vs {b.grid}")


def _weight(field: Field) -> float:
    return field.grid.cell if isinstance(field, PhaseField) else field.grid.dx


def inner(a: Field, b: Field) -> complex:
    """Riemann-sum inner product <a, b>, conjugate-linear in a."""
    _same_grid(a, b)
    return complex(np.vdot(a.values, b.values) * _weight(a))


def l2_norm(field: Field) -> float:
    return float(np.sqrt(np.sum(np.abs(field.values) ** 2) * _weight(field)))


def _parity(n: int, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = n
    return ((-1.0) ** np.arange(n)).reshape(shape)


def x_to_p(values: np.ndarray, grid: GridSpec, axis: int = -1) -> np.ndarray:
    """
    Exact grid sum  sum_j v_j exp(-i x_j p_l / hbar)  along one axis.

    Because dx * dp = 2 pi hbar / N and both grids start at minus half a
    window, the kernel factors into a DFT between alternating signs.
    """
    values = np.asarray(values, dtype=complex)
    axis = axis % values.ndim
    sign = _parity(grid.N, axis, values.ndim)
    scale = (-1.0) ** (grid.N // 2)
    return scale * sign * sfft.fft(sign * values, axis=axis, workers=fft_workers())


def p_to_x(values: np.ndarray, grid: GridSpec, axis: int = -1) -> np.ndarray:
    """Exact grid sum  sum_k v_k exp(+i p_k x_m / hbar)  along one axis."""
    values = np.asarray(values, dtype=complex)
    axis = axis % values.ndim
    sign = _parity(grid.N, axis, values.ndim)
    scale = (-1.0) ** (grid.N // 2) * grid.N
    return scale * sign * sfft.ifft(sign * values, axis=axis, workers=fft_workers())


def symplectic_fourier(a: PhaseField) -> PhaseField:
    """
    Symplectic Fourier transform on the field's own grid.

    F a(z) = (2 pi hbar)^{-1} sum_{z'} exp(-(i/hbar) sigma(z, z')) a(z') dx dp,
    with sigma(z, z') = x' p - p' x. The x' sum produces the p index of the
    result and the p' sum its x index, hence the final transpose. The map is
    unitary and its own inverse on the grid.
    """
    grid = a.grid
    over_x = x_to_p(a.values, grid, axis=0)
    over_p = p_to_x(over_x, grid, axis=1)
    return PhaseField(grid, over_p.T * (grid.cell / (2 * np.pi * grid.hbar)))


def boundary_ratio(values: np.ndarray, axis: Optional[int] = None) -> float:
    """max |values| on the edge slices divided by max |values| overall."""
    mags = np.abs(values)
    peak = mags.max() if mags.size else 0.0
    if peak == 0.0:
        return 0.0
    axes = range(mags.ndim) if axis is None else [axis]
    edge = max(
        max(np.take(mags, 0, axis=ax).max(), np.take(mags, -1, axis=ax).max())
        for ax in axes
    )
    return float(edge / peak)


def check_periodic(field: Field, context: str, axis: Optional[int] = None) -> bool:
    """Warn when the field does not decay toward the window edges."""
    ratio = boundary_ratio(field.values, axis)
    if ratio >= PERIODIC_TOL:
        logger.warning(
            "%s: boundary amplitude ratio %.2e >= %.0e, periodic spectral result may be inaccurate",
            context, ratio, PERIODIC_TOL,
        )
        return False
    return True


def _spectral(values: np.ndarray, multiplier: np.ndarray, axis: int) -> np.ndarray:
    shape = [1] * values.ndim
    shape[axis] = multiplier.size
    workers = fft_workers()
    transformed = sfft.fft(values, axis=axis, workers=workers)
    return sfft.ifft(transformed * multiplier.reshape(shape), axis=axis, workers=workers)


def derivative_values(values: np.ndarray, grid: GridSpec, axis: int, order: int = 1) -> np.ndarray:
    """Spectral derivative of raw grid values along axis 0 (x) or 1 (p)."""
    k = grid.frequencies("x" if axis == 0 else "p")
    multiplier = (1j * k) ** order
    if order % 2:
        multiplier[grid.N // 2] = 0.0
    return _spectral(values, multiplier, axis)


def shift_values(values: np.ndarray, grid: GridSpec, amount: float, axis: int) -> np.ndarray:
    """Return f(. - amount) along an axis by a Fourier phase ramp."""
    if amount == 0.0:
        return np.array(values, dtype=complex)
    k = grid.frequencies("x" if axis == 0 else "p")
    return _spectral(values, np.exp(-1j * k * amount), axis)


def spectral_derivative(field: PhaseField, axis: str) -> PhaseField:
    """
    Differentiate a phase field along 'x' or 'p' by transform-multiply-inverse.

    Args:
        field: Phase-space field, assumed to decay toward the window edges
        axis: 'x' or 'p'

    Returns:
        The derivative as a new PhaseField
    """
    if axis not in AXES:
        raise ValueError(f"axis must be 'x' or 'p', got {axis!r}")
    check_periodic(field, f"spectral_derivative along {axis}", AXES[axis])
    return field.with_values(derivative_values(field.values, field.grid, AXES[axis]))


def config_derivative(field: ConfigField, order: int = 1) -> ConfigField:
    check_periodic(field, "config_derivative")
    return field.with_values(derivative_values(field.values, field.grid, 0, order))


def gaussian_field(
    grid: GridSpec,
    center: Optional[PhasePoint] = None,
    width: float = 1.0,
) -> PhaseField:
    """
    Normalized phase-space Gaussian (pi s^2)^{-1/2} exp(-|z - z_c|^2 / (2 s^2)).

    The width is measured in units of sqrt(hbar): s^2 = hbar * width^2, so the
    default is (pi hbar)^{-1/2} exp(-|z|^2 / (2 hbar)).
    """
    center = center or PhasePoint.origin()
    s2 = grid.hbar * width ** 2
    X, P = grid.mesh()
    r2 = (X - center.x[0]) ** 2 + (P - center.p[0]) ** 2
    return PhaseField(grid, np.exp(-r2 / (2 * s2)) / np.sqrt(np.pi * s2))


def coherent_state(grid: GridSpec, center: Optional[PhasePoint] = None) -> ConfigField:
    """
    Closed-form T(z_c) phi_0 for the standard Gaussian phi_0.

    psi(x) = (pi hbar)^{-1/4} exp((i/hbar)(p_c x - p_c x_c / 2)) exp(-(x - x_c)^2 / (2 hbar))
    """
    center = center or PhasePoint.origin()
    xc, pc = center.x[0], center.p[0]
    x, hbar = grid.x, grid.hbar
    phase = np.exp(1j / hbar * (pc * x - 0.5 * pc * xc))
    return ConfigField(grid, (np.pi * hbar) ** -0.25 * phase * np.exp(-((x - xc) ** 2) / (2 * hbar)))
