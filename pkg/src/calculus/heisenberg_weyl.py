"""
Heisenberg-Weyl module for the TF phase-space toolkit.

This module handles the two translation-operator families:

    configuration space   T(z0) psi(x)    = exp((i/hbar)(p0 x - p0 x0 / 2)) psi(x - x0)
    phase space           T(z0) Psi(x, p) = exp((i/hbar)(p0 x - p0 x0 / 2)) Psi(x - x0, p - p0)

Both obey T(z1) T(z2) = exp((i/2hbar) sigma(z1, z2)) T(z1 + z2). Shifts are
applied with Fourier phase ramps, so off-grid translations stay unitary.

It also provides the grid quadrature sum_u w(u) T(u) used by Weyl
quantization of sampled symbols.
"""

import logging
import os
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from scipy import fft as sfft

from .grid import ConfigField, GridSpec, PhaseField, fft_workers, shift_values
from .symplectic import PhasePoint, symplectic_form

logger = logging.getLogger(__name__)

CHUNK = 16


def n_jobs() -> int:
    """Worker count for quadratures, from TFPS_N_JOBS (default 1)."""
    return max(1, int(os.environ.get("TFPS_N_JOBS", "1")))


def _components(z0: PhasePoint) -> Tuple[float, float]:
    if z0.n != 1:
        raise ValueError(f"grid operators act on n = 1 fields, got n = {z0.n}")
    return float(z0.x[0]), float(z0.p[0])


def _phase(grid: GridSpec, x0: float, p0: float) -> np.ndarray:
    return np.exp(1j / grid.hbar * (p0 * grid.x - 0.5 * p0 * x0))


def hw_config(z0: PhasePoint, psi: ConfigField) -> ConfigField:
    """Apply the standard operator T(z0) to a configuration-space wavefunction."""
    x0, p0 = _components(z0)
    shifted = shift_values(psi.values, psi.grid, x0, axis=0)
    return psi.with_values(_phase(psi.grid, x0, p0) * shifted)


def hw_phase(z0: PhasePoint, field: PhaseField) -> PhaseField:
    """
    Apply the extended operator T(z0) to a phase-space field.

    The field is translated in both variables; the phase depends only on x.
    """
    x0, p0 = _components(z0)
    grid = field.grid
    shifted = shift_values(field.values, grid, x0, axis=0)
    shifted = shift_values(shifted, grid, p0, axis=1)
    return field.with_values(_phase(grid, x0, p0)[:, None] * shifted)


def composition_phase(z1: PhasePoint, z2: PhasePoint, hbar: float) -> complex:
    """exp((i/2hbar) sigma(z1, z2)), the cocycle of T(z1) T(z2)."""
    return complex(np.exp(0.5j / hbar * symplectic_form(z1, z2)))


@dataclass(frozen=True, eq=False)
class HWOperator:
    """T(z0) as a value; calling it applies the family matching the field type."""
    z0: PhasePoint

    def __call__(self, field: Union[PhaseField, ConfigField]) -> Union[PhaseField, ConfigField]:
        if isinstance(field, PhaseField):
            return hw_phase(self.z0, field)
        return hw_config(self.z0, field)

    def inverse(self) -> "HWOperator":
        return hw_inverse(self.z0)

    def compose(self, other: "HWOperator", hbar: float) -> Tuple[complex, "HWOperator"]:
        """Return (c, T(z1 + z2)) with self * other = c T(z1 + z2)."""
        return composition_phase(self.z0, other.z0, hbar), HWOperator(self.z0 + other.z0)


def hw_inverse(z0: PhasePoint) -> HWOperator:
    """T(z0)^{-1} = T(-z0); sigma(-z0, z0) = 0 so no extra phase appears."""
    return HWOperator(-z0)


def _shift_weights(weights: np.ndarray, grid: GridSpec, ks: np.ndarray) -> np.ndarray:
    """
    Fold the -p_k x_j / 2 phase into the weights and reorder j so that row i
    is the weight of the shift by i * dx.
    """
    x, p, hbar = grid.x, grid.p, grid.hbar
    c = weights[:, ks] * np.exp(-0.5j / hbar * np.outer(x, p[ks]))
    return np.roll(c, -grid.N // 2, axis=0)


def _phase_chunk(weights: np.ndarray, spectrum: np.ndarray, grid: GridSpec, ks: np.ndarray) -> np.ndarray:
    N, hbar = grid.N, grid.hbar
    workers = fft_workers()
    c_hat = sfft.fft(_shift_weights(weights, grid, ks), axis=0, workers=workers)
    stack = np.empty((N, ks.size, N), dtype=complex)
    for i, k in enumerate(ks):
        stack[:, i, :] = c_hat[:, i, None] * np.roll(spectrum, k - N // 2, axis=1)
    conv = sfft.ifft(stack, axis=0, workers=workers)
    modulation = np.exp(1j / hbar * np.outer(grid.x, grid.p[ks]))
    return np.einsum("mk,mkl->ml", modulation, conv)


def translate_sum(weights: np.ndarray, field: PhaseField) -> PhaseField:
    """
    Evaluate sum_{j,k} w[j, k] T(u_jk) Psi with u_jk = (x_j, p_k).

    Translations by grid points are exact index rolls, so for each p-offset
    the x-sum is a circular convolution done with FFTs. The p-offsets are
    processed in fixed chunks and the partial sums are added in chunk order,
    so the result does not depend on the worker count.

    Args:
        weights: Complex (N, N) array indexed like the grid
        field: Phase-space field

    Returns:
        The weighted translation sum as a PhaseField
    """
    grid = field.grid
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != field.values.shape:
        raise ValueError(f"weights shape {weights.shape} does not match field {field.values.shape}")

    active = np.flatnonzero(np.any(weights != 0, axis=0))
    if active.size == 0:
        return PhaseField.zeros(grid)

    spectrum = sfft.fft(field.values, axis=0, workers=fft_workers())
    chunks: List[np.ndarray] = [active[i:i + CHUNK] for i in range(0, active.size, CHUNK)]
    partials = Parallel(n_jobs=n_jobs(), prefer="threads")(
        delayed(_phase_chunk)(weights, spectrum, grid, ks) for ks in chunks
    )
    total = np.zeros_like(field.values)
    for part in partials:
        total += part
    return field.with_values(total)


def translate_sum_config(weights: np.ndarray, psi: ConfigField) -> ConfigField:
    """Configuration-space analogue of translate_sum with hw_config."""
    grid = psi.grid
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != (grid.N, grid.N):
        raise ValueError(f"weights shape {weights.shape} does not match grid N={grid.N}")

    workers = fft_workers()
    ks = np.arange(grid.N)
    c_hat = sfft.fft(_shift_weights(weights, grid, ks), axis=0, workers=workers)
    conv = sfft.ifft(c_hat * sfft.fft(psi.values, workers=workers)[:, None], axis=0, workers=workers)
    modulation = np.exp(1j / grid.hbar * np.outer(grid.x, grid.p))
    return psi.with_values(np.sum(modulation * conv, axis=1))
