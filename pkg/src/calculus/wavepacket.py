"""
Wavepacket transform module for the TF phase-space toolkit.

This module handles the transform between configuration-space states and
phase-space fields,

    W psi(z) = (2 pi hbar)^{-1/2} exp((i/2hbar) p x) <T(z) phi, psi>,

and its adjoint. The exp((i/2hbar) p x) factor is the one choice that makes
W T(z0) = T(z0) W hold exactly between the standard and extended operator
families: expanding T(z)^{-1} T(z0) with the composition law leaves
exp((i/2hbar)(x p0 - p x0)), and only this prefactor turns the remainder into
the extended phase exp((i/hbar)(p0 x - p0 x0 / 2)).

On the grid, translated windows are exact index rolls and the y-sum is a
centered DFT, so W is an exact discrete isometry and W* W = I.
"""

import numpy as np

from .errors import GridMismatchError
from .grid import ConfigField, PhaseField, coherent_state, l2_norm, p_to_x, x_to_p

WINDOW_NORM_TOL = 1e-10


def default_window(grid) -> ConfigField:
    """Standard Gaussian (pi hbar)^{-1/4} exp(-x^2 / (2 hbar))."""
    return coherent_state(grid)


def _check_window(window: ConfigField, grid) -> None:
    if window.grid != grid:
        raise GridMismatchError(f"window grid {window.grid} does not match {grid}")
    norm = l2_norm(window)
    if abs(norm - 1.0) > WINDOW_NORM_TOL:
        raise ValueError(f"window must be normalized, ||phi|| = {norm:.12f}")


def _shifted_windows(window: ConfigField) -> np.ndarray:
    """Matrix phi(y_j - x_m), rows m, columns j, with periodic wrap."""
    N = window.grid.N
    m = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    return window.values[np.mod(j - m + N // 2, N)]


def wavepacket_forward(psi: ConfigField, window: ConfigField = None) -> PhaseField:
    """
    Transform a configuration-space state into a phase-space field.

    Args:
        psi: Configuration-space state
        window: Normalized window, default standard Gaussian

    Returns:
        W psi sampled at every grid point (x_m, p_l)
    """
    grid = psi.grid
    window = window if window is not None else default_window(grid)
    _check_window(window, grid)

    hbar = grid.hbar
    overlaps = np.conj(_shifted_windows(window)) * psi.values[None, :]
    summed = x_to_p(overlaps, grid, axis=1) * grid.dx
    phase = np.exp(1j / hbar * np.outer(grid.x, grid.p))
    return PhaseField(grid, (2 * np.pi * hbar) ** -0.5 * phase * summed)


def wavepacket_adjoint(field: PhaseField, window: ConfigField = None) -> ConfigField:
    """
    Adjoint of wavepacket_forward for the two Riemann inner products.

    W* Psi(y) = (2 pi hbar)^{-1/2} sum_z exp(-(i/2hbar) p x) Psi(z) (T(z) phi)(y) dx dp
    """
    grid = field.grid
    window = window if window is not None else default_window(grid)
    _check_window(window, grid)

    hbar = grid.hbar
    weighted = np.exp(-1j / hbar * np.outer(grid.x, grid.p)) * field.values
    over_p = p_to_x(weighted, grid, axis=1)
    values = np.sum(_shifted_windows(window) * over_p, axis=0)
    return ConfigField(grid, (2 * np.pi * hbar) ** -0.5 * grid.cell * values)


def isometry_defect(psi: ConfigField, window: ConfigField = None) -> float:
    """| ||W psi|| - ||psi|| |."""
    return abs(l2_norm(wavepacket_forward(psi, window)) - l2_norm(psi))
