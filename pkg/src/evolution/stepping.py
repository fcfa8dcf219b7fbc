"""
Time-stepping module for the TF phase-space toolkit.

This module handles the numerical propagators for the phase-space equation
i hbar dPsi/dt = H(X, P) Psi with X = x + i hbar d/dp and P = -i hbar d/dx:

  - SplitStepPropagator: Strang splitting for H = T(p) + V(x). T(P) is
    diagonal after the x-transform (multiplication by T(hbar k)); V(X) is
    diagonal after the p-transform (multiplication by V(x - hbar kappa)).
  - RK4Propagator: classical Runge-Kutta applying the operator directly.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import fft as sfft

from ..calculus.grid import GridSpec, fft_workers
from ..calculus.symplectic import LinearHamiltonian, QuadraticHamiltonian
from ..calculus.weyl import WeylSymbol, tf_operator

logger = logging.getLogger(__name__)

KINETIC_TAGS = ("free", "none")


@dataclass(frozen=True)
class SeparableHamiltonian:
    """
    H(x, p) = T(p) + V(x), both vectorized callables.

    V is evaluated at x - hbar kappa, which ranges over [-Lx, Lx) on the
    grid, so it must be defined on twice the x-window.
    """
    kinetic: Callable[[np.ndarray], np.ndarray]
    potential: Callable[[np.ndarray], np.ndarray]
    label: str = "separable"

    @classmethod
    def from_quadratic(cls, H: QuadraticHamiltonian) -> "SeparableHamiltonian":
        if H.n != 1:
            raise ValueError("grid propagators are n = 1")
        if not H.is_separable:
            raise ValueError("Hamiltonian has an x-p cross term and is not separable")
        m11, m22 = float(H.M[0, 0]), float(H.M[1, 1])
        return cls(lambda eta: 0.5 * m22 * eta ** 2, lambda x: 0.5 * m11 * x ** 2, "quadratic")

    @classmethod
    def from_linear(cls, H: LinearHamiltonian) -> "SeparableHamiltonian":
        x0, p0 = float(H.z0.x[0]), float(H.z0.p[0])
        return cls(lambda eta: x0 * eta, lambda x: -p0 * x, "linear")

    @classmethod
    def from_samples(cls, grid: GridSpec, kinetic_tag: str, potential_samples: np.ndarray) -> "SeparableHamiltonian":
        """
        Build from a kinetic tag ('free' for p^2/2, 'none' for 0) and potential
        samples on the doubled lattice i * dx, i = -N..N-1.
        """
        if kinetic_tag not in KINETIC_TAGS:
            raise ValueError(f"kinetic tag must be one of {KINETIC_TAGS}, got {kinetic_tag!r}")
        samples = np.asarray(potential_samples, dtype=float)
        if samples.shape != (2 * grid.N,):
            raise ValueError(f"potential needs {2 * grid.N} samples on the doubled lattice, got {samples.shape}")

        def potential(x: np.ndarray) -> np.ndarray:
            index = np.rint(x / grid.dx).astype(int) + grid.N
            return samples[np.mod(index, 2 * grid.N)]

        def kinetic(eta: np.ndarray) -> np.ndarray:
            return 0.5 * eta ** 2 if kinetic_tag == "free" else np.zeros_like(eta)

        return cls(kinetic, potential, f"sampled/{kinetic_tag}")

    def __neg__(self) -> "SeparableHamiltonian":
        kinetic, potential = self.kinetic, self.potential
        return SeparableHamiltonian(lambda eta: -kinetic(eta), lambda x: -potential(x), f"-{self.label}")

    def kinetic_multiplier(self, grid: GridSpec) -> np.ndarray:
        """T(hbar k) on x-frequencies, shape (N, 1)."""
        return np.asarray(self.kinetic(grid.hbar * grid.frequencies("x")), dtype=float)[:, None]

    def potential_multiplier(self, grid: GridSpec) -> np.ndarray:
        """V(x - hbar kappa), rows x, columns p-frequencies."""
        xi = grid.hbar * grid.frequencies("p")
        return np.asarray(self.potential(grid.x[:, None] - xi[None, :]), dtype=float)

    def apply(self, values: np.ndarray, grid: GridSpec) -> np.ndarray:
        """H(X, P) applied to raw field values, both terms exactly diagonal."""
        workers = fft_workers()
        kin = sfft.ifft(self.kinetic_multiplier(grid) * sfft.fft(values, axis=0, workers=workers),
                        axis=0, workers=workers)
        pot = sfft.ifft(self.potential_multiplier(grid) * sfft.fft(values, axis=1, workers=workers),
                        axis=1, workers=workers)
        return kin + pot


AnyHamiltonian = Union[LinearHamiltonian, QuadraticHamiltonian, SeparableHamiltonian]


def as_separable(H: AnyHamiltonian) -> SeparableHamiltonian:
    if isinstance(H, SeparableHamiltonian):
        return H
    if isinstance(H, LinearHamiltonian):
        return SeparableHamiltonian.from_linear(H)
    return SeparableHamiltonian.from_quadratic(H)


def is_separable(H: AnyHamiltonian) -> bool:
    return not isinstance(H, QuadraticHamiltonian) or H.is_separable


def hamiltonian_symbol(H: AnyHamiltonian) -> Optional[WeylSymbol]:
    if isinstance(H, LinearHamiltonian):
        return WeylSymbol.linear(H.z0)
    if isinstance(H, QuadraticHamiltonian):
        return WeylSymbol.quadratic(H.M)
    return None


class SplitStepPropagator:
    """
    Strang splitting exp(-i dt V/2) exp(-i dt T) exp(-i dt V/2) with every
    factor a unimodular multiplier in a single-axis spectral basis.
    """

    def __init__(self, grid: GridSpec, hamiltonian: AnyHamiltonian, dt: float):
        self.grid = grid
        self.dt = dt
        H = as_separable(hamiltonian)
        hbar = grid.hbar
        self._exp_kinetic = np.exp(-1j * dt / hbar * H.kinetic_multiplier(grid))
        potential = H.potential_multiplier(grid)
        self._exp_potential_half = np.exp(-0.5j * dt / hbar * potential)
        self._exp_potential = np.exp(-1j * dt / hbar * potential)

    def _kinetic(self, values: np.ndarray) -> np.ndarray:
        w = fft_workers()
        return sfft.ifft(self._exp_kinetic * sfft.fft(values, axis=0, workers=w), axis=0, workers=w)

    def _potential(self, values: np.ndarray, factor: np.ndarray) -> np.ndarray:
        w = fft_workers()
        return sfft.ifft(factor * sfft.fft(values, axis=1, workers=w), axis=1, workers=w)

    def __call__(self, values: np.ndarray) -> np.ndarray:
        """One Strang step."""
        return self.advance(values, 1)

    def advance(self, values: np.ndarray, n_steps: int) -> np.ndarray:
        """n_steps Strang steps with adjacent potential half-steps merged."""
        if n_steps <= 0:
            return np.array(values, dtype=complex)
        values = self._potential(values, self._exp_potential_half)
        for _ in range(n_steps - 1):
            values = self._kinetic(values)
            values = self._potential(values, self._exp_potential)
        values = self._kinetic(values)
        return self._potential(values, self._exp_potential_half)


class RK4Propagator:
    """Classical four-stage Runge-Kutta for dPsi/dt = -(i/hbar) H Psi."""

    def __init__(self, grid: GridSpec, hamiltonian: AnyHamiltonian, dt: float):
        self.grid = grid
        self.dt = dt
        symbol = hamiltonian_symbol(hamiltonian)
        if symbol is not None:
            operator = tf_operator(symbol)
            self._apply = lambda v: operator.apply_values(v, grid)
        else:
            self._apply = lambda v: hamiltonian.apply(v, grid)

    def rhs(self, values: np.ndarray) -> np.ndarray:
        return (-1j / self.grid.hbar) * self._apply(values)

    def __call__(self, values: np.ndarray) -> np.ndarray:
        dt = self.dt
        k1 = self.rhs(values)
        k2 = self.rhs(values + 0.5 * dt * k1)
        k3 = self.rhs(values + 0.5 * dt * k2)
        k4 = self.rhs(values + dt * k3)
        return values + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    def advance(self, values: np.ndarray, n_steps: int) -> np.ndarray:
        for _ in range(n_steps):
            values = self(values)
        return values


def make_propagator(grid: GridSpec, hamiltonian: AnyHamiltonian, dt: float, method: str):
    """
    Build the stepper for a method name ('SPLIT_STEP' or 'RK4').

    Raises:
        ValueError: SPLIT_STEP with a cross-term Hamiltonian, or an unknown method
    """
    method = method.upper()
    if method == "SPLIT_STEP":
        if not is_separable(hamiltonian):
            raise ValueError("SPLIT_STEP needs a separable Hamiltonian T(p) + V(x); use RK4 for cross terms")
        return SplitStepPropagator(grid, hamiltonian, dt)
    if method == "RK4":
        return RK4Propagator(grid, hamiltonian, dt)
    raise ValueError(f"unknown stepping method {method!r}")


def step_count(t: float, dt: float) -> int:
    """Smallest step count whose uniform step does not exceed dt."""
    if t == 0:
        return 0
    return max(1, int(np.ceil(abs(t) / dt - 1e-9)))


def evolve_reference(hamiltonian: AnyHamiltonian, t: float, values: np.ndarray, grid: GridSpec,
                     dt: float = 1e-3) -> np.ndarray:
    """
    Short-step numerical evolution to time t (any sign), SPLIT_STEP when the
    Hamiltonian is separable and RK4 otherwise.
    """
    n = step_count(t, dt)
    if n == 0:
        return np.array(values, dtype=complex)
    H = hamiltonian if t > 0 else -hamiltonian
    method = "SPLIT_STEP" if is_separable(H) else "RK4"
    logger.info("reference evolution: %s, %d steps of %.3e", method, n, abs(t) / n)
    return make_propagator(grid, H, abs(t) / n, method).advance(values, n)
