"""
Metaplectic operator module for the TF phase-space toolkit.

This module handles metaplectic operators on phase-space fields given by the
integral of T(S z0) T(-z0) over z0. Substituting u = (S - I) z0 gives

    S Psi = c (2 pi hbar)^{-1} |det(S - I)|^{-1/2} int exp((i/2hbar) u^T Q u) T(u) Psi du

with Q = cayley_chirp(S). When det(S - I) vanishes, S is split into two
factors that each admit the integral. The overall unit constant c (the sign
and the fourth root of unity of the integral) is fixed by calibration against
short-step numerical evolution; it is reported as i^nu exp(i delta).

Evaluation. A direct grid sum over u does not resolve the chirp: on the
reference grid the phase of the integrand advances by more than pi per p
step, and the sum aliases. The integral is evaluated instead in the shear
frame, where X = x + i hbar d/dp and P = -i hbar d/dx act on one axis only:

  - transform over p, so that i hbar d/dp becomes multiplication by xi;
  - shear rows, q = x + xi, so that X = q and P = -i hbar d/dq.

Every T(u) acts on q alone in that frame, so the integral is a metaplectic
operator of the q variable. It is applied exactly as a product of chirps
exp((i/2hbar) g q^2), free flights exp(-(i/2hbar) b P^2) and the reflection
q -> -q, each diagonal on the grid or in its Fourier dual. The constant in
front of that product is set from the closed-form value of the integral
between standard Gaussians, so the result equals the integral itself.

Operators are kept factored (matrices, chirps, phases), never as dense
matrices.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy import fft as sfft

from .errors import CalibrationError, SingularCayleyError
from .grid import GridSpec, PhaseField, coherent_state, fft_workers, inner, l2_norm
from .symplectic import (
    QuadraticHamiltonian,
    SPLIT_DET_TOL,
    SymplecticMatrix,
    cayley_chirp,
    flow_matrix,
    split_for_singular,
)

logger = logging.getLogger(__name__)

PRODUCT_TOL = 1e-10
SAMPLE_MIN_NORM = 1e-6
CALIBRATION_TOL = 1e-2
SNAP_TOL = 1e-2
CALIBRATION_DT = 1e-3
RESOLUTION_TOL = 1e-3
SHEAR_MIN = 1e-12
IDENTITY_TOL = 1e-14

Step = Tuple[str, float]


@dataclass(frozen=True, eq=False)
class MetaplecticFactor:
    S: SymplecticMatrix
    Q: np.ndarray
    phase: complex = 1.0

    @classmethod
    def of(cls, S: SymplecticMatrix) -> "MetaplecticFactor":
        return cls(S, cayley_chirp(S))


@dataclass(frozen=True, eq=False)
class MetaplecticOp:
    """
    A metaplectic operator kept as factors in product order:
    S = factors[0].S @ factors[1].S @ ..., applied right to left.
    """
    S: SymplecticMatrix
    factors: Tuple[MetaplecticFactor, ...]
    calibrated: bool = False
    nu: Optional[int] = None
    delta: Optional[float] = None
    residual: Optional[float] = None

    def __post_init__(self):
        product = self.factors[0].S.entries
        for factor in self.factors[1:]:
            product = product @ factor.S.entries
        scale = max(1.0, float(np.max(np.abs(self.S.entries))))
        if np.max(np.abs(product - self.S.entries)) > PRODUCT_TOL * scale:
            raise ValueError("factor product does not reproduce S")
        for factor in self.factors:
            if abs(factor.S.det_minus_identity()) <= SPLIT_DET_TOL:
                raise SingularCayleyError(factor.S.det_minus_identity())
            if abs(abs(factor.phase) - 1.0) > 1e-12:
                raise ValueError(f"factor phase {factor.phase} is not unimodular")

    @property
    def phase(self) -> complex:
        return complex(np.prod([f.phase for f in self.factors]))

    def with_phase(self, phase: complex, **fields) -> "MetaplecticOp":
        """Put the whole constant on the first factor, reset the others."""
        factors = tuple(
            replace(f, phase=phase if i == 0 else 1.0) for i, f in enumerate(self.factors)
        )
        return replace(self, factors=factors, **fields)


# ---------------------------------------------------------------- shear frame

def _column_shifts(grid: GridSpec) -> np.ndarray:
    """Integer m of each p-frequency column; its xi is -m dx."""
    return np.rint(sfft.fftfreq(grid.N) * grid.N).astype(int)


def to_shear_frame(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """
    Map phase-space values to the frame where X = q and P = -i hbar d/dq act on axis 0.

    Column m holds the p-frequency whose i hbar d/dp eigenvalue is xi = -m dx,
    and row i holds q_i = x_i + xi, so frame[i, m] = spectrum[i + m, m].
    """
    N = grid.N
    spectrum = sfft.fft(values, axis=1, workers=fft_workers())
    rows = np.mod(np.arange(N)[:, None] + _column_shifts(grid)[None, :], N)
    return spectrum[rows, np.arange(N)[None, :]]


def from_shear_frame(frame: np.ndarray, grid: GridSpec) -> np.ndarray:
    N = grid.N
    rows = np.mod(np.arange(N)[:, None] - _column_shifts(grid)[None, :], N)
    return sfft.ifft(frame[rows, np.arange(N)[None, :]], axis=1, workers=fft_workers())


def _lower(g: float) -> np.ndarray:
    return np.array([[1.0, 0.0], [g, 1.0]])


def _upper(b: float) -> np.ndarray:
    return np.array([[1.0, b], [0.0, 1.0]])


def _three_shears(M: np.ndarray) -> List[List[Step]]:
    (a, b), (c, d) = M
    candidates = []
    if abs(b) > SHEAR_MIN:
        # M = L((d-1)/b) U(b) L((a-1)/b)
        candidates.append([("chirp", (a - 1) / b), ("free", b), ("chirp", (d - 1) / b)])
    if abs(c) > SHEAR_MIN:
        # M = U((a-1)/c) L(c) U((d-1)/c)
        candidates.append([("free", (d - 1) / c), ("chirp", c), ("free", (a - 1) / c)])
    return candidates


def shear_steps(S: SymplecticMatrix) -> List[Step]:
    """
    Factor a 2 x 2 symplectic S into steps listed in the order they act.

    ('chirp', g) is [[1, 0], [g, 1]], ('free', b) is [[1, b], [0, 1]] and
    ('parity', 0) is -I. Among the admissible factorizations the one with the
    smallest largest parameter is kept, so that no step pushes a localized
    state far across the grid.
    """
    if S.n != 1:
        raise ValueError(f"metaplectic evaluation acts on n = 1 fields, got n = {S.n}")
    M = S.entries
    tail: List[Step] = []
    if np.trace(M) < 0:
        M = -M
        tail = [("parity", 0.0)]
    if np.max(np.abs(M - np.eye(2))) <= IDENTITY_TOL:
        return tail

    best: Optional[List[Step]] = None
    best_cost = np.inf
    prefixes = [(None, 0.0), ("free", 1.0), ("free", -1.0), ("chirp", 1.0), ("chirp", -1.0)]
    for kind, s in prefixes:
        if kind is None:
            target, head = M, []
        else:
            # M = (M P) P^{-1}, and P^{-1} acts first
            P = _upper(s) if kind == "free" else _lower(s)
            target, head = M @ P, [(kind, -s)]
        for candidate in _three_shears(target):
            steps = head + candidate
            cost = max(abs(v) for _, v in steps)
            if cost < best_cost:
                best, best_cost = steps, cost
    if best is None:
        raise ValueError(f"no shear factorization found for {S!r}")
    return best + tail


def apply_steps(steps: List[Step], values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Run shear steps along axis 0 of values, read as the q axis."""
    N, hbar = grid.N, grid.hbar
    shape = (N,) + (1,) * (values.ndim - 1)
    q2 = (grid.x ** 2).reshape(shape)
    k2 = ((hbar * grid.frequencies("x")) ** 2).reshape(shape)
    workers = fft_workers()
    values = np.asarray(values, dtype=complex)
    for kind, param in steps:
        if kind == "parity":
            values = values[np.mod(-np.arange(N), N)]
        elif param == 0.0:
            continue
        elif kind == "chirp":
            values = values * np.exp(0.5j / hbar * param * q2)
        else:
            spectrum = sfft.fft(values, axis=0, workers=workers)
            values = sfft.ifft(spectrum * np.exp(-0.5j / hbar * param * k2), axis=0, workers=workers)
    return values


def mw_ground_amplitude(S: SymplecticMatrix) -> complex:
    """
    <phi0, M phi0> for the unit-constant integral of S and the standard Gaussian phi0.

    With <phi0, T(u) phi0> = exp(-|u|^2 / 4hbar) the integral is Gaussian:
    |det(S - I)|^{-1/2} det(I/2 - i Q)^{-1/2}, the root taken per eigenvalue of
    Q, where every factor has positive real part.
    """
    Q = cayley_chirp(S)
    eig = np.linalg.eigvalsh(0.5 * (Q + Q.T))
    return complex(1.0 / (np.sqrt(abs(S.det_minus_identity())) * np.prod(np.sqrt(0.5 - 1j * eig))))


def integral_constant(S: SymplecticMatrix, steps: List[Step], grid: GridSpec) -> complex:
    """Unit constant turning the shear-step product into the integral of S."""
    phi0 = coherent_state(grid).values
    overlap = complex(np.vdot(phi0, apply_steps(steps, phi0, grid)) * grid.dx)
    constant = mw_ground_amplitude(S) / overlap
    if abs(abs(constant) - 1.0) > RESOLUTION_TOL:
        logger.warning(
            "grid does not resolve S = %s: |constant| = %.6f", np.array2string(S.entries, precision=4), abs(constant)
        )
    return constant


def mw_apply_regular(S: SymplecticMatrix, field: PhaseField, phase: complex = 1.0) -> PhaseField:
    """
    Evaluate the chirp-weighted translation integral for one factor.

    Args:
        S: Symplectic matrix with |det(S - I)| > 1e-6
        field: Phase-space field
        phase: Unit constant in front of the integral

    Returns:
        The metaplectic operator of S (up to its calibrated constant) applied to field
    """
    det = S.det_minus_identity()
    if abs(det) <= SPLIT_DET_TOL:
        raise SingularCayleyError(det)
    grid = field.grid
    steps = shear_steps(S)
    constant = phase * integral_constant(S, steps, grid)
    frame = apply_steps(steps, to_shear_frame(field.values, grid), grid)
    return field.with_values(constant * from_shear_frame(frame, grid))


def build_metaplectic(S: SymplecticMatrix) -> MetaplecticOp:
    """One factor when |det(S - I)| > 1e-6, otherwise the two-factor split."""
    if abs(S.det_minus_identity()) > SPLIT_DET_TOL:
        factors = (MetaplecticFactor.of(S),)
    else:
        S1, S2 = split_for_singular(S)
        factors = (MetaplecticFactor.of(S1), MetaplecticFactor.of(S2))
        logger.debug("S - I singular, using two factors")
    return MetaplecticOp(S=S, factors=factors)


def metaplectic_apply(op: MetaplecticOp, field: PhaseField) -> PhaseField:
    for factor in reversed(op.factors):
        field = mw_apply_regular(factor.S, field, factor.phase)
    return field


def snap_phase(phase: complex) -> Tuple[int, float]:
    """Split a unit phase as i^nu exp(i delta) with delta in (-pi/4, pi/4]."""
    angle = float(np.angle(phase))
    nu = int(np.round(angle / (np.pi / 2)))
    delta = angle - nu * np.pi / 2
    return nu % 4, float(delta)


def fit_phase(candidate: PhaseField, target: PhaseField) -> complex:
    """Unit c minimizing ||c candidate - target||."""
    overlap = inner(candidate, target)
    if abs(overlap) == 0.0:
        raise CalibrationError("candidate and target are orthogonal, no phase can be fitted")
    return overlap / abs(overlap)


def calibrate_phase(
    op: MetaplecticOp,
    H: QuadraticHamiltonian,
    t: float,
    sample: PhaseField,
    tolerance: float = CALIBRATION_TOL,
    dt: float = CALIBRATION_DT,
) -> MetaplecticOp:
    """
    Fix the overall constant of op against numerical evolution of a sample.

    Args:
        op: Operator built for S = flow_matrix(H, t)
        H: Quadratic Hamiltonian generating the flow
        t: Time
        sample: Decaying phase-space field used for the fit
        tolerance: Largest accepted relative L2 mismatch after the fit
        dt: Step of the reference evolution

    Returns:
        A calibrated copy of op with nu, delta and residual recorded

    Raises:
        CalibrationError: sample too small, mismatch above tolerance, or a
            fitted constant more than 1e-2 rad away from every i^nu
    """
    from ..evolution.stepping import evolve_reference

    expected = flow_matrix(H, t).entries
    scale = max(1.0, float(np.max(np.abs(expected))))
    if np.max(np.abs(op.S.entries - expected)) > 1e-8 * scale:
        raise ValueError("op.S is not the flow of H at time t")

    sample_norm = l2_norm(sample)
    if sample_norm < SAMPLE_MIN_NORM:
        raise CalibrationError(f"sample norm {sample_norm:.2e} is below {SAMPLE_MIN_NORM:.0e}")

    reference = sample.with_values(evolve_reference(H, t, sample.values, sample.grid, dt))
    raw = metaplectic_apply(op.with_phase(1.0), sample)
    phase = fit_phase(raw, reference)
    residual = l2_norm(raw * phase - reference) / sample_norm
    if residual > tolerance:
        raise CalibrationError(
            f"metaplectic result differs from numerical evolution by {residual:.2e} (limit {tolerance:.0e})"
        )

    nu, delta = snap_phase(phase)
    if abs(delta) > SNAP_TOL:
        raise CalibrationError(
            f"calibrated constant is {delta:.3e} rad away from i^{nu} (limit {SNAP_TOL:.0e})"
        )
    logger.info("calibrated t=%.6g: nu=%d delta=%.3e residual=%.3e", t, nu, delta, residual)
    snapped = (1j ** nu) * np.exp(1j * delta)
    return op.with_phase(snapped, calibrated=True, nu=nu, delta=delta, residual=residual)


def metaplectic_inverse(op: MetaplecticOp, sample: Optional[PhaseField] = None) -> MetaplecticOp:
    """
    Operator for S^{-1}, factors inverted and reversed.

    With a sample, the constant is fitted so that the inverse undoes op on it;
    the result is then marked calibrated when op is.
    """
    inverse = MetaplecticOp(
        S=op.S.inverse(),
        factors=tuple(MetaplecticFactor.of(f.S.inverse()) for f in reversed(op.factors)),
    )
    if sample is None:
        return inverse
    there = metaplectic_apply(op, sample)
    back = metaplectic_apply(inverse, there)
    phase = fit_phase(back, sample)
    residual = l2_norm(back * phase - sample) / l2_norm(sample)
    nu, delta = snap_phase(phase)
    return inverse.with_phase(phase, calibrated=op.calibrated, nu=nu, delta=delta, residual=residual)
