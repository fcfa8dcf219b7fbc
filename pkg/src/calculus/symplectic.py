"""
Symplectic algebra module for the TF phase-space toolkit.

This module handles the symplectic form, symplectic matrices and the flows of
linear and quadratic Hamiltonians, together with the chirp form and the
two-factor split that the metaplectic integral needs.

Conventions: phase-space vectors are ordered z = (x, p) and
J = [[0, I], [-I, 0]], so that sigma(z, z') = z'^T J z = x'.p - p'.x.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm

from .errors import (
    DimensionMismatchError,
    FactorizationError,
    NotSymplecticError,
    SingularCayleyError,
)

logger = logging.getLogger(__name__)

SYMPLECTIC_TOL = 1e-10
SYMMETRY_TOL = 1e-12
CAYLEY_DET_TOL = 1e-9
SPLIT_DET_TOL = 1e-6
SPLIT_ANGLES = 64

VectorLike = Union[float, Sequence[float], np.ndarray]


def standard_j(n: int) -> np.ndarray:
    """Return the 2n x 2n matrix J = [[0, I], [-I, 0]]."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """
    A point z = (x, p) of phase space.

    Scalars are accepted for n = 1. Both components are stored as read-only
    float vectors of the same length.
    """
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.array(self.x, dtype=float))
        p = np.atleast_1d(np.array(self.p, dtype=float))
        if x.ndim != 1 or x.shape != p.shape or x.size == 0:
            raise DimensionMismatchError(
                f"x and p must be nonempty vectors of equal length, got {x.shape} and {p.shape}"
            )
        x.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_vector(cls, z: VectorLike) -> "PhasePoint":
        z = np.asarray(z, dtype=float).ravel()
        if z.size == 0 or z.size % 2:
            raise DimensionMismatchError(f"phase vector must have even length, got {z.size}")
        n = z.size // 2
        return cls(z[:n], z[n:])

    @classmethod
    def origin(cls, n: int = 1) -> "PhasePoint":
        return cls(np.zeros(n), np.zeros(n))

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])

    def _check(self, other: "PhasePoint") -> None:
        if other.n != self.n:
            raise DimensionMismatchError(f"dimension {self.n} vs {other.n}")

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        self._check(other)
        return PhasePoint(self.x + other.x, self.p + other.p)

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        self._check(other)
        return PhasePoint(self.x - other.x, self.p - other.p)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(-self.x, -self.p)

    def __mul__(self, scalar: float) -> "PhasePoint":
        return PhasePoint(scalar * self.x, scalar * self.p)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if self.n == 1:
            return f"PhasePoint(x={self.x[0]:.6g}, p={self.p[0]:.6g})"
        return f"PhasePoint(x={self.x.tolist()}, p={self.p.tolist()})"


def _as_vector(z: Union[PhasePoint, VectorLike]) -> np.ndarray:
    if isinstance(z, PhasePoint):
        return z.vector
    return PhasePoint.from_vector(z).vector


def _as_matrix(S: Union["SymplecticMatrix", np.ndarray]) -> np.ndarray:
    if isinstance(S, SymplecticMatrix):
        return S.entries
    return np.asarray(S, dtype=float)


def symplectic_form(z: Union[PhasePoint, VectorLike], zp: Union[PhasePoint, VectorLike]) -> float:
    """
    Evaluate sigma(z, z') = z'^T J z.

    Args:
        z: First phase point
        zp: Second phase point

    Returns:
        x'.p - p'.x
    """
    u = _as_vector(z)
    v = _as_vector(zp)
    if u.size != v.size:
        raise DimensionMismatchError(f"dimension {u.size // 2} vs {v.size // 2}")
    n = u.size // 2
    # sigma(z, z) is exactly zero this way
    return float(np.dot(v[:n], u[n:]) - np.dot(v[n:], u[:n]))


def _check_square_even(S: np.ndarray) -> None:
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] == 0 or S.shape[0] % 2:
        raise DimensionMismatchError(f"expected a square matrix of even size, got shape {S.shape}")


def symplectic_defect(S: Union["SymplecticMatrix", np.ndarray]) -> float:
    """Return max |S^T J S - J|."""
    S = _as_matrix(S)
    _check_square_even(S)
    J = standard_j(S.shape[0] // 2)
    return float(np.max(np.abs(S.T @ J @ S - J)))


def is_symplectic(S: Union["SymplecticMatrix", np.ndarray], tol: float = SYMPLECTIC_TOL) -> bool:
    """True iff max |S^T J S - J| <= tol. Odd or non-square input raises."""
    return symplectic_defect(S) <= tol


class SymplecticMatrix:
    """
    Real 2n x 2n matrix with S^T J S = J, checked on construction.

    The check is relative: max |S^T J S - J| <= tol * max(1, max|S|^2). For
    entries of size at most 1 this is the plain tol = 1e-10; larger entries
    get the bound their roundoff allows, since S^T J S carries products of two
    entries. is_symplectic keeps the plain absolute bound.
    """

    def __init__(self, entries: np.ndarray, tol: float = SYMPLECTIC_TOL):
        entries = np.array(entries, dtype=float)
        _check_square_even(entries)
        scale = max(1.0, float(np.max(np.abs(entries))) ** 2)
        defect = symplectic_defect(entries)
        if defect > tol * scale:
            raise NotSymplecticError(
                f"max |S^T J S - J| = {defect:.3e} exceeds {tol * scale:.3e}"
            )
        entries.setflags(write=False)
        self._entries = entries

    @classmethod
    def identity(cls, n: int = 1) -> "SymplecticMatrix":
        return cls(np.eye(2 * n))

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def n(self) -> int:
        return self._entries.shape[0] // 2

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatchError(f"dimension {self.n} vs {other.n}")
        return SymplecticMatrix(self._entries @ other._entries)

    def apply(self, z: PhasePoint) -> PhasePoint:
        return PhasePoint.from_vector(self._entries @ _as_vector(z))

    def inverse(self) -> "SymplecticMatrix":
        return symplectic_inverse(self)

    def det_minus_identity(self) -> float:
        return float(np.linalg.det(self._entries - np.eye(2 * self.n)))

    def __repr__(self) -> str:
        return f"SymplecticMatrix({np.array2string(self._entries, precision=6)})"


def symplectic_inverse(S: SymplecticMatrix) -> SymplecticMatrix:
    """S^{-1} = -J S^T J, exact for symplectic S."""
    J = standard_j(S.n)
    return SymplecticMatrix(-J @ S.entries.T @ J)


def rotation(theta: float, n: int = 1) -> SymplecticMatrix:
    """Phase-plane rotation R(theta) = exp(theta J)."""
    c, s = np.cos(theta), np.sin(theta)
    eye = np.eye(n)
    return SymplecticMatrix(np.block([[c * eye, s * eye], [-s * eye, c * eye]]))


@dataclass(frozen=True, eq=False)
class QuadraticHamiltonian:
    """
    H(z) = 1/2 z^T M z for a symmetric 2n x 2n matrix M.

    For n = 1, M = [[m11, m12], [m12, m22]] gives
    H = 1/2 (m11 x^2 + 2 m12 x p + m22 p^2).
    """
    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        _check_square_even(M)
        asym = float(np.max(np.abs(M - M.T)))
        if asym > SYMMETRY_TOL:
            raise ValueError(f"M must be symmetric, max |M - M^T| = {asym:.3e}")
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    @classmethod
    def from_coefficients(cls, m11: float, m12: float, m22: float) -> "QuadraticHamiltonian":
        return cls(np.array([[m11, m12], [m12, m22]]))

    @classmethod
    def harmonic(cls, n: int = 1) -> "QuadraticHamiltonian":
        return cls(np.eye(2 * n))

    @classmethod
    def free_particle(cls, n: int = 1) -> "QuadraticHamiltonian":
        return cls(np.block([[np.zeros((n, n)), np.zeros((n, n))], [np.zeros((n, n)), np.eye(n)]]))

    @property
    def n(self) -> int:
        return self.M.shape[0] // 2

    @property
    def is_separable(self) -> bool:
        """True when H has no x-p cross terms, H = T(p) + V(x)."""
        n = self.n
        return not np.any(self.M[:n, n:])

    def __call__(self, z: Union[PhasePoint, VectorLike]) -> float:
        u = _as_vector(z)
        return float(0.5 * u @ self.M @ u)

    def __neg__(self) -> "QuadraticHamiltonian":
        return QuadraticHamiltonian(-self.M)


@dataclass(frozen=True, eq=False)
class LinearHamiltonian:
    """H_{z0}(z) = sigma(z, z0); its flow is the translation z + t z0."""
    z0: PhasePoint

    @property
    def n(self) -> int:
        return self.z0.n

    def __call__(self, z: Union[PhasePoint, VectorLike]) -> float:
        return symplectic_form(z, self.z0)

    def __neg__(self) -> "LinearHamiltonian":
        return LinearHamiltonian(-self.z0)

    def flow(self, z: PhasePoint, t: float) -> PhasePoint:
        return z + t * self.z0


def flow_matrix(H: QuadraticHamiltonian, t: float) -> SymplecticMatrix:
    """
    Compute the time-t flow S_t = exp(t J M) of a quadratic Hamiltonian.

    Args:
        H: Quadratic Hamiltonian
        t: Time (any sign)

    Returns:
        The symplectic matrix S_t
    """
    J = standard_j(H.n)
    return SymplecticMatrix(expm(t * (J @ H.M)))


def cayley_chirp(S: Union[SymplecticMatrix, np.ndarray]) -> np.ndarray:
    """
    Return the symmetric Q with 1/2 u^T Q u = -1/2 sigma(S (S-I)^{-1} u, (S-I)^{-1} u).

    This is the phase of T(S z0) T(-z0) after substituting u = (S - I) z0.

    Raises:
        SingularCayleyError: if |det(S - I)| <= 1e-9
    """
    S = _as_matrix(S)
    _check_square_even(S)
    shifted = S - np.eye(S.shape[0])
    det = float(np.linalg.det(shifted))
    if abs(det) <= CAYLEY_DET_TOL:
        raise SingularCayleyError(det)
    A = np.linalg.inv(shifted)
    B = A.T @ standard_j(S.shape[0] // 2) @ S @ A
    return -0.5 * (B + B.T)


def split_angles() -> np.ndarray:
    """Midpoints of 64 equal arcs of (0, 2 pi)."""
    return np.pi * (2 * np.arange(SPLIT_ANGLES) + 1) / SPLIT_ANGLES


def split_for_singular(S: SymplecticMatrix) -> Tuple[SymplecticMatrix, SymplecticMatrix]:
    """
    Factor S = S1 S2 with S2 = R(theta) and both |det(S_i - I)| > 1e-6.

    theta maximizes min(|det(S R(theta)^{-1} - I)|, |det(R(theta) - I)|) over
    split_angles(), so the result is deterministic.

    Args:
        S: Any symplectic matrix

    Returns:
        Tuple (S1, S2)
    """
    eye = np.eye(2 * S.n)
    best_score, best_theta = -1.0, None
    for theta in split_angles():
        R = rotation(theta, S.n)
        S1 = S.entries @ R.inverse().entries
        score = min(abs(np.linalg.det(S1 - eye)), abs(np.linalg.det(R.entries - eye)))
        if score > best_score:
            best_score, best_theta = score, theta

    if best_score <= SPLIT_DET_TOL:
        raise FactorizationError(
            f"angle grid of {SPLIT_ANGLES} points exhausted, best min |det| = {best_score:.3e}"
        )

    R = rotation(best_theta, S.n)
    logger.debug("split at theta=%.6f, min |det(S_i - I)| = %.4f", best_theta, best_score)
    return SymplecticMatrix(S.entries @ R.inverse().entries), R
