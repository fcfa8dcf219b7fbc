"""
Weyl quantization module for the TF phase-space toolkit.

This module handles Weyl symbols and their quantization in both pictures:

  - apply_weyl_config / apply_weyl_phase evaluate
        A = (2 pi hbar)^{-1} sum_{z0} a~(z0) T(z0) dx dp
    with a~ the symplectic Fourier transform of the symbol. Sampled symbols
    use the grid quadrature. Polynomial symbols have a~ supported at z0 = 0
    (derivatives of a delta), so the sum reduces to derivatives of
    z0 -> T(z0) at the origin, taken with a finite-difference stencil.
  - tf_operator builds H(x + i hbar d/dp, -i hbar d/dx) by direct
    substitution with Weyl-symmetric ordering of mixed terms.

The two routes are independent, which is what the pipeline-equivalence check
compares.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import GridMismatchError, UnsupportedSymbolError
from .grid import ConfigField, PhaseField, boundary_ratio, derivative_values, symplectic_fourier
from .heisenberg_weyl import hw_config, hw_phase, translate_sum, translate_sum_config
from .symplectic import PhasePoint, SymplecticMatrix

logger = logging.getLogger(__name__)

SYMBOL_DECAY_TOL = 1e-6
STENCIL_STEP = 5e-3
MAX_DEGREE = 2

Monomial = Tuple[int, int]

# 4th-order central stencils, offsets -2..2
_FIRST = {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12}
_SECOND = {-2: -1 / 12, -1: 16 / 12, 0: -30 / 12, 1: 16 / 12, 2: -1 / 12}
_STENCILS = {0: {0: 1.0}, 1: _FIRST, 2: _SECOND}


class SymbolKind(str, Enum):
    CONSTANT = "CONSTANT"
    X = "X"
    P = "P"
    LINEAR = "LINEAR"
    QUADRATIC = "QUADRATIC"
    POLYNOMIAL = "POLYNOMIAL"
    SAMPLED = "SAMPLED"


@dataclass(frozen=True, eq=False)
class WeylSymbol:
    """
    A symbol a(z): either a polynomial of degree <= 2 in (x, p), stored as
    monomial coefficients {(a, b): c} for x^a p^b, or samples on a grid.
    """
    kind: SymbolKind
    coefficients: Dict[Monomial, complex] = field(default_factory=dict)
    samples: Optional[PhaseField] = None

    @classmethod
    def constant(cls, c: complex = 1.0) -> "WeylSymbol":
        return cls(SymbolKind.CONSTANT, {(0, 0): c})

    @classmethod
    def x(cls) -> "WeylSymbol":
        return cls(SymbolKind.X, {(1, 0): 1.0})

    @classmethod
    def p(cls) -> "WeylSymbol":
        return cls(SymbolKind.P, {(0, 1): 1.0})

    @classmethod
    def linear(cls, z0: PhasePoint) -> "WeylSymbol":
        """H_{z0}(z) = sigma(z, z0) = x0 p - p0 x."""
        if z0.n != 1:
            raise UnsupportedSymbolError("linear symbols are n = 1")
        return cls(SymbolKind.LINEAR, {(1, 0): -float(z0.p[0]), (0, 1): float(z0.x[0])})

    @classmethod
    def quadratic(cls, M: np.ndarray) -> "WeylSymbol":
        """1/2 z^T M z = 1/2 (m11 x^2 + 2 m12 x p + m22 p^2)."""
        M = np.asarray(M, dtype=float)
        if M.shape != (2, 2):
            raise UnsupportedSymbolError(f"quadratic symbols need a 2x2 matrix, got {M.shape}")
        m12 = 0.5 * (M[0, 1] + M[1, 0])
        return cls(SymbolKind.QUADRATIC, {(2, 0): 0.5 * M[0, 0], (1, 1): m12, (0, 2): 0.5 * M[1, 1]})

    @classmethod
    def sampled(cls, samples: PhaseField) -> "WeylSymbol":
        return cls(SymbolKind.SAMPLED, samples=samples)

    @property
    def is_analytic(self) -> bool:
        return self.kind != SymbolKind.SAMPLED

    def evaluate(self, z: PhasePoint) -> complex:
        if not self.is_analytic:
            raise UnsupportedSymbolError("pointwise evaluation needs an analytic symbol")
        x, p = float(z.x[0]), float(z.p[0])
        return complex(sum(c * x ** a * p ** b for (a, b), c in self.coefficients.items()))

    def __repr__(self) -> str:
        if self.is_analytic:
            return f"WeylSymbol({self.kind.value}, {self.coefficients})"
        return f"WeylSymbol(SAMPLED, N={self.samples.grid.N})"


def combine(*terms: Tuple[complex, WeylSymbol]) -> WeylSymbol:
    """
    Linear combination sum c_i a_i of symbols of one family.

    All-analytic terms merge coefficients; all-sampled terms must share a grid.
    """
    if all(sym.is_analytic for _, sym in terms):
        merged: Dict[Monomial, complex] = {}
        for c, sym in terms:
            for mono, value in sym.coefficients.items():
                merged[mono] = merged.get(mono, 0.0) + c * value
        return WeylSymbol(SymbolKind.POLYNOMIAL, merged)
    if all(not sym.is_analytic for _, sym in terms):
        first = terms[0][1].samples
        total = np.zeros_like(first.values)
        for c, sym in terms:
            if sym.samples.grid != first.grid:
                raise GridMismatchError("sampled symbols on different grids")
            total = total + c * sym.samples.values
        return WeylSymbol.sampled(first.with_values(total))
    raise UnsupportedSymbolError("cannot mix analytic and sampled symbols")


def compose_symplectic(a: WeylSymbol, S: SymplecticMatrix) -> WeylSymbol:
    """
    Return the analytic symbol z -> a(S^{-1} z).

    Linear parts transform by the row vector times S^{-1}, quadratic parts by
    S^{-T} M S^{-1}; the result stays in the polynomial class.
    """
    if not a.is_analytic:
        raise UnsupportedSymbolError("composition with S is implemented for analytic symbols")
    if S.n != 1:
        raise UnsupportedSymbolError("symbols are n = 1")
    S_inv = S.inverse().entries
    coeffs = a.coefficients
    lin = np.array([coeffs.get((1, 0), 0.0), coeffs.get((0, 1), 0.0)], dtype=complex) @ S_inv
    M = np.array([
        [2 * coeffs.get((2, 0), 0.0), coeffs.get((1, 1), 0.0)],
        [coeffs.get((1, 1), 0.0), 2 * coeffs.get((0, 2), 0.0)],
    ], dtype=complex)
    M = S_inv.T @ M @ S_inv
    out = {
        (0, 0): coeffs.get((0, 0), 0.0),
        (1, 0): lin[0], (0, 1): lin[1],
        (2, 0): 0.5 * M[0, 0], (1, 1): M[0, 1], (0, 2): 0.5 * M[1, 1],
    }
    return WeylSymbol(SymbolKind.POLYNOMIAL, {k: v for k, v in out.items() if v != 0})


def _check_degree(a: WeylSymbol) -> None:
    for (da, db), c in a.coefficients.items():
        if da < 0 or db < 0 or da + db > MAX_DEGREE:
            raise UnsupportedSymbolError(f"monomial x^{da} p^{db} is outside the degree-2 class")


def _sampled_weights(a: WeylSymbol, grid) -> np.ndarray:
    samples = a.samples
    if samples.grid != grid:
        raise GridMismatchError(f"symbol grid {samples.grid} does not match field grid {grid}")
    a_tilde = symplectic_fourier(samples)
    ratio = boundary_ratio(a_tilde.values)
    if ratio >= SYMBOL_DECAY_TOL:
        raise UnsupportedSymbolError(
            f"sampled symbol is not admissible: its Fourier transform reaches {ratio:.2e} of its "
            f"peak at the window edge (limit {SYMBOL_DECAY_TOL:.0e})"
        )
    return a_tilde.values * (grid.cell / (2 * np.pi * grid.hbar))


def _translation_derivatives(a: WeylSymbol, translate: Callable[[float, float], np.ndarray], hbar: float):
    """
    sum over monomials c (-i hbar d/dp0)^a (i hbar d/dx0)^b T(z0)|_{z0=0},
    each partial taken with a 4th-order central stencil on z0 -> T(z0) f.
    """
    h = STENCIL_STEP * np.sqrt(hbar)
    cache: Dict[Tuple[int, int], np.ndarray] = {}

    def at(i: int, j: int) -> np.ndarray:
        if (i, j) not in cache:
            cache[(i, j)] = translate(i * h, j * h)
        return cache[(i, j)]

    total = None
    for (deg_x, deg_p), c in sorted(a.coefficients.items()):
        if c == 0:
            continue
        term = None
        for i, wi in _STENCILS[deg_p].items():
            for j, wj in _STENCILS[deg_x].items():
                contrib = (wi * wj) * at(i, j)
                term = contrib if term is None else term + contrib
        term = term / h ** (deg_x + deg_p)
        term = c * (-1j * hbar) ** deg_x * (1j * hbar) ** deg_p * term
        total = term if total is None else total + term
    return total


def apply_weyl_phase(a: WeylSymbol, field_: PhaseField) -> PhaseField:
    """
    Weyl quantization acting on a phase-space field through the extended T.

    Args:
        a: Analytic (degree <= 2) or sampled symbol
        field_: Phase-space field

    Returns:
        The quantized operator applied to the field
    """
    grid = field_.grid
    if not a.is_analytic:
        return translate_sum(_sampled_weights(a, grid), field_)

    _check_degree(a)
    values = _translation_derivatives(
        a,
        lambda x0, p0: hw_phase(PhasePoint(x0, p0), field_).values,
        grid.hbar,
    )
    if values is None:
        return PhaseField.zeros(grid)
    return field_.with_values(values)


def apply_weyl_config(a: WeylSymbol, psi: ConfigField) -> ConfigField:
    """Weyl quantization acting on a configuration-space wavefunction."""
    grid = psi.grid
    if not a.is_analytic:
        return translate_sum_config(_sampled_weights(a, grid), psi)

    _check_degree(a)
    values = _translation_derivatives(
        a,
        lambda x0, p0: hw_config(PhasePoint(x0, p0), psi).values,
        grid.hbar,
    )
    if values is None:
        return ConfigField.zeros(grid)
    return psi.with_values(values)


class TFOperator:
    """
    The phase-space operator a(X, P) with X = x + i hbar d/dp, P = -i hbar d/dx.

    Derivatives are spectral along each axis; mixed monomials are
    Weyl-symmetrized, x p -> (XP + PX) / 2.
    """

    def __init__(self, symbol: WeylSymbol):
        if not symbol.is_analytic:
            raise UnsupportedSymbolError("tf_operator needs an analytic symbol (X, P, LINEAR, QUADRATIC)")
        _check_degree(symbol)
        self.symbol = symbol
        self.terms = {mono: c for mono, c in symbol.coefficients.items() if c != 0}

    @staticmethod
    def position(values: np.ndarray, grid) -> np.ndarray:
        return grid.x[:, None] * values + 1j * grid.hbar * derivative_values(values, grid, axis=1)

    @staticmethod
    def momentum(values: np.ndarray, grid) -> np.ndarray:
        return -1j * grid.hbar * derivative_values(values, grid, axis=0)

    def apply_values(self, values: np.ndarray, grid) -> np.ndarray:
        X, P = self.position, self.momentum
        out = np.zeros_like(values, dtype=complex)
        xv = X(values, grid) if any(m in self.terms for m in [(1, 0), (2, 0), (1, 1)]) else None
        pv = P(values, grid) if any(m in self.terms for m in [(0, 1), (0, 2), (1, 1)]) else None
        for mono, c in self.terms.items():
            if mono == (0, 0):
                term = values
            elif mono == (1, 0):
                term = xv
            elif mono == (0, 1):
                term = pv
            elif mono == (2, 0):
                term = X(xv, grid)
            elif mono == (0, 2):
                term = P(pv, grid)
            else:
                term = 0.5 * (X(pv, grid) + P(xv, grid))
            out += c * term
        return out

    def __call__(self, field_: PhaseField) -> PhaseField:
        return field_.with_values(self.apply_values(field_.values, field_.grid))


def tf_operator(a: WeylSymbol) -> TFOperator:
    """Return the TF realization of an analytic symbol as a callable operator."""
    return TFOperator(a)
