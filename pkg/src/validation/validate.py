"""
Invariant verification module for the TF phase-space toolkit.

This module handles running the numerical invariant suites on a grid and
collecting one result dict per check:

    {'check': name, 'error': measured, 'tolerance': limit, 'passed': bool}

Suites: group-law, quantization, covariance, fourier, wavepacket, evolution,
and all.
"""

import logging
import time
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..calculus.errors import PhaseSpaceError
from ..calculus.grid import (
    GridSpec,
    PhaseField,
    coherent_state,
    gaussian_field,
    inner,
    l2_norm,
    symplectic_fourier,
)
from ..calculus.heisenberg_weyl import composition_phase, hw_config, hw_phase
from ..calculus.metaplectic import build_metaplectic, metaplectic_apply
from ..calculus.symplectic import (
    LinearHamiltonian,
    PhasePoint,
    QuadraticHamiltonian,
    SymplecticMatrix,
    cayley_chirp,
    flow_matrix,
    rotation,
    split_for_singular,
    symplectic_defect,
    symplectic_form,
)
from ..calculus.wavepacket import isometry_defect, wavepacket_adjoint, wavepacket_forward
from ..calculus.weyl import WeylSymbol, apply_weyl_config, apply_weyl_phase, compose_symplectic, tf_operator
from ..evolution.propagate import (
    EvolutionPlan,
    Method,
    evolve_linear_exact,
    evolve_numeric,
    evolve_time_reversal,
    generator_linear,
    harmonic_config_solution,
    norm_drift,
    quadratic_propagator,
)
from ..evolution.stepping import step_count
from .metrics import convergence_order, error_ratio, max_relative_error, relative_error

logger = logging.getLogger(__name__)

SUITES = ("group-law", "quantization", "covariance", "fourier", "wavepacket", "evolution")
DEFAULT_SEED = 2024

Result = Dict[str, Any]


def _result(check: str, error: float, tolerance: float, **details) -> Result:
    error = float(error)
    result = {
        'check': check,
        'error': error,
        'tolerance': float(tolerance),
        'passed': bool(np.isfinite(error) and error <= tolerance),
    }
    result.update(details)
    return result


def _random_point(rng: np.random.Generator, radius: float) -> PhasePoint:
    x0, p0 = rng.uniform(-radius, radius, size=2)
    return PhasePoint(x0, p0)


def _random_field(grid: GridSpec, rng: np.random.Generator) -> PhaseField:
    shape = (grid.N, grid.N)
    return PhaseField(grid, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _shear() -> SymplecticMatrix:
    return SymplecticMatrix(np.array([[1.0, 1.0], [0.0, 1.0]]))


# ---------------------------------------------------------------- group law

def check_flow_symplectic(grid: GridSpec, rng: np.random.Generator, trials: int = 20) -> Result:
    """Largest ||S^T J S - J|| over flows of random quadratic Hamiltonians."""
    worst = 0.0
    for _ in range(trials):
        m11, m12, m22 = rng.standard_normal(3)
        S = flow_matrix(QuadraticHamiltonian.from_coefficients(m11, m12, m22), rng.uniform(-1, 1))
        scale = max(1.0, float(np.max(np.abs(S.entries))) ** 2)
        worst = max(worst, symplectic_defect(S) / scale)
    return _result("flow is symplectic", worst, 1e-9)


def check_flow_group_law(grid: GridSpec, rng: np.random.Generator, trials: int = 20) -> Result:
    """S_{t+s} = S_t S_s for random quadratic Hamiltonians."""
    worst = 0.0
    for _ in range(trials):
        H = QuadraticHamiltonian.from_coefficients(*rng.standard_normal(3))
        t, s = rng.uniform(-1, 1, size=2)
        lhs = flow_matrix(H, t + s).entries
        rhs = (flow_matrix(H, t) @ flow_matrix(H, s)).entries
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(lhs)))))
    return _result("flow group law", worst, 1e-9)


def check_cayley_rotation(grid: GridSpec, rng: np.random.Generator) -> Result:
    worst = 0.0
    for t in (0.3, 1.0, 2.0, 3.0):
        Q = cayley_chirp(rotation(t))
        worst = max(worst, float(np.max(np.abs(Q - 0.5 / np.tan(t / 2) * np.eye(2)))))
    return _result("chirp of a rotation", worst, 1e-10)


def check_singular_split(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Both factors regular and their product reproduces S, for singular S."""
    worst = 0.0
    for S in (_shear(), SymplecticMatrix(-np.eye(2)), SymplecticMatrix.identity()):
        S1, S2 = split_for_singular(S)
        if min(abs(S1.det_minus_identity()), abs(S2.det_minus_identity())) <= 1e-6:
            return _result("singular split", float("inf"), 1e-10)
        worst = max(worst, float(np.max(np.abs((S1 @ S2).entries - S.entries))))
    return _result("singular split", worst, 1e-10)


def check_hw_composition(grid: GridSpec, rng: np.random.Generator, pairs: int = 50) -> Result:
    """T(z1) T(z2) = exp((i/2hbar) sigma(z1, z2)) T(z1 + z2) on both families."""
    field = gaussian_field(grid)
    psi = coherent_state(grid)
    worst = 0.0
    for _ in range(pairs):
        z1, z2 = _random_point(rng, 1.0), _random_point(rng, 1.0)
        c = composition_phase(z1, z2, grid.hbar)
        lhs = hw_phase(z1, hw_phase(z2, field))
        worst = max(worst, relative_error(lhs, hw_phase(z1 + z2, field) * c))
        lhs_config = hw_config(z1, hw_config(z2, psi))
        worst = max(worst, relative_error(lhs_config, hw_config(z1 + z2, psi) * c))
    return _result("translation composition law", worst, 1e-10, pairs=pairs)


def check_hw_commutator(grid: GridSpec, rng: np.random.Generator, pairs: int = 20) -> Result:
    """T(z1) T(z2) = exp((i/hbar) sigma(z1, z2)) T(z2) T(z1)."""
    field = gaussian_field(grid)
    worst = 0.0
    for _ in range(pairs):
        z1, z2 = _random_point(rng, 1.0), _random_point(rng, 1.0)
        c = np.exp(1j / grid.hbar * symplectic_form(z1, z2))
        lhs = hw_phase(z1, hw_phase(z2, field))
        rhs = hw_phase(z2, hw_phase(z1, field)) * c
        worst = max(worst, relative_error(lhs, rhs))
    return _result("translation commutator phase", worst, 1e-10)


def check_hw_unitary(grid: GridSpec, rng: np.random.Generator, trials: int = 20) -> Result:
    field = _random_field(grid, rng)
    base = l2_norm(field)
    worst = max(abs(l2_norm(hw_phase(_random_point(rng, 3.0), field)) / base - 1.0) for _ in range(trials))
    return _result("translation unitarity", worst, 1e-12)


# ---------------------------------------------------------------- quantization

def check_position_rule(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Op(x) acts as x + i hbar d/dp."""
    field = gaussian_field(grid, PhasePoint(0.5, -0.5))
    quantized = apply_weyl_phase(WeylSymbol.x(), field)
    direct = tf_operator(WeylSymbol.x())(field)
    return _result("quantization of x", relative_error(quantized, direct, field), 1e-5)


def check_momentum_rule(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Op(p) acts as -i hbar d/dx."""
    field = gaussian_field(grid, PhasePoint(0.5, -0.5))
    quantized = apply_weyl_phase(WeylSymbol.p(), field)
    direct = tf_operator(WeylSymbol.p())(field)
    return _result("quantization of p", relative_error(quantized, direct, field), 1e-5)


def check_quadratic_rules(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Quadrature and substitution agree for x^2, p^2, xp and the oscillator."""
    field = gaussian_field(grid, PhasePoint(-0.3, 0.4))
    symbols = {
        'x^2': WeylSymbol.quadratic(np.array([[2.0, 0.0], [0.0, 0.0]])),
        'p^2': WeylSymbol.quadratic(np.array([[0.0, 0.0], [0.0, 2.0]])),
        'xp': WeylSymbol.quadratic(np.array([[0.0, 1.0], [1.0, 0.0]])),
        'oscillator': WeylSymbol.quadratic(np.eye(2)),
    }
    errors = {
        name: relative_error(apply_weyl_phase(a, field), tf_operator(a)(field), field)
        for name, a in symbols.items()
    }
    return _result("quantization of quadratics", max(errors.values()), 1e-5, per_symbol=errors)


def check_canonical_commutator(grid: GridSpec, rng: np.random.Generator) -> Result:
    """[X, P] = i hbar."""
    field = gaussian_field(grid, PhasePoint(0.2, 0.1))
    X, P = tf_operator(WeylSymbol.x()), tf_operator(WeylSymbol.p())
    commutator = X(P(field)) - P(X(field))
    return _result("canonical commutator", relative_error(commutator, field * (1j * grid.hbar)), 1e-10)


def check_real_symbol_symmetric(grid: GridSpec, rng: np.random.Generator) -> Result:
    """<Psi, A Phi> = <A Psi, Phi> for the real oscillator symbol."""
    A = tf_operator(WeylSymbol.quadratic(np.eye(2)))
    psi = gaussian_field(grid, PhasePoint(1.0, -0.5))
    phi = gaussian_field(grid, PhasePoint(-0.5, 0.8), width=1.3)
    defect = abs(inner(psi, A(phi)) - inner(A(psi), phi)) / (l2_norm(psi) * l2_norm(phi))
    return _result("real symbol is symmetric", defect, 1e-8)


def check_sampled_gaussian_symbol(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Op(exp(-|z|^2 / hbar)) maps the ground state to half of itself."""
    X, P = grid.mesh()
    symbol = WeylSymbol.sampled(PhaseField(grid, np.exp(-(X ** 2 + P ** 2) / grid.hbar).astype(complex)))
    ground = coherent_state(grid)
    result = apply_weyl_config(symbol, ground)
    return _result("sampled Gaussian symbol", relative_error(result, ground * 0.5), 1e-6)


# ---------------------------------------------------------------- covariance

def _covariance_matrices() -> Dict[str, SymplecticMatrix]:
    return {'rotation': rotation(1.0), 'shear': _shear()}


def check_conjugation(grid: GridSpec, rng: np.random.Generator, trials: int = 20) -> Result:
    """S T(z0) Psi = T(S z0) S Psi, including the two-factor shear."""
    field = gaussian_field(grid)
    worst = 0.0
    for name, S in _covariance_matrices().items():
        op = build_metaplectic(S)
        image = metaplectic_apply(op, field)
        for _ in range(trials):
            z0 = _random_point(rng, 2.0)
            lhs = metaplectic_apply(op, hw_phase(z0, field))
            rhs = hw_phase(S.apply(z0), image)
            worst = max(worst, relative_error(lhs, rhs, field))
        logger.info("conjugation with %s done (%d factors)", name, len(op.factors))
    return _result("metaplectic conjugation", worst, 1e-3, trials=trials)


def check_symbol_covariance(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Op(a o S^{-1}) S Psi = S Op(a) Psi for a in {x, p}."""
    field = gaussian_field(grid, PhasePoint(0.3, -0.2))
    worst = 0.0
    for S in _covariance_matrices().values():
        op = build_metaplectic(S)
        image = metaplectic_apply(op, field)
        for a in (WeylSymbol.x(), WeylSymbol.p()):
            lhs = apply_weyl_phase(compose_symplectic(a, S), image)
            rhs = metaplectic_apply(op, apply_weyl_phase(a, field))
            worst = max(worst, relative_error(lhs, rhs, field))
    return _result("symbol covariance", worst, 1e-3)


def check_metaplectic_unitary(grid: GridSpec, rng: np.random.Generator) -> Result:
    field = gaussian_field(grid, PhasePoint(0.5, 0.5))
    op = build_metaplectic(rotation(1.0))
    return _result("metaplectic norm defect", abs(l2_norm(metaplectic_apply(op, field)) / l2_norm(field) - 1.0), 1e-3)


# ---------------------------------------------------------------- fourier

def check_fourier_involution(grid: GridSpec, rng: np.random.Generator) -> Result:
    a = _random_field(grid, rng)
    return _result("Fourier involution", relative_error(symplectic_fourier(symplectic_fourier(a)), a), 1e-10)


def check_fourier_parseval(grid: GridSpec, rng: np.random.Generator) -> Result:
    a = _random_field(grid, rng)
    return _result("Fourier Parseval", abs(l2_norm(symplectic_fourier(a)) / l2_norm(a) - 1.0), 1e-10)


def check_fourier_linearity(grid: GridSpec, rng: np.random.Generator) -> Result:
    a, b = _random_field(grid, rng), _random_field(grid, rng)
    alpha, beta = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    lhs = symplectic_fourier(a * alpha + b * beta)
    rhs = symplectic_fourier(a) * alpha + symplectic_fourier(b) * beta
    return _result("Fourier linearity", relative_error(lhs, rhs), 1e-10)


def check_fourier_gaussian(grid: GridSpec, rng: np.random.Generator) -> Result:
    """The standard Gaussian is a fixed point."""
    g = gaussian_field(grid)
    return _result("Fourier Gaussian fixed point", max_relative_error(symplectic_fourier(g), g), 1e-8)


# ---------------------------------------------------------------- wavepacket

def check_wavepacket_isometry(grid: GridSpec, rng: np.random.Generator) -> Result:
    psi = coherent_state(grid, PhasePoint(1.0, -0.5))
    return _result("wavepacket isometry", isometry_defect(psi) / l2_norm(psi), 1e-6)


def check_wavepacket_round_trip(grid: GridSpec, rng: np.random.Generator) -> Result:
    psi = coherent_state(grid, PhasePoint(-0.7, 1.2))
    back = wavepacket_adjoint(wavepacket_forward(psi))
    return _result("wavepacket round trip", relative_error(back, psi), 1e-6)


def check_wavepacket_adjoint(grid: GridSpec, rng: np.random.Generator) -> Result:
    psi = coherent_state(grid, PhasePoint(0.4, 0.3))
    field = gaussian_field(grid, PhasePoint(1.0, 1.0))
    defect = abs(inner(wavepacket_forward(psi), field) - inner(psi, wavepacket_adjoint(field)))
    return _result("wavepacket adjointness", defect / (l2_norm(psi) * l2_norm(field)), 1e-8)


def check_translation_intertwining(grid: GridSpec, rng: np.random.Generator, trials: int = 20) -> Result:
    """W T(z0) psi = T(z0) W psi, standard family on the left, extended on the right."""
    psi = coherent_state(grid, PhasePoint(0.2, -0.3))
    image = wavepacket_forward(psi)
    worst = 0.0
    for _ in range(trials):
        z0 = _random_point(rng, 1.5)
        lhs = wavepacket_forward(hw_config(z0, psi))
        worst = max(worst, relative_error(lhs, hw_phase(z0, image), image))
    return _result("translation intertwining", worst, 1e-6, trials=trials)


def check_metaplectic_intertwining(grid: GridSpec, rng: np.random.Generator, t: float = 1.0) -> Result:
    """W of the oscillator solution equals the calibrated phase-space propagator on W psi."""
    center = PhasePoint(1.0, 0.5)
    image = wavepacket_forward(coherent_state(grid, center))
    op = quadratic_propagator(QuadraticHamiltonian.harmonic(), t, grid)
    lhs = wavepacket_forward(harmonic_config_solution(grid, center, t))
    return _result("metaplectic intertwining", relative_error(lhs, metaplectic_apply(op, image), image), 1e-3)


def check_image_solves(grid: GridSpec, rng: np.random.Generator, t: float = 1.0) -> Result:
    """Split-step evolution of W psi_0 matches W psi(t) for the ground and a displaced state."""
    plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), t_final=t, dt=1e-3, method=Method.SPLIT_STEP,
                         record_every=step_count(t, 1e-3))
    worst = 0.0
    for center in (PhasePoint.origin(), PhasePoint(1.5, -0.5)):
        start = wavepacket_forward(coherent_state(grid, center))
        evolved = evolve_numeric(plan, start)[-1][1]
        target = wavepacket_forward(harmonic_config_solution(grid, center, t))
        worst = max(worst, relative_error(evolved, target, start))
    return _result("image solves phase-space equation", worst, 1e-3)


# ---------------------------------------------------------------- evolution

def _split_step_final(field: PhaseField, H, t: float, dt: float) -> PhaseField:
    plan = EvolutionPlan(H, t_final=t, dt=dt, method=Method.SPLIT_STEP, record_every=step_count(t, dt))
    return evolve_numeric(plan, field)[-1][1]


def check_three_way_agreement(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Metaplectic, split-step and wavepacket-image oscillator solutions agree pairwise."""
    H = QuadraticHamiltonian.harmonic()
    center = PhasePoint(1.0, 0.5)
    start = wavepacket_forward(coherent_state(grid, center))
    per_time = {}
    for t in (0.5, 1.0, np.pi / 2):
        exact = metaplectic_apply(quadratic_propagator(H, t, grid), start)
        stepped = _split_step_final(start, H, t, 1e-3)
        image = wavepacket_forward(harmonic_config_solution(grid, center, t))
        per_time[round(t, 6)] = max(
            relative_error(exact, stepped, start),
            relative_error(exact, image, start),
            relative_error(stepped, image, start),
        )
    return _result("oscillator three-way agreement", max(per_time.values()), 1e-3, per_time=per_time)


def check_split_step_order(grid: GridSpec, rng: np.random.Generator) -> Result:
    """Halving dt divides the split-step error by 4 within 20%."""
    H = QuadraticHamiltonian.harmonic()
    center = PhasePoint(1.0, 0.5)
    t = np.pi / 2
    start = wavepacket_forward(coherent_state(grid, center))
    target = wavepacket_forward(harmonic_config_solution(grid, center, t))
    coarse = relative_error(_split_step_final(start, H, t, 1e-2), target, start)
    fine = relative_error(_split_step_final(start, H, t, 5e-3), target, start)
    ratio = error_ratio(coarse, fine)
    return _result("split-step error ratio", abs(ratio - 4.0), 0.8, ratio=ratio,
                   order=convergence_order(coarse, fine))


def check_linear_rk4(grid: GridSpec, rng: np.random.Generator) -> Result:
    z0 = PhasePoint(1.0, 0.5)
    start = gaussian_field(grid)
    plan = EvolutionPlan(LinearHamiltonian(z0), t_final=1.0, dt=1e-3, method=Method.RK4, record_every=1000)
    numeric = evolve_numeric(plan, start)[-1][1]
    return _result("linear exact vs RK4", relative_error(numeric, evolve_linear_exact(z0, 1.0, start), start), 1e-5)


def check_generator_order(grid: GridSpec, rng: np.random.Generator, t: float = 0.5, h: float = 0.1) -> Result:
    """Central differences of T(t z0) Psi0 converge to the generator at second order."""
    z0 = PhasePoint(1.0, 0.5)
    start = gaussian_field(grid)
    sigma = generator_linear(z0)
    target = sigma(evolve_linear_exact(z0, t, start))

    def fd_error(step: float) -> float:
        ahead = evolve_linear_exact(z0, t + step, start)
        behind = evolve_linear_exact(z0, t - step, start)
        derivative = (ahead - behind) * (1j * grid.hbar / (2 * step))
        return relative_error(derivative, target, start)

    order = convergence_order(fd_error(h), fd_error(h / 2))
    return _result("generator finite-difference order", abs(order - 2.0), 0.3, order=order)


def check_generator_matches_symbol(grid: GridSpec, rng: np.random.Generator) -> Result:
    z0 = PhasePoint(-0.8, 1.1)
    field = gaussian_field(grid, PhasePoint(0.3, 0.3))
    lhs = generator_linear(z0)(field)
    rhs = tf_operator(WeylSymbol.linear(z0))(field)
    return _result("generator equals quantized linear symbol", relative_error(lhs, rhs, field), 1e-10)


def check_split_step_norm(grid: GridSpec, rng: np.random.Generator) -> Result:
    start = wavepacket_forward(coherent_state(grid, PhasePoint(1.0, 0.5)))
    plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), t_final=1.0, dt=1e-3, method=Method.SPLIT_STEP,
                         record_every=100)
    drift = max(abs(d) for _, d in norm_drift(evolve_numeric(plan, start)))
    return _result("split-step norm drift", drift, 1e-10, steps=plan.n_steps)


def check_calibrated_norm(grid: GridSpec, rng: np.random.Generator) -> Result:
    start = gaussian_field(grid, PhasePoint(0.5, 0.5))
    op = quadratic_propagator(QuadraticHamiltonian.harmonic(), 1.0, grid)
    defect = abs(l2_norm(metaplectic_apply(op, start)) / l2_norm(start) - 1.0)
    return _result("calibrated propagator norm defect", defect, 1e-3, nu=op.nu, delta=op.delta)


def check_time_reversal(grid: GridSpec, rng: np.random.Generator) -> Result:
    start = gaussian_field(grid, PhasePoint(1.0, -1.0))
    plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), t_final=1.0, dt=1e-3, method=Method.SPLIT_STEP,
                         record_every=1000)
    return _result("time reversal", evolve_time_reversal(plan, start), 2e-3)


SUITE_CHECKS: Dict[str, List[Callable[[GridSpec, np.random.Generator], Result]]] = {
    "group-law": [
        check_flow_symplectic, check_flow_group_law, check_cayley_rotation, check_singular_split,
        check_hw_composition, check_hw_commutator, check_hw_unitary,
    ],
    "quantization": [
        check_position_rule, check_momentum_rule, check_quadratic_rules, check_canonical_commutator,
        check_real_symbol_symmetric, check_sampled_gaussian_symbol,
    ],
    "covariance": [check_conjugation, check_symbol_covariance, check_metaplectic_unitary],
    "fourier": [check_fourier_involution, check_fourier_parseval, check_fourier_linearity, check_fourier_gaussian],
    "wavepacket": [
        check_wavepacket_isometry, check_wavepacket_round_trip, check_wavepacket_adjoint,
        check_translation_intertwining, check_metaplectic_intertwining, check_image_solves,
    ],
    "evolution": [
        check_three_way_agreement, check_split_step_order, check_linear_rk4, check_generator_order,
        check_generator_matches_symbol, check_split_step_norm, check_calibrated_norm, check_time_reversal,
    ],
}


def suite_names(suite: str) -> List[str]:
    """Expand 'all' and reject unknown names."""
    if suite == "all":
        return list(SUITES)
    if suite not in SUITE_CHECKS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    return [suite]


def run_check(check: Callable[[GridSpec, np.random.Generator], Result], grid: GridSpec,
              rng: np.random.Generator) -> Result:
    """A check that raises a toolkit error is recorded as failed."""
    try:
        return check(grid, rng)
    except PhaseSpaceError as exc:
        logger.warning("%s raised %s: %s", check.__name__, type(exc).__name__, exc)
        return _result(check.__name__, float("inf"), 0.0, error_message=str(exc))


def validate_suite(suite: str, grid: Optional[GridSpec] = None, seed: int = DEFAULT_SEED) -> Dict[str, Any]:
    """
    Run one suite (or all) and collect results.

    Args:
        suite: Suite name or 'all'
        grid: Grid to run on, default N=128, Lx=20, hbar=1
        seed: Seed of the random draws

    Returns:
        Dictionary with the suite name, the grid, per-check results and the overall verdict
    """
    grid = grid or GridSpec(128, 20.0, 1.0)
    names = suite_names(suite)
    rng = np.random.default_rng(seed)
    checks: List[Result] = []
    for name in names:
        logger.info("Running %s suite on N=%d, Lx=%g, hbar=%g", name, grid.N, grid.Lx, grid.hbar)
        for check in SUITE_CHECKS[name]:
            started = time.perf_counter()
            result = run_check(check, grid, rng)
            result['suite'] = name
            logger.info("  %s: error %.3e (limit %.0e) in %.2fs",
                        result['check'], result['error'], result['tolerance'], time.perf_counter() - started)
            checks.append(result)

    return {
        'suite': suite,
        'grid': {'N': grid.N, 'Lx': grid.Lx, 'Lp': grid.Lp, 'hbar': grid.hbar},
        'checks': checks,
        'validation_passed': all(c['passed'] for c in checks),
    }
