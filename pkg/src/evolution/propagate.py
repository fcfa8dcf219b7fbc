"""
Evolution module for the TF phase-space toolkit.

This module handles solving i hbar dPsi/dt = H(x + i hbar d/dp, -i hbar d/dx) Psi:

  - exactly for linear Hamiltonians, Psi(t) = T(t z0) Psi0;
  - exactly for quadratic Hamiltonians through the calibrated metaplectic
    operator of the flow S_t;
  - numerically (split-step or RK4) in general, with snapshot histories,
    norm-drift diagnostics and TFGRID/CSV export.

Differentiating T(t z0) Psi0 in t gives the generator
    Sigma Psi = -p0 x Psi - i hbar (x0 d/dx + p0 d/dp) Psi,
which is x0 P - p0 X for the quantized H_{z0}(z) = sigma(z, z0).
"""

import logging
import os
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..calculus.grid import (
    GridSpec,
    PhaseField,
    check_periodic,
    coherent_state,
    derivative_values,
    gaussian_field,
    l2_norm,
)
from ..calculus.heisenberg_weyl import hw_phase
from ..calculus.metaplectic import MetaplecticOp, build_metaplectic, calibrate_phase, metaplectic_apply
from ..calculus.symplectic import LinearHamiltonian, PhasePoint, QuadraticHamiltonian, flow_matrix
from ..calculus.tfgrid import write_tfgrid
from .stepping import AnyHamiltonian, SeparableHamiltonian, make_propagator, step_count

logger = logging.getLogger(__name__)

History = List[Tuple[float, PhaseField]]


class Method(str, Enum):
    EXACT = "EXACT"
    SPLIT_STEP = "SPLIT_STEP"
    RK4 = "RK4"


@dataclass(frozen=True)
class EvolutionPlan:
    """What to evolve, for how long, how, and how often to record."""
    hamiltonian: AnyHamiltonian
    t_final: float
    dt: float
    method: Method = Method.SPLIT_STEP
    record_every: int = 1

    def __post_init__(self):
        method = self.method if isinstance(self.method, Method) else Method(str(self.method).upper())
        object.__setattr__(self, "method", method)
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_final < 0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")
        if self.t_final > 0 and self.dt > self.t_final:
            raise ValueError(f"dt = {self.dt} exceeds t_final = {self.t_final}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError(f"record_every must be an integer >= 1, got {self.record_every}")
        if self.method == Method.EXACT and isinstance(self.hamiltonian, SeparableHamiltonian):
            raise ValueError("EXACT needs a linear or quadratic Hamiltonian")

    @property
    def n_steps(self) -> int:
        return step_count(self.t_final, self.dt)

    def record_times(self) -> List[Tuple[int, float]]:
        """(step, time) pairs: every record_every steps plus the final step."""
        n = self.n_steps
        steps = list(range(0, n + 1, self.record_every))
        if steps[-1] != n:
            steps.append(n)
        return [(s, self.t_final * s / n if n else 0.0) for s in steps]


def evolve_linear_exact(z0: PhasePoint, t: float, field: PhaseField) -> PhaseField:
    """Psi(t) = T(t z0) Psi0 for H_{z0}(z) = sigma(z, z0)."""
    return hw_phase(t * z0, field)


def generator_linear(z0: PhasePoint) -> Callable[[PhaseField], PhaseField]:
    """Return Sigma with i hbar dPsi/dt = Sigma Psi for the linear Hamiltonian."""
    x0, p0 = float(z0.x[0]), float(z0.p[0])

    def sigma(field: PhaseField) -> PhaseField:
        grid = field.grid
        v = field.values
        dx_v = derivative_values(v, grid, axis=0)
        dp_v = derivative_values(v, grid, axis=1)
        return field.with_values(-p0 * grid.x[:, None] * v - 1j * grid.hbar * (x0 * dx_v + p0 * dp_v))

    return sigma


def quadratic_propagator(
    H: QuadraticHamiltonian,
    t: float,
    grid: GridSpec,
    sample: Optional[PhaseField] = None,
) -> MetaplecticOp:
    """Calibrated metaplectic operator of flow_matrix(H, t)."""
    sample = sample if sample is not None else gaussian_field(grid)
    op = build_metaplectic(flow_matrix(H, t))
    return calibrate_phase(op, H, t, sample)


def evolve_quadratic_exact(
    H: QuadraticHamiltonian,
    t: float,
    field: PhaseField,
    sample: Optional[PhaseField] = None,
) -> PhaseField:
    """
    Psi(t) = S_t Psi0 with S_t the calibrated metaplectic operator.

    Args:
        H: Quadratic Hamiltonian
        t: Time
        field: Initial field
        sample: Calibration field, default the standard Gaussian

    Returns:
        The field at time t
    """
    if t == 0:
        return field.with_values(field.values.copy())
    op = quadratic_propagator(H, t, field.grid, sample)
    return metaplectic_apply(op, field)


def evolve_exact(hamiltonian: AnyHamiltonian, t: float, field: PhaseField) -> PhaseField:
    if isinstance(hamiltonian, LinearHamiltonian):
        return evolve_linear_exact(hamiltonian.z0, t, field)
    if isinstance(hamiltonian, QuadraticHamiltonian):
        return evolve_quadratic_exact(hamiltonian, t, field)
    raise ValueError("no exact propagator for a general separable Hamiltonian")


def evolve_numeric(plan: EvolutionPlan, field: PhaseField) -> History:
    """
    Evolve a field and record snapshots.

    Args:
        plan: Evolution plan
        field: Initial field

    Returns:
        List of (t, field) at step 0, every record_every steps, and the final step
    """
    check_periodic(field, "initial field")
    records = plan.record_times()
    history: History = [(0.0, field)]

    if plan.method == Method.EXACT:
        for _, t in records[1:]:
            history.append((t, evolve_exact(plan.hamiltonian, t, field)))
        return history

    n = plan.n_steps
    if n == 0:
        return history
    propagator = make_propagator(field.grid, plan.hamiltonian, plan.t_final / n, plan.method.value)
    logger.info("evolving %d steps with %s, %d snapshots", n, plan.method.value, len(records))

    values = field.values
    done = 0
    for step, t in records[1:]:
        values = propagator.advance(values, step - done)
        done = step
        history.append((t, field.with_values(values)))
    return history


def norm_drift(history: History) -> List[Tuple[float, float]]:
    """||Psi(t)|| / ||Psi(0)|| - 1 per snapshot."""
    if not history:
        raise ValueError("history is empty")
    initial = l2_norm(history[0][1])
    if initial == 0.0:
        raise ValueError("initial snapshot has zero norm")
    return [(t, l2_norm(f) / initial - 1.0) for t, f in history]


def evolve_time_reversal(plan: EvolutionPlan, field: PhaseField) -> float:
    """Evolve forward with H, then for the same time with -H; return the relative return defect."""
    forward = evolve_numeric(plan, field)[-1][1]
    backward_plan = EvolutionPlan(
        hamiltonian=-plan.hamiltonian,
        t_final=plan.t_final,
        dt=plan.dt,
        method=plan.method,
        record_every=max(plan.n_steps, 1),
    )
    back = evolve_numeric(backward_plan, forward)[-1][1]
    return l2_norm(back - field) / l2_norm(field)


def harmonic_config_solution(grid: GridSpec, center: PhasePoint, t: float):
    """
    Closed-form solution for H = (x^2 + p^2)/2 from the coherent state T(z_c) phi_0:
    exp(-i t / 2) T(S_t z_c) phi_0.
    """
    moved = flow_matrix(QuadraticHamiltonian.harmonic(), t).apply(center)
    return coherent_state(grid, moved) * np.exp(-0.5j * t)


def export_history(
    history: History,
    out_dir: str,
    timestamp: bool = False,
    prefix: str = "snapshot",
) -> str:
    """
    Write one TFGRID dump per snapshot and a manifest.csv with columns t,norm,file.

    Returns:
        Path of the manifest
    """
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for i, (t, field) in enumerate(history):
        name = f"{prefix}_{i:05d}.tfgrid"
        write_tfgrid(field, os.path.join(out_dir, name), timestamp=timestamp)
        rows.append({"t": t, "norm": l2_norm(field), "file": name})
    manifest = os.path.join(out_dir, "manifest.csv")
    pd.DataFrame(rows, columns=["t", "norm", "file"]).to_csv(
        manifest, index=False, float_format="%.17g", lineterminator="\n"
    )
    return manifest
