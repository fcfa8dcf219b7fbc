"""
Scenario configuration for the TF phase-space toolkit.

Scenario files are line-oriented key = value text with the sections [grid],
[state], [hamiltonian] and [run]. Every key has a default; unknown sections
and keys are errors that name the offending key.
"""

import configparser
import logging
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..calculus.errors import ConfigurationError
from ..calculus.grid import GridSpec, PhaseField, gaussian_field
from ..calculus.symplectic import LinearHamiltonian, PhasePoint, QuadraticHamiltonian
from ..evolution.propagate import EvolutionPlan, Method

logger = logging.getLogger(__name__)

# Largest N the O(N^3 log N) quadratures are tuned for.
REFERENCE_MAX_N = 256


def _floats(value, count: int, key: str) -> Tuple[float, ...]:
    if isinstance(value, str):
        parts = value.split()
    else:
        parts = list(value)
    if len(parts) != count:
        raise ValueError(f"{key} needs {count} numbers, got {len(parts)}")
    return tuple(float(v) for v in parts)


class GridConfig(BaseModel):
    """Schema for the [grid] section."""
    model_config = ConfigDict(extra="forbid")

    N: int = Field(128, description="Points per axis, even and >= 4")
    Lx: float = Field(20.0, description="Length of the x-window")
    hbar: float = Field(1.0, description="Planck constant")

    @field_validator("N")
    @classmethod
    def _even_n(cls, v: int) -> int:
        if v < 4 or v % 2:
            raise ValueError("N must be an even integer >= 4")
        return v

    @field_validator("Lx", "hbar")
    @classmethod
    def _positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("must be positive")
        return v


class StateConfig(BaseModel):
    """Schema for the [state] section."""
    model_config = ConfigDict(extra="forbid")

    preset: Literal["gaussian"] = Field("gaussian", description="Initial state family")
    center: Tuple[float, float] = Field((0.0, 0.0), description="Phase-space center 'x p'")
    width: float = Field(1.0, description="Width in units of sqrt(hbar)")

    @field_validator("center", mode="before")
    @classmethod
    def _parse_center(cls, v):
        return _floats(v, 2, "center")

    @field_validator("width")
    @classmethod
    def _positive_width(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("width must be positive")
        return v


class HamiltonianConfig(BaseModel):
    """Schema for the [hamiltonian] section."""
    model_config = ConfigDict(extra="forbid")

    preset: Literal["harmonic", "free", "linear", "quadratic"] = Field("harmonic", description="Hamiltonian family")
    z0: Tuple[float, float] = Field((1.0, 0.0), description="Translation vector 'x0 p0' of the linear preset")
    M: Tuple[float, float, float] = Field((1.0, 0.0, 1.0), description="'m11 m12 m22' of the quadratic preset")

    @field_validator("z0", mode="before")
    @classmethod
    def _parse_z0(cls, v):
        return _floats(v, 2, "z0")

    @field_validator("M", mode="before")
    @classmethod
    def _parse_m(cls, v):
        return _floats(v, 3, "M")


class RunConfig(BaseModel):
    """Schema for the [run] section."""
    model_config = ConfigDict(extra="forbid")

    t_final: float = Field(1.0, description="Final time, >= 0")
    dt: float = Field(1e-3, description="Time step")
    method: Literal["EXACT", "SPLIT_STEP", "RK4"] = Field("SPLIT_STEP", description="Propagation method")
    record_every: int = Field(100, description="Snapshot stride in steps")

    @field_validator("method", mode="before")
    @classmethod
    def _upper(cls, v):
        return v.upper() if isinstance(v, str) else v

    @model_validator(mode="after")
    def _check_steps(self) -> "RunConfig":
        if self.t_final < 0:
            raise ValueError("t_final must be >= 0")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_final > 0 and self.dt > self.t_final:
            raise ValueError("dt must not exceed t_final")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        return self


class ScenarioConfig(BaseModel):
    """A complete scenario: grid, initial state, Hamiltonian and run settings."""
    model_config = ConfigDict(extra="forbid")

    grid: GridConfig = Field(default_factory=GridConfig)
    state: StateConfig = Field(default_factory=StateConfig)
    hamiltonian: HamiltonianConfig = Field(default_factory=HamiltonianConfig)
    run: RunConfig = Field(default_factory=RunConfig)

    @model_validator(mode="after")
    def _check_method(self) -> "ScenarioConfig":
        if (self.run.method == "SPLIT_STEP" and self.hamiltonian.preset == "quadratic"
                and self.hamiltonian.M[1] != 0):
            raise ValueError("SPLIT_STEP needs a separable Hamiltonian; M has a cross term m12, use RK4 or EXACT")
        return self

    def build_grid(self) -> GridSpec:
        if self.grid.N > REFERENCE_MAX_N:
            logger.warning("N=%d is above the tuned range N <= %d; quadratures will be slow",
                           self.grid.N, REFERENCE_MAX_N)
        return GridSpec(self.grid.N, self.grid.Lx, self.grid.hbar)

    def build_state(self, grid: GridSpec) -> PhaseField:
        return gaussian_field(grid, PhasePoint(*self.state.center), self.state.width)

    def build_hamiltonian(self):
        preset = self.hamiltonian.preset
        if preset == "harmonic":
            return QuadraticHamiltonian.harmonic()
        if preset == "free":
            return QuadraticHamiltonian.free_particle()
        if preset == "linear":
            return LinearHamiltonian(PhasePoint(*self.hamiltonian.z0))
        return QuadraticHamiltonian.from_coefficients(*self.hamiltonian.M)

    def build_plan(self) -> EvolutionPlan:
        return EvolutionPlan(
            hamiltonian=self.build_hamiltonian(),
            t_final=self.run.t_final,
            dt=self.run.dt,
            method=Method(self.run.method),
            record_every=self.run.record_every,
        )


def _error_message(exc: ValidationError, source: str) -> str:
    messages = []
    for err in exc.errors():
        key = ".".join(str(part) for part in err["loc"]) or "scenario"
        messages.append(f"{key}: {err['msg']}")
    return f"invalid configuration {source}: " + "; ".join(messages)


def parse_scenario(text: str, source: str = "<string>") -> ScenarioConfig:
    """
    Parse scenario text.

    Args:
        text: Scenario file contents
        source: Name used in error messages

    Returns:
        The validated ScenarioConfig

    Raises:
        ConfigurationError: syntax errors, unknown sections or keys, invalid values
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"cannot parse {source}: {exc}") from exc

    sections = {name: dict(parser.items(name)) for name in parser.sections()}
    try:
        return ScenarioConfig.model_validate(sections)
    except ValidationError as exc:
        raise ConfigurationError(_error_message(exc, source)) from exc


def load_scenario(path: Optional[str] = None) -> ScenarioConfig:
    """Read a scenario file, or return the defaults when path is None."""
    if path is None:
        return ScenarioConfig()
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read configuration {path}: {exc}") from exc
    return parse_scenario(text, source=path)

