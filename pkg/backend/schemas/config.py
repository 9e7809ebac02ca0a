"""
Pydantic schema for a CLI run
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

import settings
from errors import ConfigError

U64_MAX = 2 ** 64 - 1


class Command(str, Enum):
    ANALYZE = "analyze"
    REDUCE = "reduce"
    SECTORS = "sectors"
    BUILD = "build"
    BESTAPPROX = "bestapprox"


class FreezePolicy(str, Enum):
    VALUE = "value"
    ZERO = "zero"


class SampleKind(str, Enum):
    GRID = "grid"
    SOBOL = "sobol"


_NEEDS_CIRCUIT = {Command.ANALYZE, Command.REDUCE, Command.BESTAPPROX}
_NEEDS_THETA = {Command.ANALYZE, Command.REDUCE}
_NEEDS_QUBITS = {Command.SECTORS, Command.BUILD}


class RunConfig(BaseModel):
    """Everything one CLI invocation needs"""
    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "command": "analyze",
                "circuit": "circuits/rz_rx.json",
                "random_theta": True,
                "seed": 7,
                "shots": 8000,
                "csv": "eigs.csv",
            }
        },
    )

    command: Command = Field(..., description="Subcommand to run")
    circuit: Optional[Path] = Field(None, description="Circuit description file")
    theta: Optional[Path] = Field(None, description="JSON file with explicit parameter values")
    random_theta: bool = Field(False, description="Draw theta at random from the seed")
    seed: Optional[int] = Field(None, ge=0, le=U64_MAX, description="Root seed for every stochastic path")
    shots: Optional[int] = Field(None, ge=1, description="Shots per overlap estimate; None means exact")
    tol_abs: float = Field(settings.TOL_ABS, ge=0.0)
    tol_rel: float = Field(settings.TOL_REL, ge=0.0)
    cap: Optional[int] = Field(None, ge=1, description="Dimension cap for early termination")
    z_threshold: float = Field(settings.Z_THRESHOLD, gt=0.0)
    resamples: int = Field(settings.BOOTSTRAP_RESAMPLES, ge=2)
    report: Optional[Path] = Field(None, description="JSON report output path")
    csv: Optional[Path] = Field(None, description="Eigenvalue CSV output path")
    sweep: bool = Field(False, description="CSV rows at every preset shot count (analyze)")
    out: Optional[Path] = Field(None, description="Circuit output path (reduce, build)")
    qubits: Optional[int] = Field(None, ge=1, description="Qubit count (sectors, build)")
    trials: int = Field(5, ge=0, description="Random verification points (build)")
    freeze: FreezePolicy = Field(FreezePolicy.VALUE, description="Value given to removed parameters")
    phi0: Optional[List[float]] = Field(None, description="Values of the symmetry parameters (reduce)")
    samples: SampleKind = Field(SampleKind.GRID, description="Sample set construction (bestapprox)")
    n: int = Field(64, ge=1, description="Grid points per axis, or Sobol sample count")
    probes: int = Field(100_000, ge=1, description="Probe count for the probe estimator")
    dispersion: Optional[float] = Field(None, gt=0.0, description="Per-coordinate covering radius of a Sobol set")
    volume: bool = Field(False, description="Also compute vol(M) and the lower-bound formula")
    nodes: Optional[int] = Field(None, ge=2, description="Quadrature nodes per axis (or total, for QMC)")

    @field_validator("shots", mode="before")
    @classmethod
    def _exact_shots(cls, value):
        if isinstance(value, str) and value.strip().lower() == "exact":
            return None
        return value

    @model_validator(mode="after")
    def _check_sources(self):
        if self.command in _NEEDS_CIRCUIT and self.circuit is None:
            raise ValueError(f"'{self.command.value}' requires --circuit")
        if self.command in _NEEDS_QUBITS and self.qubits is None:
            raise ValueError(f"'{self.command.value}' requires --qubits")
        if self.command in _NEEDS_THETA:
            if (self.theta is not None) == self.random_theta:
                raise ValueError("Give exactly one theta source: --theta <path> or --random-theta")
        elif self.theta is not None or self.random_theta:
            raise ValueError(f"'{self.command.value}' does not take a theta source")
        if self.sweep and self.csv is None:
            raise ValueError("--sweep writes eigenvalue rows and needs --csv")
        if self.stochastic and self.seed is None:
            raise ValueError("--seed is required when a stochastic path is enabled")
        return self

    @property
    def stochastic(self) -> bool:
        if self.random_theta or self.shots is not None or self.sweep:
            return True
        if self.command == Command.BUILD and self.trials > 0:
            return True
        if self.command == Command.BESTAPPROX:
            return self.samples == SampleKind.SOBOL
        return False


def load_run_file(config_path: Path) -> Dict[str, Any]:
    """YAML run file -> RunConfig fields (dashes in keys become underscores)."""
    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigError(f"Config not found: {config_path}")
    try:
        with config_path.open() as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"Config {config_path} is not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"Config {config_path} must be a mapping")
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def build_run_config(values: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        message = first["msg"] if not where else f"{where}: {first['msg']}"
        raise ConfigError(message, details={"errors": [e["msg"] for e in exc.errors()]}) from None
