"""
Pydantic schemas for analysis reports
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Verdict(str, Enum):
    INDEPENDENT = "independent"
    REDUNDANT = "redundant"


class TolerancePolicy(BaseModel):
    """Invertibility threshold: lambda_min > max(abs, rel * lambda_max)"""
    model_config = ConfigDict(populate_by_name=True)

    abs_tol: float = Field(1e-10, alias="abs", ge=0.0, description="Absolute eigenvalue tolerance")
    rel_tol: float = Field(1e-9, alias="rel", ge=0.0, description="Tolerance relative to lambda_max")

    def threshold(self, lambda_max: float) -> float:
        return max(self.abs_tol, self.rel_tol * lambda_max)


class ParameterVerdict(BaseModel):
    name: str = Field(..., description="Parameter name")
    verdict: Verdict = Field(..., description="Classification of the parameter")
    lambda_min: Optional[float] = Field(None, description="Smallest eigenvalue of the step matrix")
    lambda_second: Optional[float] = Field(None, description="Second smallest eigenvalue (None for 1x1)")
    lambda_min_std: Optional[float] = Field(None, description="Bootstrap stddev of lambda_min")
    lambda_second_std: Optional[float] = Field(None, description="Bootstrap stddev of lambda_second")
    skipped: bool = Field(False, description="True when marked redundant by the dimension cap")


class ClassificationReport(BaseModel):
    """Per-parameter verdicts in roster order"""
    parameters: List[ParameterVerdict] = Field(default_factory=list)
    cap: Optional[int] = Field(None, description="Dimension cap used for early termination")
    tolerance: TolerancePolicy = Field(default_factory=TolerancePolicy)
    theta: List[float] = Field(default_factory=list, description="Analysis point, roster order")
    seed: Optional[int] = Field(None, description="Seed used to draw theta, if random")
    shots: Optional[int] = Field(None, description="Shots per overlap estimate; None for exact")
    z_threshold: Optional[float] = Field(None, description="Noise-aware decision threshold")

    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "parameters": [
                    {"name": "t1", "verdict": "independent", "lambda_min": 0.25, "lambda_second": None},
                    {"name": "t2", "verdict": "redundant", "lambda_min": 0.0, "lambda_second": 0.5},
                ],
                "cap": None,
                "tolerance": {"abs": 1e-10, "rel": 1e-9},
                "theta": [1.1, 2.3],
                "seed": 7,
            }
        },
    )

    def independent_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parameters) if p.verdict == Verdict.INDEPENDENT]

    def verdicts(self) -> List[Verdict]:
        return [p.verdict for p in self.parameters]

    @property
    def num_independent(self) -> int:
        return len(self.independent_indices())


class RepeatedClassification(BaseModel):
    """Verdicts at several random points"""
    reports: List[ClassificationReport] = Field(default_factory=list)
    consistent: bool = Field(..., description="Whether every point gave the same verdict pattern")


class SectorEntry(BaseModel):
    p: int = Field(..., ge=0, description="Eigenvalue exponent, omega = exp(2 pi i p / Q)")
    d: int = Field(..., ge=1, description="Order of omega")
    dim: int = Field(..., description="Real dimension of the physical sector")


class SectorTable(BaseModel):
    Q: int = Field(..., ge=1, description="Qubit count")
    sectors: List[SectorEntry] = Field(default_factory=list)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"Q": 3, "sectors": [{"p": 0, "d": 1, "dim": 7}, {"p": 1, "d": 3, "dim": 3}]}
        }
    )


class VerificationTrial(BaseModel):
    label: str = Field(..., description="'zero' or 'random-<i>'")
    theta: List[float] = Field(default_factory=list)
    independent: int = Field(..., description="Number of independent parameters found")
    translation_error: float = Field(..., description="||tau C(theta) - C(theta)||")
    passed: bool


class VerificationReport(BaseModel):
    qubits: int
    parameters: int = Field(..., description="Parameter count of the circuit")
    cap: int = Field(..., description="sector_dimension(Q, d=1)")
    seed: Optional[int] = None
    trials: List[VerificationTrial] = Field(default_factory=list)
    passed: bool


class AlphaMethod(str, Enum):
    VORONOI_3D = "voronoi-3d"
    ARC = "arc"
    PROBE = "probe"


class AlphaEstimate(BaseModel):
    """Discrete best-approximation error with its density certificate"""
    alpha_hat: float = Field(..., ge=0.0, description="alpha_C^D (chordal metric)")
    epsilon: Optional[float] = Field(None, ge=0.0, description="Certified density of D; None if uncertified")
    lower: Optional[float] = Field(None, description="alpha_hat - epsilon")
    method: AlphaMethod
    N: int = Field(..., ge=1, description="Sample set size")
    rank: int = Field(..., ge=1, description="Rank of the Gram embedding")
    M: Optional[int] = Field(None, description="Probe count (probe method)")
    vertex_count: Optional[int] = Field(None, description="Voronoi vertex count (voronoi-3d)")


class BestApproxReport(BaseModel):
    alpha_hat: float
    epsilon: Optional[float] = None
    lower: Optional[float] = None
    method: AlphaMethod
    N: int
    M: Optional[int] = None
    volume: Optional[float] = None
    lower_bound_formula: Optional[float] = None
    flagged_exceeds_diameter: Optional[bool] = None
