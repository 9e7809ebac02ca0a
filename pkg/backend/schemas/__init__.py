"""
Pydantic schemas for reports and run configuration
"""

from .reports import (
    AlphaEstimate,
    AlphaMethod,
    BestApproxReport,
    ClassificationReport,
    ParameterVerdict,
    RepeatedClassification,
    SectorEntry,
    SectorTable,
    TolerancePolicy,
    VerificationReport,
    VerificationTrial,
    Verdict,
)
from .config import Command, FreezePolicy, RunConfig, SampleKind, build_run_config, load_run_file

__all__ = [
    # Reports
    "AlphaEstimate",
    "AlphaMethod",
    "BestApproxReport",
    "ClassificationReport",
    "ParameterVerdict",
    "RepeatedClassification",
    "SectorEntry",
    "SectorTable",
    "TolerancePolicy",
    "VerificationReport",
    "VerificationTrial",
    "Verdict",
    # Config
    "Command",
    "FreezePolicy",
    "RunConfig",
    "SampleKind",
    "build_run_config",
    "load_run_file",
]
