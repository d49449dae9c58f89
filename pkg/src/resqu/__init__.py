"""Information-theoretic quantification of human causal responsibility.

Responsibility is the share of the output's entropy left unexplained by the
automation's variables: ``H(Z | automation) / H(Z)``.
"""

__version__ = "0.1.0"

from .aided_decision import (
    AidedTables,
    DualCriteria,
    ResponsibilityReport,
    ScenarioParams,
    build_tables,
    dual_criteria,
    responsibility,
)
from .flowmodel import FlowModel, FlowVariable, general_responsibility, load_model
from .infotheory import JointPmf, Pmf, entropy, responsibility_ratio
from .simulate import SimConfig, simulate_aws

__all__ = [
    "AidedTables",
    "DualCriteria",
    "FlowModel",
    "FlowVariable",
    "JointPmf",
    "Pmf",
    "ResponsibilityReport",
    "ScenarioParams",
    "SimConfig",
    "build_tables",
    "dual_criteria",
    "entropy",
    "general_responsibility",
    "load_model",
    "responsibility",
    "responsibility_ratio",
    "simulate_aws",
]
