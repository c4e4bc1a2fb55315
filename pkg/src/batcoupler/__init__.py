"""Bat-algorithm optimizer and coupled-microstrip model for coupler design."""

from batcoupler.bat import (
    Bat,
    BatParams,
    FunctionObjective,
    Population,
    RunResult,
    SearchSpace,
    Termination,
    init_population,
    run,
    step,
)
from batcoupler.errors import DomainError, InvalidInputError, ValidityError
from batcoupler.objective import CouplerObjective, DesignSpec, cost, feasible
from batcoupler.rfmodel import CouplerAnalysis, CouplerGeometry, analyze, coupling, z0_single

__all__ = [
    "Bat",
    "BatParams",
    "CouplerAnalysis",
    "CouplerGeometry",
    "CouplerObjective",
    "DesignSpec",
    "DomainError",
    "FunctionObjective",
    "InvalidInputError",
    "Population",
    "RunResult",
    "SearchSpace",
    "Termination",
    "ValidityError",
    "analyze",
    "cost",
    "coupling",
    "feasible",
    "init_population",
    "run",
    "step",
    "z0_single",
]
