"""Coupler design goal expressed as a scalar cost for the bat optimizer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from batcoupler.bat import SearchSpace
from batcoupler.errors import InvalidInputError
from batcoupler.rfmodel import (
    DEFAULT_Z0_MODEL,
    EPS_R_MAX,
    EPS_R_MIN,
    CouplerAnalysis,
    CouplerGeometry,
    analyze,
)

SENTINEL_COST = 1e6

DEFAULT_BOUNDS = ((0.5, 20.0), (0.5, 20.0), (0.5, 20.0))


def default_space() -> SearchSpace:
    lo, hi = zip(*DEFAULT_BOUNDS)
    return SearchSpace(np.array(lo), np.array(hi))


@dataclass(frozen=True)
class DesignSpec:
    """Target coupling, substrate and the allowed mode-impedance window.

    ``bounds`` is a search space over ``(W, S, H)``.
    """

    target_coupling: float = 0.2
    eps_r: float = 3.9
    z_min: float = 20.0
    z_max: float = 75.0
    penalty_weight: float = 10.0
    bounds: SearchSpace = field(default_factory=default_space)
    z0_model: str = DEFAULT_Z0_MODEL

    def __post_init__(self):
        if not 0 < self.target_coupling < 1:
            raise InvalidInputError(f"target_coupling must lie in (0, 1), got {self.target_coupling}")
        if not EPS_R_MIN < self.eps_r < EPS_R_MAX:
            raise InvalidInputError(f"eps_r must lie in (1, 6), got {self.eps_r}")
        if not 0 < self.z_min < self.z_max:
            raise InvalidInputError(f"need 0 < z_min < z_max, got {self.z_min}, {self.z_max}")
        if not self.penalty_weight > 0:
            raise InvalidInputError(f"penalty_weight must be positive, got {self.penalty_weight}")
        if self.bounds.dims != 3:
            raise InvalidInputError(f"bounds must cover (W, S, H), got {self.bounds.dims} dims")
        if np.any(self.bounds.lower <= 0):
            raise InvalidInputError("W, S and H bounds must be strictly positive")


def feasible(analysis: CouplerAnalysis, spec: DesignSpec) -> bool:
    return spec.z_min < analysis.zoo and analysis.zoe < spec.z_max


def geometry_of(position, spec: DesignSpec) -> CouplerGeometry:
    w, s, h = (float(v) for v in position)
    return CouplerGeometry(w=w, s=s, h_sub=h, eps_r=spec.eps_r)


def cost_of_analysis(analysis: CouplerAnalysis, spec: DesignSpec) -> float:
    violation = max(0.0, spec.z_min - analysis.zoo) + max(0.0, analysis.zoe - spec.z_max)
    return abs(analysis.coupling - spec.target_coupling) + spec.penalty_weight * violation


def cost(position, spec: DesignSpec) -> float:
    """Coupling error plus linear impedance-window penalties; never raises."""
    try:
        value = cost_of_analysis(analyze(geometry_of(position, spec), spec.z0_model), spec)
    except (ValueError, OverflowError, ZeroDivisionError):
        return SENTINEL_COST
    return value if math.isfinite(value) else SENTINEL_COST


@dataclass(frozen=True)
class CouplerObjective:
    spec: DesignSpec = field(default_factory=DesignSpec)
    dims: int = 3

    @property
    def space(self) -> SearchSpace:
        return self.spec.bounds

    def evaluate(self, position: np.ndarray) -> float:
        return cost(position, self.spec)
