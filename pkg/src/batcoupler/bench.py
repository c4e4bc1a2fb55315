"""Standard test functions for exercising the optimizer on its own."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from batcoupler.bat import SearchSpace
from batcoupler.errors import InvalidInputError


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * x))


def rosenbrock(x) -> float:
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise InvalidInputError(f"rosenbrock needs at least 2 dimensions, got {x.size}")
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


@dataclass(frozen=True)
class BenchFunction:
    name: str
    func: Callable[[np.ndarray], float]
    dims: int
    default_bounds: SearchSpace
    known_minimum: float
    known_argmin: np.ndarray

    def evaluate(self, position: np.ndarray) -> float:
        return self.func(position)

    @property
    def space(self) -> SearchSpace:
        return self.default_bounds


# name -> (function, bound half-width or (lo, hi), argmin coordinate, min dims)
_CATALOG = {
    "sphere": (sphere, (-5.12, 5.12), 0.0, 1),
    "rosenbrock": (rosenbrock, (-2.048, 2.048), 1.0, 2),
    "rastrigin": (rastrigin, (-5.12, 5.12), 0.0, 1),
}

NAMES = tuple(_CATALOG)


def get(name: str, dims: int) -> BenchFunction:
    try:
        func, (lo, hi), opt, min_dims = _CATALOG[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown function {name!r}; available: {', '.join(NAMES)}"
        ) from None
    if dims < min_dims:
        raise InvalidInputError(f"{name} needs dims >= {min_dims}, got {dims}")
    return BenchFunction(
        name=name,
        func=func,
        dims=dims,
        default_bounds=SearchSpace.uniform(dims, lo, hi),
        known_minimum=0.0,
        known_argmin=np.full(dims, opt),
    )
