"""Bat algorithm over axis-aligned bounded continuous search spaces.

The optimizer is deterministic under a seed: every run owns a single
``numpy.random.Generator`` and all draws happen in a fixed order.

Per iteration, for each bat in rank order, the draws are::

    beta (1), pulse gate u_r (1), walk eps (dims), loudness gate u_a (1)

followed by ``replace_count * dims`` uniforms for the fresh random bats.
All four per-bat draws are taken even when one of them goes unused, so the
stream position never depends on the path taken.

Walk steps use ``eps`` uniform in [-1, 1] per component. Loudness decays and
pulse rate grows once per iteration for every bat; acceptance of a candidate
is gated by the bat's current loudness and requires no loss in cost. The
elitist best is updated from every evaluated candidate, accepted or not.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Protocol, Sequence

import numpy as np

from batcoupler.errors import InvalidInputError

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1


class Objective(Protocol):
    dims: int

    def evaluate(self, position: np.ndarray) -> float: ...


@dataclass(frozen=True)
class FunctionObjective:
    """Wrap a plain callable ``f(x) -> float`` as an objective."""

    func: Callable[[np.ndarray], float]
    dims: int

    def evaluate(self, position: np.ndarray) -> float:
        return float(self.func(position))


@dataclass(frozen=True)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.size == 0 or lower.shape != upper.shape:
            raise InvalidInputError(
                f"bounds must be non-empty and of equal length, got {lower.size} and {upper.size}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidInputError("bounds must be finite")
        if np.any(lower >= upper):
            raise InvalidInputError("every lower bound must be strictly below its upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, dims: int, low: float, high: float) -> "SearchSpace":
        if dims < 1:
            raise InvalidInputError(f"dims must be positive, got {dims}")
        return cls(np.full(dims, low), np.full(dims, high))

    @property
    def dims(self) -> int:
        return self.lower.size

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.minimum(np.maximum(x, self.lower), self.upper)

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.lower + (self.upper - self.lower) * rng.random(self.dims)


@dataclass(frozen=True)
class BatParams:
    """Algorithm constants.

    ``f_min``/``f_max`` bound the frequency draw, ``alpha`` is the loudness
    decay factor and ``gamma`` the pulse-rate growth constant. ``r0`` is the
    ceiling the pulse rate grows towards and ``a0`` the initial loudness.
    ``replace_count`` worst bats are swapped for fresh random ones every
    iteration. A run stops once the best cost is ``<= tol`` or after
    ``max_iter`` iterations.
    """

    pop_size: int = 20
    f_min: float = 0.0
    f_max: float = 100.0
    alpha: float = 0.9
    gamma: float = 0.9
    r0: float = 0.5
    a0: float = 1.0
    replace_count: int = 2
    max_iter: int = 1000
    tol: float = 1e-6

    def __post_init__(self):
        problems = []
        if self.pop_size < 1:
            problems.append(f"pop_size must be >= 1 (got {self.pop_size})")
        if not self.f_min < self.f_max:
            problems.append(f"f_min must be < f_max (got {self.f_min}, {self.f_max})")
        if not 0 < self.alpha < 1:
            problems.append(f"alpha must lie in (0, 1) (got {self.alpha})")
        if not self.gamma > 0:
            problems.append(f"gamma must be > 0 (got {self.gamma})")
        if not 0 < self.r0 <= 1:
            problems.append(f"r0 must lie in (0, 1] (got {self.r0})")
        if not self.a0 > 0:
            problems.append(f"a0 must be > 0 (got {self.a0})")
        if not 0 <= self.replace_count < self.pop_size:
            problems.append(
                f"replace_count must satisfy 0 <= replace_count < pop_size (got {self.replace_count})"
            )
        if self.max_iter < 1:
            problems.append(f"max_iter must be >= 1 (got {self.max_iter})")
        if not self.tol > 0:
            problems.append(f"tol must be > 0 (got {self.tol})")
        if problems:
            raise InvalidInputError("; ".join(problems))


@dataclass
class Bat:
    position: np.ndarray
    velocity: np.ndarray
    frequency: float
    loudness: float
    pulse_rate: float
    fitness: float
    uid: int = 0

    def copy(self) -> "Bat":
        return replace(self, position=self.position.copy(), velocity=self.velocity.copy())


@dataclass
class Population:
    bats: list[Bat]
    best_position: np.ndarray
    best_fitness: float
    t: int = 0
    next_uid: int = 0

    def copy(self) -> "Population":
        return replace(
            self, bats=[b.copy() for b in self.bats], best_position=self.best_position.copy()
        )

    @property
    def mean_loudness(self) -> float:
        return sum(b.loudness for b in self.bats) / len(self.bats)

    def rank(self) -> None:
        # list.sort is stable, so ties keep their current order
        self.bats.sort(key=lambda b: b.fitness)


class Termination(str, enum.Enum):
    TOLERANCE_REACHED = "ToleranceReached"
    MAX_ITERATIONS = "MaxIterations"


@dataclass(frozen=True)
class ConvergenceRecord:
    iteration: int
    best_fitness: float
    best_position: np.ndarray


@dataclass
class RunResult:
    best_position: np.ndarray
    best_fitness: float
    iterations_used: int
    history: list[ConvergenceRecord]
    seed: int
    terminated: Termination
    initial_fitness: float = math.inf

    def iterations_to(self, threshold: float) -> int | None:
        """First iteration whose best cost is ``<= threshold``.

        Returns 0 when the initial population already meets it and None when
        the run never got there.
        """
        if self.initial_fitness <= threshold:
            return 0
        for rec in self.history:
            if rec.best_fitness <= threshold:
                return rec.iteration
        return None


def make_rng(seed: int) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED:
        raise InvalidInputError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def draw_frequency(params: BatParams, beta: float) -> float:
    return params.f_min + (params.f_max - params.f_min) * beta


def move_bat(
    bat: Bat, best_position: np.ndarray, frequency: float, space: SearchSpace
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(velocity, position)`` after one flight.

    The velocity is returned unclamped; only the position is clamped.
    """
    velocity = bat.velocity + (bat.position - best_position) * frequency
    return velocity, space.clamp(bat.position + velocity)


def random_walk(
    best_position: np.ndarray, avg_loudness: float, epsilon: np.ndarray, space: SearchSpace
) -> np.ndarray:
    return space.clamp(best_position + np.asarray(epsilon) * avg_loudness)


def update_loudness(loudness: float, alpha: float) -> float:
    return alpha * loudness


def update_pulse_rate(r0: float, gamma: float, t: int) -> float:
    return r0 * (1.0 - math.exp(-gamma * t))


def _safe_evaluate(objective: Objective, position: np.ndarray) -> float | None:
    try:
        value = float(objective.evaluate(position))
    except Exception:  # noqa: BLE001 - any failure rejects the candidate
        logger.warning("objective raised at %s; candidate rejected", position, exc_info=True)
        return None
    if not math.isfinite(value):
        logger.warning("objective returned %r at %s; candidate rejected", value, position)
        return None
    return value


def _fresh_bat(
    params: BatParams,
    space: SearchSpace,
    objective: Objective,
    rng: np.random.Generator,
    uid: int,
    t: int = 0,
) -> Bat:
    """A uniformly placed bat carrying the loudness and pulse rate due at ``t``."""
    position = space.sample(rng)
    fitness = _safe_evaluate(objective, position)
    return Bat(
        position=position,
        velocity=np.zeros(space.dims),
        frequency=0.0,
        loudness=params.a0 * params.alpha**t,
        pulse_rate=update_pulse_rate(params.r0, params.gamma, t),
        fitness=math.inf if fitness is None else fitness,
        uid=uid,
    )


def _check_dims(objective: Objective, space: SearchSpace) -> None:
    dims = getattr(objective, "dims", space.dims)
    if dims != space.dims:
        raise InvalidInputError(
            f"objective has {dims} dimensions but the search space has {space.dims}"
        )


def init_population(
    params: BatParams, space: SearchSpace, objective: Objective, seed: int | np.random.Generator
) -> Population:
    """Sample ``pop_size`` evaluated bats uniformly inside ``space``.

    ``seed`` may also be a ready generator, in which case the population draws
    continue that stream.
    """
    _check_dims(objective, space)
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    bats = [_fresh_bat(params, space, objective, rng, uid) for uid in range(params.pop_size)]
    pop = Population(
        bats=bats, best_position=bats[0].position.copy(), best_fitness=math.inf,
        next_uid=params.pop_size,
    )
    pop.rank()
    pop.best_position = pop.bats[0].position.copy()
    pop.best_fitness = pop.bats[0].fitness
    return pop


def step(
    population: Population,
    params: BatParams,
    space: SearchSpace,
    objective: Objective,
    rng: np.random.Generator,
) -> Population:
    """Advance one iteration and return the new population.

    The input population is left untouched.
    """
    pop = population.copy()
    dims = space.dims
    t_next = pop.t + 1
    avg_loudness = pop.mean_loudness

    for bat in pop.bats:
        beta = rng.random()
        u_pulse = rng.random()
        eps = 2.0 * rng.random(dims) - 1.0
        u_loud = rng.random()

        bat.frequency = draw_frequency(params, beta)
        bat.velocity, candidate = move_bat(bat, pop.best_position, bat.frequency, space)
        if u_pulse > bat.pulse_rate:
            candidate = random_walk(pop.best_position, avg_loudness, eps, space)

        cost = _safe_evaluate(objective, candidate)
        if cost is None:
            continue
        if u_loud < bat.loudness and cost <= bat.fitness:
            bat.position = candidate
            bat.fitness = cost
        if cost <= pop.best_fitness:
            pop.best_fitness = cost
            pop.best_position = candidate.copy()

    for bat in pop.bats:
        bat.loudness = update_loudness(bat.loudness, params.alpha)
        bat.pulse_rate = update_pulse_rate(params.r0, params.gamma, t_next)

    pop.rank()
    if params.replace_count:
        keep = len(pop.bats) - params.replace_count
        fresh = []
        for _ in range(params.replace_count):
            bat = _fresh_bat(params, space, objective, rng, pop.next_uid, t_next)
            pop.next_uid += 1
            fresh.append(bat)
            if bat.fitness <= pop.best_fitness:
                pop.best_fitness = bat.fitness
                pop.best_position = bat.position.copy()
        pop.bats = pop.bats[:keep] + fresh
        pop.rank()

    pop.t = t_next
    return pop


def run(
    objective: Objective,
    params: BatParams,
    space: SearchSpace,
    seed: int,
    callback: Callable[[Population], None] | None = None,
) -> RunResult:
    """Optimize ``objective`` over ``space``.

    ``callback`` is invoked with the initial population and again after every
    iteration; it must not mutate what it receives.
    """
    _check_dims(objective, space)
    rng = make_rng(seed)
    pop = init_population(params, space, objective, rng)
    if callback is not None:
        callback(pop)
    initial = pop.best_fitness
    history: list[ConvergenceRecord] = []
    terminated = Termination.MAX_ITERATIONS

    if pop.best_fitness <= params.tol:
        terminated = Termination.TOLERANCE_REACHED
    while terminated is not Termination.TOLERANCE_REACHED and pop.t < params.max_iter:
        pop = step(pop, params, space, objective, rng)
        history.append(ConvergenceRecord(pop.t, pop.best_fitness, pop.best_position.copy()))
        if callback is not None:
            callback(pop)
        if pop.best_fitness <= params.tol:
            terminated = Termination.TOLERANCE_REACHED

    return RunResult(
        best_position=pop.best_position.copy(),
        best_fitness=pop.best_fitness,
        iterations_used=pop.t,
        history=history,
        seed=seed,
        terminated=terminated,
        initial_fitness=initial,
    )


def summarize(results: Sequence[RunResult]) -> dict:
    """Batch statistics over independent runs."""
    best = np.array([r.best_fitness for r in results])
    iters = np.array([r.iterations_used for r in results])
    return {
        "runs": len(results),
        "converged": sum(r.terminated is Termination.TOLERANCE_REACHED for r in results),
        "best_fitness_min": float(best.min()),
        "best_fitness_median": float(np.median(best)),
        "best_fitness_max": float(best.max()),
        "iterations_median": float(np.median(iters)),
    }
