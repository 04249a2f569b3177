"""Real-coded genetic algorithm used to minimize the acquisition function.

Simulated binary crossover, polynomial mutation, tournament selection,
generational replacement with elitism. The public operators work on single
individuals; the optimizer drives batched versions of the same kernels so
a whole offspring population is produced with a handful of array ops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .benchmarks import Bounds

__all__ = [
    "GaConfig",
    "OptimizerError",
    "minimize",
    "polynomial_mutation",
    "sbx_crossover",
    "tournament_select",
]


class OptimizerError(RuntimeError):
    """The objective returned a non-finite score."""


@dataclass(frozen=True)
class GaConfig:
    """Genetic-algorithm settings."""

    population_size: int = 50
    generations: int = 100
    crossover_prob: float = 0.9
    mutation_prob: float = 0.1  # per gene; conventionally 1/d
    eta_c: float = 15.0
    eta_m: float = 15.0
    tournament_size: int = 2

    def __post_init__(self) -> None:
        if self.population_size < 4 or self.population_size % 2 != 0:
            raise ValueError("population_size must be even and >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        for name in ("crossover_prob", "mutation_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ValueError("distribution indices must be positive")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")


def _sbx_children(
    p1: np.ndarray, p2: np.ndarray, eta_c: float, b: Bounds, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Batched SBX on parent matrices of shape (k, d)."""
    u = rng.random(p1.shape)
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)),
    )
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return b.clip(c1), b.clip(c2)


def _mutated(
    X: np.ndarray, eta_m: float, pm: float, b: Bounds, rng: np.random.Generator
) -> np.ndarray:
    """Batched polynomial mutation on a matrix of shape (k, d)."""
    gate = rng.random(X.shape) < pm
    u = rng.random(X.shape)
    delta = np.where(
        u < 0.5,
        (2.0 * u) ** (1.0 / (eta_m + 1.0)) - 1.0,
        1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta_m + 1.0)),
    )
    return b.clip(np.where(gate, X + delta * b.width, X))


def sbx_crossover(
    p1: np.ndarray, p2: np.ndarray, eta_c: float, b: Bounds, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover of two parents; children are clipped to
    the box. Before clipping, the children's midpoint equals the parents'
    midpoint in every coordinate."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise ValueError("parents must have equal dimensions")
    c1, c2 = _sbx_children(p1[None, :], p2[None, :], eta_c, b, rng)
    return c1[0], c2[0]


def polynomial_mutation(
    x: np.ndarray, eta_m: float, pm: float, b: Bounds, rng: np.random.Generator
) -> np.ndarray:
    """Polynomial mutation: each gene is perturbed with probability pm by a
    box-width-scaled offset; the result stays inside the box."""
    x = np.asarray(x, dtype=float)
    return _mutated(x[None, :], eta_m, pm, b, rng)[0]


def _tournament_winners(
    count: int, fitness: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Indices of `count` tournament winners (k entrants with replacement)."""
    entrants = rng.integers(0, len(fitness), size=(count, k))
    best = fitness[entrants].argmin(axis=1)
    return entrants[np.arange(count), best]


def tournament_select(
    pop: np.ndarray, fitness: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """The minimum-fitness individual among k uniformly sampled entrants."""
    pop = np.asarray(pop, dtype=float)
    fitness = np.asarray(fitness, dtype=float)
    if len(pop) == 0:
        raise ValueError("population must be non-empty")
    if k < 1:
        raise ValueError("tournament size must be >= 1")
    winner = _tournament_winners(1, fitness, k, rng)[0]
    return pop[winner].copy()


def _checked_scores(objective, X: np.ndarray) -> np.ndarray:
    scores = np.asarray(objective(X), dtype=float)
    if scores.shape != (len(X),):
        raise OptimizerError(
            f"objective returned shape {scores.shape} for {len(X)} points"
        )
    bad = ~np.isfinite(scores)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise OptimizerError(f"non-finite objective value {scores[i]} at point {X[i]}")
    return scores


def minimize(
    objective: Callable[[np.ndarray], np.ndarray],
    b: Bounds,
    cfg: GaConfig,
    rng: np.random.Generator,
    dim: int,
    on_generation: Optional[Callable[[int, float], None]] = None,
) -> tuple[np.ndarray, float]:
    """Minimize a scoring function over the box with a generational RCGA.

    Parameters
    ----------
    objective
        Batched scoring function mapping an (n, d) array to (n,) scores.
    b, cfg, rng, dim
        Search box, GA settings, random stream, and decision dimension.
    on_generation
        Optional hook called as ``on_generation(gen, best_score)`` after
        every generation, including generation 0 (the initial population).

    Returns
    -------
    (best_x, best_score)
        The best individual ever evaluated and its score. Elitism keeps
        the best-so-far score non-increasing across generations.
    """
    n = cfg.population_size
    pop = b.lower + rng.random((n, dim)) * b.width
    fitness = _checked_scores(objective, pop)
    best = int(fitness.argmin())
    best_x, best_score = pop[best].copy(), float(fitness[best])
    if on_generation is not None:
        on_generation(0, best_score)

    for gen in range(1, cfg.generations + 1):
        parents = _tournament_winners(n, fitness, cfg.tournament_size, rng)
        p1, p2 = pop[parents[0::2]], pop[parents[1::2]]
        crossed = rng.random(n // 2) < cfg.crossover_prob
        c1, c2 = _sbx_children(p1, p2, cfg.eta_c, b, rng)
        c1 = np.where(crossed[:, None], c1, p1)
        c2 = np.where(crossed[:, None], c2, p2)
        children = np.empty_like(pop)
        children[0::2] = c1
        children[1::2] = c2
        children = _mutated(children, cfg.eta_m, cfg.mutation_prob, b, rng)

        fitness = _checked_scores(objective, children)
        # Elitism: the best-ever individual replaces the worst child.
        worst = int(fitness.argmax())
        if best_score < fitness[worst]:
            children[worst] = best_x
            fitness[worst] = best_score
        pop = children

        gen_best = int(fitness.argmin())
        if fitness[gen_best] < best_score:
            best_x, best_score = pop[gen_best].copy(), float(fitness[gen_best])
        if on_generation is not None:
            on_generation(gen, best_score)

    return best_x, best_score
