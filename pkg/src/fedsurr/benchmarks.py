"""Expensive black-box benchmark objectives and client feasibility model.

Five standard minimization benchmarks, each with a known optimum value of
0.0, plus an additive-Gaussian noisy wrapper and the per-client infeasible
interval used to simulate non-IID data collection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ProblemId",
    "Bounds",
    "NoiseSpec",
    "bounds",
    "evaluate",
    "evaluate_noisy",
    "is_feasible",
    "optimum_point",
]


class ProblemId(enum.Enum):
    """The benchmark suite."""

    ELLIPSOID = "ellipsoid"
    ACKLEY = "ackley"
    RASTRIGIN = "rastrigin"
    GRIEWANK = "griewank"
    ROSENBROCK = "rosenbrock"

    @classmethod
    def from_name(cls, name: str) -> "ProblemId":
        """Parse a (case-insensitive) problem name."""
        try:
            return cls(name.strip().lower())
        except ValueError:
            known = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown problem {name!r}; expected one of: {known}") from None


@dataclass(frozen=True)
class Bounds:
    """A box with one shared [lower, upper] interval per dimension."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise ValueError(f"invalid bounds: lower={self.lower} must be < upper={self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class NoiseSpec:
    """Magnitude of the additive standard-Gaussian evaluation noise."""

    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"noise level alpha must be in [0, 1], got {self.alpha}")


_BOUNDS = {
    ProblemId.ELLIPSOID: Bounds(-5.12, 5.12),
    ProblemId.ACKLEY: Bounds(-32.768, 32.768),
    ProblemId.RASTRIGIN: Bounds(-5.12, 5.12),
    ProblemId.GRIEWANK: Bounds(-600.0, 600.0),
    ProblemId.ROSENBROCK: Bounds(-2.048, 2.048),
}


def bounds(problem: ProblemId) -> Bounds:
    """Standard search box of a benchmark."""
    return _BOUNDS[problem]


def optimum_point(problem: ProblemId, dim: int) -> np.ndarray:
    """Global minimizer (where the objective value is exactly 0.0)."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if problem is ProblemId.ROSENBROCK:
        return np.ones(dim)
    return np.zeros(dim)


def _ellipsoid(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1)
    return float(np.sum(i * x * x))


def _ackley(x: np.ndarray) -> float:
    d = x.size
    # Terms paired so both cancel exactly at the origin.
    term1 = 20.0 * (1.0 - np.exp(-0.2 * np.sqrt(np.sum(x * x) / d)))
    term2 = np.exp(1.0) - np.exp(np.sum(np.cos(2.0 * np.pi * x)) / d)
    return float(term1 + term2)


def _rastrigin(x: np.ndarray) -> float:
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def _griewank(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1)
    return float(1.0 + np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))))


def _rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


_EVALUATORS = {
    ProblemId.ELLIPSOID: _ellipsoid,
    ProblemId.ACKLEY: _ackley,
    ProblemId.RASTRIGIN: _rastrigin,
    ProblemId.GRIEWANK: _griewank,
    ProblemId.ROSENBROCK: _rosenbrock,
}


def evaluate(problem: ProblemId, x: np.ndarray) -> float:
    """Evaluate a benchmark at a point inside its box.

    Deterministic; equals 0.0 at the problem's global optimum. Raises
    ``ValueError`` for an empty vector or an out-of-bounds point.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"decision vector must be 1-D with d >= 1, got shape {x.shape}")
    if not bounds(problem).contains(x):
        raise ValueError(f"point outside the {problem.value} box {bounds(problem)}")
    return _EVALUATORS[problem](x)


def evaluate_noisy(
    problem: ProblemId,
    x: np.ndarray,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> float:
    """Evaluate with additive noise ``alpha * xi``, ``xi ~ N(0, 1)`` from rng."""
    return evaluate(problem, x) + noise.alpha * float(rng.standard_normal())


def is_feasible(
    k: int,
    tau: int,
    x: np.ndarray,
    n_clients: int,
    b: Bounds,
    dim: int = 0,
) -> bool:
    """Whether client ``k`` (1-based) can sample ``x``.

    Client ``k`` owns the infeasible interval
    ``[lb + (k-1) g, min(lb + (k+tau-1) g, ub)]`` with ``g = (ub - lb) / N``
    on one designated dimension; a point is feasible iff that coordinate
    falls outside the interval. ``tau = 0`` disables the constraint (IID).
    """
    if not 1 <= k <= n_clients:
        raise ValueError(f"client index k={k} out of range 1..{n_clients}")
    if tau < 0:
        raise ValueError(f"tau must be a non-negative integer, got {tau}")
    if tau == 0:
        return True
    x = np.asarray(x, dtype=float)
    gap = b.width / n_clients
    lo = b.lower + (k - 1) * gap
    hi = min(b.lower + (k + tau - 1) * gap, b.upper)
    return not lo <= float(x[dim]) <= hi
