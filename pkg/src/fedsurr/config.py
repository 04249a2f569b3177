"""Experiment configuration shared by the federation loop and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

from .benchmarks import ProblemId
from .evolution import GaConfig

__all__ = ["ACQUISITION_VARIANTS", "AGGREGATORS", "ExperimentConfig", "default_ga_config"]

ACQUISITION_VARIANTS = ("flcb", "llcb", "glcb")
AGGREGATORS = ("sorted", "index")


def default_ga_config(dim: int) -> GaConfig:
    """Conventional RCGA settings: per-gene mutation probability 1/d."""
    return GaConfig(mutation_prob=1.0 / dim)


@dataclass
class ExperimentConfig:
    """One experiment: a problem plus every protocol and model parameter.

    By default the federation runs 100 clients at participation ratio 0.1,
    trains each local surrogate for 20 epochs at learning rate 0.12 with
    2d+1 RBF nodes, and spends a budget of 11d true evaluations (5d on the
    initial design plus one per round for 6d rounds).
    """

    problem: ProblemId
    dim: int
    clients: int = 100
    participation: float = 0.1
    epochs: int = 20
    learning_rate: float = 0.12
    batch_size: int = 5
    nodes: int = 0  # 0 means the 2d+1 default
    mu: float = 2.0
    tau: int = 0
    alpha: float = 0.0
    acquisition: str = "flcb"
    aggregator: str = "sorted"
    feasible_dim: int = 0
    ga: GaConfig = field(default=None)  # type: ignore[assignment]
    runs: int = 20
    master_seed: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.problem, str):
            self.problem = ProblemId.from_name(self.problem)
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.clients < 1:
            raise ValueError("clients must be >= 1")
        if not 0.0 < self.participation <= 1.0:
            raise ValueError("participation ratio must be in (0, 1]")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate <= 0.0:
            raise ValueError("learning rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.nodes == 0:
            self.nodes = 2 * self.dim + 1
        if self.nodes < 1:
            raise ValueError("nodes must be >= 1")
        if self.nodes > 5 * self.dim:
            raise ValueError(
                f"nodes={self.nodes} exceeds the {5 * self.dim} initial design points"
            )
        if self.mu < 0.0:
            raise ValueError("mu must be >= 0")
        if self.tau < 0:
            raise ValueError("tau must be a non-negative integer")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.acquisition not in ACQUISITION_VARIANTS:
            raise ValueError(f"acquisition must be one of {ACQUISITION_VARIANTS}")
        if self.aggregator not in AGGREGATORS:
            raise ValueError(f"aggregator must be one of {AGGREGATORS}")
        if not 0 <= self.feasible_dim < self.dim:
            raise ValueError("feasible_dim must index a dimension")
        if self.ga is None:
            self.ga = default_ga_config(self.dim)
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

    @property
    def init_points(self) -> int:
        return 5 * self.dim

    @property
    def n_rounds(self) -> int:
        return 6 * self.dim

    @property
    def fe_budget(self) -> int:
        return 11 * self.dim
