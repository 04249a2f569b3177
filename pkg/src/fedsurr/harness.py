"""Multi-seed experiment execution and artifact emission.

Every run of an experiment is seeded as ``master_seed + run_index``, so the
summary file (full config echo plus per-run finals) is enough to regenerate
any reported number.
"""

from __future__ import annotations

import configparser
import csv
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .evolution import GaConfig
from .federation import RunTrace, run_optimization

__all__ = [
    "ExperimentSummary",
    "TRACE_HEADER",
    "emit_summary",
    "emit_trace",
    "mean_best_curve",
    "parse_summary",
    "render_plot",
    "run_experiment",
]

TRACE_HEADER = ["run_id", "round", "fe", "x_p_fitness", "best_fitness"]


@dataclass
class ExperimentSummary:
    """Per-run final best fitness values and their mean/std over the runs."""

    config: ExperimentConfig
    finals: list[float]
    mean: float
    std: float
    wall_clock: list[float]


def run_experiment(cfg: ExperimentConfig) -> tuple[ExperimentSummary, list[RunTrace]]:
    """Execute ``cfg.runs`` independent runs seeded master_seed + 0, 1, ...

    The summary aggregates each run's final best fitness into mean and
    population standard deviation (divisor = runs).
    """
    traces = []
    finals = []
    wall_clock = []
    for i in range(cfg.runs):
        seed = cfg.master_seed + i
        start = time.perf_counter()
        try:
            trace = run_optimization(cfg, seed, run_id=i)
        except Exception as err:
            raise RuntimeError(f"run {i} (seed {seed}) failed: {err}") from err
        wall_clock.append(time.perf_counter() - start)
        traces.append(trace)
        finals.append(trace.records[-1].best_fitness)
    summary = ExperimentSummary(
        config=cfg,
        finals=finals,
        mean=float(np.mean(finals)),
        std=float(np.std(finals)),
        wall_clock=wall_clock,
    )
    return summary, traces


def emit_trace(trace: RunTrace, destination) -> None:
    """Write one run's trace as CSV, one row per round plus the round-0
    (post-initialization) state."""
    if not trace.records:
        raise ValueError("trace has no records")
    with open(destination, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for rec in trace.records:
            writer.writerow(
                [trace.run_id, rec.round_index, rec.fe_count, repr(rec.x_p_fitness), repr(rec.best_fitness)]
            )


def emit_summary(s: ExperimentSummary, destination) -> None:
    """Write the summary as a sectioned key-value document (INI syntax)."""
    doc = configparser.ConfigParser()
    cfg = s.config
    doc["experiment"] = {
        "problem": cfg.problem.value,
        "dim": str(cfg.dim),
        "clients": str(cfg.clients),
        "participation": repr(cfg.participation),
        "epochs": str(cfg.epochs),
        "learning_rate": repr(cfg.learning_rate),
        "nodes": str(cfg.nodes),
        "mu": repr(cfg.mu),
        "tau": str(cfg.tau),
        "alpha": repr(cfg.alpha),
        "acquisition": cfg.acquisition,
        "aggregator": cfg.aggregator,
        "feasible_dim": str(cfg.feasible_dim),
        "runs": str(cfg.runs),
        "master_seed": str(cfg.master_seed),
    }
    doc["ga"] = {
        "population_size": str(cfg.ga.population_size),
        "generations": str(cfg.ga.generations),
        "crossover_prob": repr(cfg.ga.crossover_prob),
        "mutation_prob": repr(cfg.ga.mutation_prob),
        "eta_c": repr(cfg.ga.eta_c),
        "eta_m": repr(cfg.ga.eta_m),
        "tournament_size": str(cfg.ga.tournament_size),
    }
    doc["results"] = {f"run_{i}": repr(v) for i, v in enumerate(s.finals)}
    doc["timing"] = {f"run_{i}": repr(v) for i, v in enumerate(s.wall_clock)}
    doc["stats"] = {"mean": repr(s.mean), "std": repr(s.std)}
    with open(destination, "w") as fh:
        doc.write(fh)


def parse_summary(source) -> ExperimentSummary:
    """Read a summary document back; inverse of :func:`emit_summary`."""
    doc = configparser.ConfigParser()
    with open(source) as fh:
        doc.read_file(fh)
    exp = doc["experiment"]
    ga = doc["ga"]
    cfg = ExperimentConfig(
        problem=exp["problem"],
        dim=exp.getint("dim"),
        clients=exp.getint("clients"),
        participation=exp.getfloat("participation"),
        epochs=exp.getint("epochs"),
        learning_rate=exp.getfloat("learning_rate"),
        nodes=exp.getint("nodes"),
        mu=exp.getfloat("mu"),
        tau=exp.getint("tau"),
        alpha=exp.getfloat("alpha"),
        acquisition=exp["acquisition"],
        aggregator=exp["aggregator"],
        feasible_dim=exp.getint("feasible_dim"),
        ga=GaConfig(
            population_size=ga.getint("population_size"),
            generations=ga.getint("generations"),
            crossover_prob=ga.getfloat("crossover_prob"),
            mutation_prob=ga.getfloat("mutation_prob"),
            eta_c=ga.getfloat("eta_c"),
            eta_m=ga.getfloat("eta_m"),
            tournament_size=ga.getint("tournament_size"),
        ),
        runs=exp.getint("runs"),
        master_seed=exp.getint("master_seed"),
    )
    n = cfg.runs
    finals = [doc["results"].getfloat(f"run_{i}") for i in range(n)]
    wall_clock = [doc["timing"].getfloat(f"run_{i}") for i in range(n)]
    return ExperimentSummary(
        config=cfg,
        finals=finals,
        mean=doc["stats"].getfloat("mean"),
        std=doc["stats"].getfloat("std"),
        wall_clock=wall_clock,
    )


def mean_best_curve(traces: list[RunTrace]) -> tuple[np.ndarray, np.ndarray]:
    """FE grid and across-run mean of the best-so-far fitness."""
    if not traces:
        raise ValueError("need at least one trace")
    fe = np.array([rec.fe_count for rec in traces[0].records])
    for t in traces[1:]:
        other = [rec.fe_count for rec in t.records]
        if len(other) != len(fe) or np.any(other != fe):
            raise ValueError("traces have mismatching FE grids")
    best = np.array([[rec.best_fitness for rec in t.records] for t in traces])
    return fe, best.mean(axis=0)


def render_plot(traces: list[RunTrace], destination) -> None:
    """Render mean best fitness vs FE as a vector image.

    Uses a natural-log fitness axis when every plotted value is positive;
    otherwise falls back to a linear axis with a notice in the title.
    """
    fe, mean_best = mean_best_curve(traces)
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    title = "Convergence profile"
    if np.all(mean_best > 0.0):
        ax.plot(fe, np.log(mean_best))
        ax.set_ylabel("ln(mean best fitness)")
    else:
        ax.plot(fe, mean_best)
        ax.set_ylabel("mean best fitness")
        title += " (linear axis: non-positive values)"
    ax.set_title(title)
    ax.set_xlabel("fitness evaluations")
    ax.set_xlim(fe[0], fe[-1])
    fig.tight_layout()
    fig.savefig(destination)
    plt.close(fig)


def write_experiment_artifacts(
    summary: ExperimentSummary,
    traces: list[RunTrace],
    out_dir,
    plot: bool = False,
) -> Path:
    """Emit summary.txt, one trace CSV per run, and optionally the plot."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    emit_summary(summary, out / "summary.txt")
    for trace in traces:
        emit_trace(trace, out / f"trace_run{trace.run_id}.csv")
    if plot:
        render_plot(traces, out / "convergence.svg")
    return out
