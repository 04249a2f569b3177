"""Command-line entry point: single experiments and parameter sweeps."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from .config import ACQUISITION_VARIANTS, AGGREGATORS, ExperimentConfig, default_ga_config
from .evolution import GaConfig
from .harness import run_experiment, write_experiment_artifacts

__all__ = ["build_parser", "main"]


def _add_run_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", required=True, help="ellipsoid|ackley|rastrigin|griewank|rosenbrock")
    p.add_argument("--dim", type=int, required=True, help="number of decision variables")
    p.add_argument("--clients", type=int, default=100, help="total number of clients N")
    p.add_argument("--lambda", dest="participation", type=float, default=0.1,
                   help="participation ratio per round")
    p.add_argument("--epochs", type=int, default=20, help="local training epochs E")
    p.add_argument("--lr", type=float, default=0.12, help="local learning rate")
    p.add_argument("--nodes", type=int, default=0, help="RBF nodes m (default 2d+1)")
    p.add_argument("--mu", type=float, default=2.0, help="LCB trade-off coefficient")
    p.add_argument("--tau", type=int, default=0, help="infeasible-domain width (0 = IID)")
    p.add_argument("--alpha", type=float, default=0.0, help="evaluation noise level in [0, 1]")
    p.add_argument("--acq", choices=ACQUISITION_VARIANTS, default="flcb")
    p.add_argument("--agg", choices=AGGREGATORS, default="sorted")
    p.add_argument("--feasible-dim", type=int, default=0,
                   help="dimension inspected by the feasibility test")
    p.add_argument("--runs", type=int, default=20, help="independent runs")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--pop", type=int, default=50, help="GA population size")
    p.add_argument("--generations", type=int, default=100, help="GA generations per round")
    p.add_argument("--pc", type=float, default=0.9, help="GA crossover probability")
    p.add_argument("--pm", type=float, default=None, help="GA per-gene mutation probability (default 1/d)")
    p.add_argument("--eta-c", type=float, default=15.0, help="SBX distribution index")
    p.add_argument("--eta-m", type=float, default=15.0, help="mutation distribution index")
    p.add_argument("--tournament", type=int, default=2, help="tournament size")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--plot", action="store_true", help="also render a convergence plot")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedsurr",
        description="Federated surrogate-assisted evolutionary optimization simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment (multiple seeded runs)")
    _add_run_arguments(run)
    sweep = sub.add_parser("sweep", help="run a grid of experiments from a config file")
    sweep.add_argument("--config", required=True, help="JSON file with base settings and a 'grid'")
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.add_argument("--plot", action="store_true", help="render a plot per grid cell")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    ga = GaConfig(
        population_size=args.pop,
        generations=args.generations,
        crossover_prob=args.pc,
        mutation_prob=args.pm if args.pm is not None else 1.0 / args.dim,
        eta_c=args.eta_c,
        eta_m=args.eta_m,
        tournament_size=args.tournament,
    )
    return ExperimentConfig(
        problem=args.problem,
        dim=args.dim,
        clients=args.clients,
        participation=args.participation,
        epochs=args.epochs,
        learning_rate=args.lr,
        nodes=args.nodes,
        mu=args.mu,
        tau=args.tau,
        alpha=args.alpha,
        acquisition=args.acq,
        aggregator=args.agg,
        feasible_dim=args.feasible_dim,
        ga=ga,
        runs=args.runs,
        master_seed=args.seed,
    )


def _config_from_dict(base: dict) -> ExperimentConfig:
    fields = dict(base)
    ga_fields = fields.pop("ga", {})
    dim = int(fields["dim"])
    ga = default_ga_config(dim)
    if ga_fields:
        ga = GaConfig(
            population_size=int(ga_fields.get("population_size", ga.population_size)),
            generations=int(ga_fields.get("generations", ga.generations)),
            crossover_prob=float(ga_fields.get("crossover_prob", ga.crossover_prob)),
            mutation_prob=float(ga_fields.get("mutation_prob", ga.mutation_prob)),
            eta_c=float(ga_fields.get("eta_c", ga.eta_c)),
            eta_m=float(ga_fields.get("eta_m", ga.eta_m)),
            tournament_size=int(ga_fields.get("tournament_size", ga.tournament_size)),
        )
    return ExperimentConfig(ga=ga, **fields)


def _run_command(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    summary, traces = run_experiment(cfg)
    out = write_experiment_artifacts(summary, traces, args.out, plot=args.plot)
    print(
        f"{cfg.problem.value} d={cfg.dim}: mean final best "
        f"{summary.mean:.6g} +/- {summary.std:.6g} over {cfg.runs} runs -> {out}"
    )
    return 0


def _sweep_command(args: argparse.Namespace) -> int:
    spec = json.loads(Path(args.config).read_text())
    grid = spec.pop("grid", {})
    if not isinstance(grid, dict):
        raise ValueError("'grid' must map config fields to lists of values")
    keys = sorted(grid)
    combos = list(itertools.product(*(grid[k] for k in keys))) if keys else [()]
    out_root = Path(args.out)
    for combo in combos:
        overrides = dict(zip(keys, combo))
        cfg = _config_from_dict({**spec, **overrides})
        name = "_".join(f"{k}={v}" for k, v in overrides.items()) or "base"
        summary, traces = run_experiment(cfg)
        write_experiment_artifacts(summary, traces, out_root / name, plot=args.plot)
        print(f"{name}: mean final best {summary.mean:.6g} +/- {summary.std:.6g}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run_command(args)
        return _sweep_command(args)
    except Exception as err:
        print(f"fedsurr: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
