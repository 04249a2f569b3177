"""The federated optimization loop.

The server owns the search: it aggregates the surrogates uploaded by the
previous round's participants, minimizes the acquisition function with the
GA, and broadcasts the winning point to the current participants. Each
participant synchronizes its surrogate with the global one, samples the
broadcast point with its own (possibly noisy, possibly constrained)
objective, retrains on its full archive, and uploads the result. Raw
(x, y) pairs never leave the clients; the server sees only model
parameters, archive sizes, and the points it broadcast itself.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .acquisition import VARIANTS, AcquisitionContext
from .aggregation import client_weights, index_average, sorted_average
from .benchmarks import NoiseSpec, bounds, evaluate, evaluate_noisy, is_feasible
from .config import ExperimentConfig
from .evolution import minimize
from .sampling import latin_hypercube, spawn_stream
from .surrogate import (
    Dataset,
    RbfnParams,
    TrainingDivergenceError,
    from_flat,
    init_surrogate,
    to_flat,
    train,
)

__all__ = [
    "ClientState",
    "RngBundle",
    "RoundRecord",
    "RunTrace",
    "ServerState",
    "Upload",
    "assert_no_client_data",
    "initialize",
    "run_optimization",
    "run_round",
    "select_participants",
]


@dataclass(eq=False)
class ClientState:
    """One simulated client: id (1-based), private archive, local surrogate."""

    client_id: int
    archive: Dataset
    model: RbfnParams


@dataclass(eq=False)
class Upload:
    """What crosses the wire to the server: parameters and archive size only."""

    client_id: int
    model: RbfnParams
    archive_size: int


@dataclass(eq=False)
class ServerState:
    global_model: RbfnParams | None
    uploads: list[Upload]
    fe_count: int
    best_x: np.ndarray
    best_fitness: float


@dataclass(eq=False)
class RoundRecord:
    """Telemetry for one round (round 0 is the post-initialization state)."""

    round_index: int
    fe_count: int
    x_p: np.ndarray
    x_p_fitness: float
    best_fitness: float


@dataclass(eq=False)
class RunTrace:
    run_id: int
    seed: int
    records: list[RoundRecord]


@dataclass(eq=False)
class RngBundle:
    """Labeled substreams of one master seed, so results do not depend on
    the order in which clients are processed."""

    design: np.random.Generator
    participants: np.random.Generator
    ga: np.random.Generator
    clients: dict[int, np.random.Generator]

    @classmethod
    def from_master_seed(cls, master_seed: int, n_clients: int) -> "RngBundle":
        return cls(
            design=spawn_stream(master_seed, "design"),
            participants=spawn_stream(master_seed, "participants"),
            ga=spawn_stream(master_seed, "ga"),
            clients={
                k: spawn_stream(master_seed, f"client-{k}") for k in range(1, n_clients + 1)
            },
        )


def assert_no_client_data(server: ServerState) -> None:
    """Data-locality audit: fail if any client archive is reachable from the
    server state."""
    seen: set[int] = set()

    def walk(obj) -> None:
        if id(obj) in seen:
            return
        seen.add(id(obj))
        if isinstance(obj, Dataset):
            raise RuntimeError("data-locality violation: client archive found in server state")
        if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            for f in dataclasses.fields(obj):
                walk(getattr(obj, f.name))
        elif isinstance(obj, (list, tuple, set)):
            for item in obj:
                walk(item)
        elif isinstance(obj, dict):
            for key, value in obj.items():
                walk(key)
                walk(value)

    walk(server)


def initialize(cfg: ExperimentConfig, streams: RngBundle) -> tuple[ServerState, list[ClientState]]:
    """Sample the 5d-point initial design, build every client's archive and
    initial surrogate, and charge the design against the FE budget."""
    if cfg.nodes > cfg.init_points:
        raise ValueError(
            f"{cfg.nodes} RBF nodes cannot be placed on {cfg.init_points} initial points"
        )
    box = bounds(cfg.problem)
    noise = NoiseSpec(cfg.alpha)
    design = latin_hypercube(cfg.init_points, cfg.dim, box, streams.design)

    clients = []
    for k in range(1, cfg.clients + 1):
        rng = streams.clients[k]
        targets = np.array([evaluate_noisy(cfg.problem, x, noise, rng) for x in design])
        archive = Dataset(design.copy(), targets)
        model = train(
            init_surrogate(archive, cfg.nodes, rng),
            archive,
            cfg.epochs,
            cfg.learning_rate,
            batch_size=cfg.batch_size,
            standardize=True,
            spread_step_scale=box.width**2,
        )
        clients.append(ClientState(client_id=k, archive=archive, model=model))

    true_values = np.array([evaluate(cfg.problem, x) for x in design])
    best = int(true_values.argmin())
    server = ServerState(
        global_model=None,
        uploads=[],
        fe_count=cfg.init_points,
        best_x=design[best].copy(),
        best_fitness=float(true_values[best]),
    )
    return server, clients


def select_participants(n_clients: int, ratio: float, rng: np.random.Generator) -> list[int]:
    """Round(ratio * N) distinct client ids, uniformly without replacement."""
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"participation ratio must be in (0, 1], got {ratio}")
    count = round(ratio * n_clients)
    if count == 0:
        raise ValueError(f"ratio {ratio} selects zero of {n_clients} clients")
    ids = rng.choice(n_clients, size=count, replace=False) + 1
    return sorted(int(k) for k in ids)


def _aggregate(cfg: ExperimentConfig, uploads: list[Upload]) -> tuple[RbfnParams, AcquisitionContext]:
    p = client_weights([u.archive_size for u in uploads])
    models = [u.model for u in uploads]
    combine = sorted_average if cfg.aggregator == "sorted" else index_average
    w = combine(models, p)
    return w, AcquisitionContext(global_model=w, local_models=models, weights=p, mu=cfg.mu)


def run_round(
    server: ServerState,
    clients: list[ClientState],
    cfg: ExperimentConfig,
    streams: RngBundle,
    round_index: int,
) -> RoundRecord:
    """One federated round: aggregate, search, broadcast, sample, retrain.

    Aggregation consumes the uploads held by the server (the previous
    round's participants; in round 1, the initial surrogates of the round's
    own participant set). The round always costs exactly one fitness
    evaluation, even when every participant finds the broadcast point
    infeasible and no new data is sampled.
    """
    box = bounds(cfg.problem)
    noise = NoiseSpec(cfg.alpha)
    participants = select_participants(cfg.clients, cfg.participation, streams.participants)

    uploads = server.uploads
    if not uploads:
        uploads = [
            Upload(k, clients[k - 1].model, len(clients[k - 1].archive)) for k in participants
        ]
    global_model, ctx = _aggregate(cfg, uploads)
    server.global_model = global_model

    acquisition = VARIANTS[cfg.acquisition]
    x_p, _ = minimize(lambda X: acquisition(ctx, X), box, cfg.ga, streams.ga, cfg.dim)

    new_uploads = []
    for k in participants:
        client = clients[k - 1]
        if is_feasible(k, cfg.tau, x_p, cfg.clients, box, cfg.feasible_dim):
            y = evaluate_noisy(cfg.problem, x_p, noise, streams.clients[k])
            client.archive = client.archive.with_sample(x_p, y)
        try:
            client.model = train(
                global_model,
                client.archive,
                cfg.epochs,
                cfg.learning_rate,
                batch_size=cfg.batch_size,
                standardize=True,
                spread_step_scale=box.width**2,
            )
        except TrainingDivergenceError as err:
            raise TrainingDivergenceError(
                f"round {round_index}, client {k}: {err}"
            ) from err
        wire = to_flat(client.model)
        new_uploads.append(
            Upload(k, from_flat(wire, client.model.n_nodes, client.model.dim), len(client.archive))
        )

    server.uploads = new_uploads
    server.fe_count += 1
    true_fitness = evaluate(cfg.problem, x_p)
    if true_fitness < server.best_fitness:
        server.best_x = x_p.copy()
        server.best_fitness = true_fitness
    assert_no_client_data(server)
    return RoundRecord(
        round_index=round_index,
        fe_count=server.fe_count,
        x_p=x_p,
        x_p_fitness=true_fitness,
        best_fitness=server.best_fitness,
    )


def run_optimization(cfg: ExperimentConfig, master_seed: int, run_id: int = 0) -> RunTrace:
    """Run one full optimization: 5d-point initialization plus 6d rounds,
    spending exactly the 11d-evaluation budget. Fully determined by
    (cfg, master_seed)."""
    streams = RngBundle.from_master_seed(master_seed, cfg.clients)
    server, clients = initialize(cfg, streams)
    records = [
        RoundRecord(
            round_index=0,
            fe_count=server.fe_count,
            x_p=server.best_x.copy(),
            x_p_fitness=server.best_fitness,
            best_fitness=server.best_fitness,
        )
    ]
    round_index = 0
    while server.fe_count < cfg.fe_budget:
        round_index += 1
        records.append(run_round(server, clients, cfg, streams, round_index))
    return RunTrace(run_id=run_id, seed=master_seed, records=records)
