"""Server-side aggregation of uploaded RBFN surrogates.

Plain node-index averaging (FedAvg style) breaks down once gradient
training has shifted corresponding Gaussian nodes to different places in
different local models. Sorted averaging first reorders every model's
nodes by the squared norm of their centers so that similar nodes are
averaged together.
"""

from __future__ import annotations

import numpy as np

from .surrogate import RbfnParams

__all__ = ["client_weights", "index_average", "matching_metric", "sorted_average"]


def client_weights(counts: list[int]) -> np.ndarray:
    """Aggregation weights proportional to the clients' archive sizes."""
    if len(counts) == 0:
        raise ValueError("need at least one client count")
    counts = np.asarray(counts, dtype=float)
    if np.any(counts < 1):
        raise ValueError(f"all archive sizes must be >= 1, got {counts.tolist()}")
    return counts / counts.sum()


def matching_metric(centers: np.ndarray) -> np.ndarray:
    """Per-node squared sum of the center coordinates."""
    centers = np.asarray(centers, dtype=float)
    return (centers**2).sum(axis=1)


def _sort_nodes(model: RbfnParams) -> RbfnParams:
    # Stable sort so equal-metric nodes keep their original order.
    order = np.argsort(matching_metric(model.centers), kind="stable")
    return RbfnParams(
        centers=model.centers[order],
        weights=model.weights[order],
        spreads=model.spreads[order],
        bias=model.bias,
    )


def _check_aggregation_args(models: list[RbfnParams], p: np.ndarray) -> np.ndarray:
    if len(models) == 0:
        raise ValueError("need at least one model to aggregate")
    shape = models[0].centers.shape
    for k, model in enumerate(models):
        if model.centers.shape != shape:
            raise ValueError(
                f"model {k} has node shape {model.centers.shape}, expected {shape}"
            )
    p = np.asarray(p, dtype=float)
    if p.shape != (len(models),):
        raise ValueError(f"got {len(models)} models but {p.size} weights")
    return p


def _weighted_average(models: list[RbfnParams], p: np.ndarray) -> RbfnParams:
    centers = sum(pk * m.centers for pk, m in zip(p, models))
    weights = sum(pk * m.weights for pk, m in zip(p, models))
    spreads = sum(pk * m.spreads for pk, m in zip(p, models))
    bias = float(sum(pk * m.bias for pk, m in zip(p, models)))
    return RbfnParams(centers=centers, weights=weights, spreads=spreads, bias=bias)


def sorted_average(models: list[RbfnParams], p: np.ndarray) -> RbfnParams:
    """Aggregate local models node-wise after sorting each by its matching
    vector in ascending order."""
    p = _check_aggregation_args(models, p)
    return _weighted_average([_sort_nodes(m) for m in models], p)


def index_average(models: list[RbfnParams], p: np.ndarray) -> RbfnParams:
    """Aggregate node-wise by raw node index, without sorting (FedAvg)."""
    p = _check_aggregation_args(models, p)
    return _weighted_average(models, p)
