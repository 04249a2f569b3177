"""Radial-basis-function network surrogate: Gaussian basis regression with
k-means center placement and full-batch gradient training on a client archive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Dataset",
    "RbfnParams",
    "TrainingDivergenceError",
    "compute_spreads",
    "from_flat",
    "init_surrogate",
    "kmeans",
    "mse_gradients",
    "mse_loss",
    "predict",
    "predict_many",
    "to_flat",
    "train",
]

_MIN_SPREAD = 1e-6
_KMEANS_MAX_ITER = 100
_KMEANS_TOL = 1e-8


class TrainingDivergenceError(RuntimeError):
    """Gradient training produced a non-finite loss or parameter."""


@dataclass(eq=False)
class Dataset:
    """A client archive of (decision vector, observed fitness) pairs."""

    inputs: np.ndarray  # (n, d)
    targets: np.ndarray  # (n,)

    def __post_init__(self) -> None:
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.targets = np.asarray(self.targets, dtype=float)
        if self.inputs.ndim != 2 or self.targets.ndim != 1:
            raise ValueError("inputs must be (n, d), targets must be (n,)")
        if len(self.inputs) != len(self.targets):
            raise ValueError(
                f"row mismatch: {len(self.inputs)} inputs vs {len(self.targets)} targets"
            )
        if len(self.inputs) == 0:
            raise ValueError("dataset must hold at least one sample")

    def __len__(self) -> int:
        return len(self.inputs)

    def with_sample(self, x: np.ndarray, y: float) -> "Dataset":
        """A new dataset with one more (x, y) pair appended."""
        return Dataset(
            np.vstack([self.inputs, np.asarray(x, dtype=float)]),
            np.append(self.targets, float(y)),
        )


@dataclass(eq=False)
class RbfnParams:
    """All trainable parameters of one RBFN surrogate.

    Prediction is ``sum_j weights[j] * exp(-||x - centers[j]||^2 /
    (2 spreads[j]^2)) + bias``.
    """

    centers: np.ndarray  # (m, d)
    weights: np.ndarray  # (m,)
    spreads: np.ndarray  # (m,), strictly positive
    bias: float

    def __post_init__(self) -> None:
        self.centers = np.asarray(self.centers, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.spreads = np.asarray(self.spreads, dtype=float)
        self.bias = float(self.bias)
        if self.centers.ndim != 2 or self.centers.shape[0] < 1:
            raise ValueError("centers must be an (m, d) matrix with m >= 1")
        m = self.centers.shape[0]
        if self.weights.shape != (m,) or self.spreads.shape != (m,):
            raise ValueError("weights and spreads must both have one entry per center")
        if not np.all(self.spreads > 0.0):
            raise ValueError("spreads must be strictly positive")

    @property
    def n_nodes(self) -> int:
        return self.centers.shape[0]

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def copy(self) -> "RbfnParams":
        return RbfnParams(self.centers.copy(), self.weights.copy(), self.spreads.copy(), self.bias)


class Gradients(NamedTuple):
    """Analytic gradient of the MSE loss for each parameter block."""

    centers: np.ndarray
    weights: np.ndarray
    spreads: np.ndarray
    bias: float


def kmeans(X: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    """Lloyd's algorithm on the rows of X, returning m centers.

    Centers are initialized from m distinct rows sampled without
    replacement; empty clusters are re-seeded from the point farthest from
    its assigned center. Stops at convergence (max center movement below
    1e-8) or after 100 iterations.
    """
    X = np.asarray(X, dtype=float)
    n = len(X)
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    centers = X[rng.choice(n, size=m, replace=False)].copy()
    for _ in range(_KMEANS_MAX_ITER):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        new_centers = centers.copy()
        for j in range(m):
            mask = assign == j
            if mask.any():
                new_centers[j] = X[mask].mean(axis=0)
        empty = [j for j in range(m) if not (assign == j).any()]
        if empty:
            own_dist = d2[np.arange(n), assign].copy()
            for j in empty:
                far = int(own_dist.argmax())
                new_centers[j] = X[far]
                own_dist[far] = -1.0
        movement = np.abs(new_centers - centers).max()
        centers = new_centers
        if movement < _KMEANS_TOL:
            break
    return centers


def compute_spreads(centers: np.ndarray) -> np.ndarray:
    """Shared Gaussian spread ``d_max / sqrt(2m)`` from the maximum pairwise
    center distance; falls back to 1.0 when no positive distance exists."""
    centers = np.asarray(centers, dtype=float)
    m = len(centers)
    if m == 1:
        return np.ones(1)
    d2 = ((centers[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    d_max = float(np.sqrt(d2.max()))
    if d_max == 0.0:
        return np.ones(m)
    return np.full(m, d_max / np.sqrt(2.0 * m))


def _design_matrix(p: RbfnParams, X: np.ndarray):
    diff = X[:, None, :] - p.centers[None, :, :]  # (n, m, d)
    d2 = np.einsum("nmd,nmd->nm", diff, diff)
    phi = np.exp(-d2 / (2.0 * p.spreads**2))
    return diff, d2, phi


def predict_many(p: RbfnParams, X: np.ndarray) -> np.ndarray:
    """Predict a batch of points; X is (n, d), result is (n,)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != p.dim:
        raise ValueError(f"expected points of dimension {p.dim}, got shape {X.shape}")
    _, _, phi = _design_matrix(p, X)
    return phi @ p.weights + p.bias


def predict(p: RbfnParams, x: np.ndarray) -> float:
    """Predict a single point."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D decision vector, got shape {x.shape}")
    return float(predict_many(p, x[None, :])[0])


def mse_loss(p: RbfnParams, data: Dataset) -> float:
    """Mean squared prediction error over a dataset."""
    resid = predict_many(p, data.inputs) - data.targets
    return float(resid @ resid) / len(data)


def _gradient_pass(
    centers: np.ndarray,
    weights: np.ndarray,
    spreads: np.ndarray,
    bias: float,
    X: np.ndarray,
    y: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray, float]:
    """One forward/backward pass over raw parameter arrays."""
    n = len(X)
    diff = X[:, None, :] - centers
    d2 = np.square(diff).sum(axis=2)
    phi = np.exp(d2 / (-2.0 * spreads * spreads))
    resid = phi @ weights + bias - y
    loss = float(resid @ resid) / n
    scale = 2.0 / n
    weighted = resid[:, None] * phi
    grad_w = scale * (phi.T @ resid)
    grad_b = scale * float(resid.sum())
    grad_c = scale * (weights / (spreads * spreads))[:, None] * np.einsum("nm,nmd->md", weighted, diff)
    grad_s = scale * (weights / spreads**3) * (weighted * d2).sum(axis=0)
    return loss, grad_c, grad_w, grad_s, grad_b


def mse_gradients(p: RbfnParams, data: Dataset) -> tuple[float, Gradients]:
    """MSE loss and its analytic gradient w.r.t. every parameter block."""
    loss, grad_c, grad_w, grad_s, grad_b = _gradient_pass(
        p.centers, p.weights, p.spreads, p.bias, data.inputs, data.targets
    )
    return loss, Gradients(centers=grad_c, weights=grad_w, spreads=grad_s, bias=grad_b)


def train(
    p: RbfnParams,
    data: Dataset,
    epochs: int,
    rate: float,
    batch_size: int | None = None,
    standardize: bool = False,
    spread_step_scale: float = 1.0,
    shuffle_seed: int | None = None,
) -> RbfnParams:
    """Run ``epochs`` passes of gradient descent on the MSE loss.

    All parameter blocks (centers, weights, spreads, bias) are updated;
    spreads are clipped away from zero after every step. By default each
    epoch is one full-batch step on the raw targets. ``batch_size``
    switches an epoch to mini-batch steps (sequential archive slices, or a
    per-epoch shuffle when ``shuffle_seed`` is given), and ``standardize``
    trains against z-scored targets (folding the constants back into the
    returned fitness-unit weights and bias), which is what makes learning
    rates like 0.12 well-scaled for arbitrary fitness magnitudes. Either
    way the result is a pure function of the arguments, and ``epochs = 0``
    returns an identical copy.

    Raises
    ------
    TrainingDivergenceError
        If the loss or any parameter becomes non-finite, naming the epoch.
    """
    if epochs < 0:
        raise ValueError(f"epochs must be >= 0, got {epochs}")
    if rate <= 0.0:
        raise ValueError(f"learning rate must be positive, got {rate}")
    if batch_size is not None and batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if data.inputs.shape[1] != p.dim:
        raise ValueError(f"data dimension {data.inputs.shape[1]} != model dimension {p.dim}")
    if epochs == 0:
        return p.copy()

    if standardize:
        y_off = float(data.targets.mean())
        y_scale = float(data.targets.std()) or 1.0
    else:
        y_off, y_scale = 0.0, 1.0
    centers = p.centers.copy()
    weights = p.weights / y_scale
    spreads = p.spreads.copy()
    bias = (p.bias - y_off) / y_scale
    X = data.inputs
    y = (data.targets - y_off) / y_scale

    n = len(y)
    full_batch = batch_size is None or batch_size >= n
    shuffler = None if shuffle_seed is None else np.random.default_rng(shuffle_seed)

    for epoch in range(epochs):
        if full_batch:
            batches = [(X, y)]
        elif shuffler is None:
            batches = [
                (X[lo : lo + batch_size], y[lo : lo + batch_size])
                for lo in range(0, n, batch_size)
            ]
        else:
            order = shuffler.permutation(n)
            batches = [
                (X[order[lo : lo + batch_size]], y[order[lo : lo + batch_size]])
                for lo in range(0, n, batch_size)
            ]
        for Xb, yb in batches:
            loss, grad_c, grad_w, grad_s, grad_b = _gradient_pass(
                centers, weights, spreads, bias, Xb, yb
            )
            if loss != loss or loss == np.inf:  # non-finite
                raise TrainingDivergenceError(f"non-finite training loss at epoch {epoch}")
            centers = centers - rate * grad_c
            weights = weights - rate * grad_w
            spreads = np.maximum(spreads - rate * spread_step_scale * grad_s, _MIN_SPREAD)
            bias -= rate * grad_b
        if not (
            np.isfinite(centers).all()
            and np.isfinite(weights).all()
            and np.isfinite(bias)
        ):
            raise TrainingDivergenceError(f"non-finite parameter after epoch {epoch}")

    return RbfnParams(
        centers=centers,
        weights=weights * y_scale,
        spreads=spreads,
        bias=bias * y_scale + y_off,
    )


def init_surrogate(data: Dataset, m: int, rng: np.random.Generator) -> RbfnParams:
    """Build an untrained surrogate: k-means centers, shared spreads, zero
    weights, and the target mean as bias."""
    if m > len(data):
        raise ValueError(f"need at least m={m} samples to place centers, got {len(data)}")
    centers = kmeans(data.inputs, m, rng)
    return RbfnParams(
        centers=centers,
        weights=np.zeros(m),
        spreads=compute_spreads(centers),
        bias=float(data.targets.mean()),
    )


def to_flat(p: RbfnParams) -> np.ndarray:
    """Serialize to the flat upload record: centers row-major, weights,
    spreads, bias."""
    return np.concatenate([p.centers.ravel(), p.weights, p.spreads, [p.bias]])


def from_flat(vec: np.ndarray, m: int, d: int) -> RbfnParams:
    """Rebuild parameters from a flat record produced by :func:`to_flat`."""
    vec = np.asarray(vec, dtype=float)
    expected = m * d + 2 * m + 1
    if vec.shape != (expected,):
        raise ValueError(f"flat record for (m={m}, d={d}) must have length {expected}")
    return RbfnParams(
        centers=vec[: m * d].reshape(m, d).copy(),
        weights=vec[m * d : m * d + m].copy(),
        spreads=vec[m * d + m : m * d + 2 * m].copy(),
        bias=float(vec[-1]),
    )
