"""Lower-confidence-bound acquisition functions over the federated surrogates.

An RBFN gives no native uncertainty estimate, so the exploration term is
built from the spread of the server-held predictions: the uploaded local
surrogates, the aggregated global surrogate, or both.

All three variants accept a single point of shape (d,) or a batch of
shape (n, d) and return a float or an (n,) array accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surrogate import RbfnParams, predict_many

__all__ = ["AcquisitionContext", "VARIANTS", "f_lcb", "g_lcb", "l_lcb"]


@dataclass(eq=False)
class AcquisitionContext:
    """Everything the server needs to score a candidate solution."""

    global_model: RbfnParams
    local_models: list[RbfnParams]
    weights: np.ndarray  # per-local aggregation weights, sum to 1
    mu: float = 2.0

    def __post_init__(self) -> None:
        if len(self.local_models) == 0:
            raise ValueError("need at least one local model")
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (len(self.local_models),):
            raise ValueError("one weight per local model required")
        if np.any(self.weights < 0.0) or abs(self.weights.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be non-negative and sum to 1")
        if self.mu < 0.0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        # Local models share (m, d), so their parameters stack into tensors
        # and a whole candidate batch is scored against every model at once.
        shape = self.local_models[0].centers.shape
        for m in self.local_models:
            if m.centers.shape != shape:
                raise ValueError("local models must share the same node shape")
        self._centers = np.stack([m.centers for m in self.local_models])  # (k, m, d)
        self._weights_m = np.stack([m.weights for m in self.local_models])  # (k, m)
        self._inv_two_s2 = -1.0 / (2.0 * np.stack([m.spreads for m in self.local_models]) ** 2)
        self._biases = np.array([m.bias for m in self.local_models])


def _as_batch(ctx: AcquisitionContext, x: np.ndarray) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = x[None, :] if single else x
    if X.ndim != 2 or X.shape[1] != ctx.global_model.dim:
        raise ValueError(f"expected points of dimension {ctx.global_model.dim}, got shape {x.shape}")
    return X, single


def _predictions(ctx: AcquisitionContext, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    diff = X[None, :, None, :] - ctx._centers[:, None, :, :]  # (k, n, m, d)
    d2 = np.square(diff).sum(axis=3)
    phi = np.exp(d2 * ctx._inv_two_s2[:, None, :])
    local = np.einsum("knm,km->kn", phi, ctx._weights_m) + ctx._biases[:, None]  # (k, n)
    fed = predict_many(ctx.global_model, X)  # (n,)
    return local, fed


def f_lcb(ctx: AcquisitionContext, x: np.ndarray) -> float | np.ndarray:
    """Federated LCB: mean of the weighted-local and global predictions,
    minus mu times the spread of all predictions around that mean."""
    X, single = _as_batch(ctx, x)
    local, fed = _predictions(ctx, X)
    f_local = ctx.weights @ local
    f_hat = 0.5 * (f_local + fed)
    k = len(ctx.local_models)
    s2 = (((local - f_hat) ** 2).sum(axis=0) + (fed - f_hat) ** 2) / k
    out = f_hat - ctx.mu * np.sqrt(s2)
    return float(out[0]) if single else out


def l_lcb(ctx: AcquisitionContext, x: np.ndarray) -> float | np.ndarray:
    """Local-only LCB: weighted-local mean, spread of the local predictions."""
    X, single = _as_batch(ctx, x)
    k = len(ctx.local_models)
    if k < 2:
        raise ValueError(f"l_lcb needs at least 2 local models, got {k}")
    local, _ = _predictions(ctx, X)
    f_hat = ctx.weights @ local
    s2 = ((local - f_hat) ** 2).sum(axis=0) / (k - 1)
    out = f_hat - ctx.mu * np.sqrt(s2)
    return float(out[0]) if single else out


def g_lcb(ctx: AcquisitionContext, x: np.ndarray) -> float | np.ndarray:
    """Global-only LCB: global prediction as the mean, spread of the local
    predictions around it."""
    X, single = _as_batch(ctx, x)
    k = len(ctx.local_models)
    if k < 2:
        raise ValueError(f"g_lcb needs at least 2 local models, got {k}")
    local, fed = _predictions(ctx, X)
    s2 = ((local - fed) ** 2).sum(axis=0) / (k - 1)
    out = fed - ctx.mu * np.sqrt(s2)
    return float(out[0]) if single else out


VARIANTS = {"flcb": f_lcb, "llcb": l_lcb, "glcb": g_lcb}
