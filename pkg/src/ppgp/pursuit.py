"""Projection-pursuit Gaussian-process regression.

The model applies a learned linear map ``W`` (M x d, M typically >= d) to
the inputs and fits a GP with an additive correlation over the M
transformed coordinates.  ``W`` is trained by full-batch gradient descent
on the profile likelihood objective

    l(W) = Y^T (K_W + delta I)^-1 Y + log det(K_W + delta I),

where ``K_W[i, j]`` averages the base correlation over the M projected
lags ``w_k^T (x_i - x_j)``.  The gradient in each row ``w_k`` follows the
standard identity

    dl/dtheta = -alpha^T (dK/dtheta) alpha + tr(K^-1 dK/dtheta),
    alpha = (K + delta I)^-1 Y,

with ``dK/dw_k[i, j] = (1/M) k'(w_k^T (x_i - x_j)) (x_i - x_j)``.

Within an epoch every row is updated from the same factorization
(Jacobi-style); the returned model is the one at the best-loss epoch, not
the last, and training stops early once the relative loss improvement
over a 10-epoch window falls below a threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularMatrixError, TrainingError
from .gp import DEFAULT_NUGGET, GpModel, fit
from .kernels import Kernel1d, MultivariateKernel
from .linalg import cholesky_with_jitter, inverse_spd, logdet, solve_spd

__all__ = [
    "TrainConfig",
    "PpgprModel",
    "init_weights",
    "transform",
    "loss_and_gradient",
    "train",
    "default_node_count",
]

EARLY_STOP_WINDOW = 10


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for :func:`train`."""

    eta: float
    epochs: int
    M: int
    early_stop_rel: float = 0.04
    seed: int = 0
    nugget: float = DEFAULT_NUGGET
    center: bool = True

    def __post_init__(self):
        if self.eta < 0:
            raise DomainError("learning rate eta must be non-negative")
        if self.M < 1:
            raise DomainError("node count M must be at least 1")
        if self.epochs < 1:
            raise DomainError("epochs must be at least 1")


@dataclass(frozen=True)
class PpgprModel:
    """A trained projection-pursuit GP."""

    W: np.ndarray
    inner: GpModel
    trace: tuple
    config: TrainConfig
    best_epoch: int
    diverged: bool = False

    @property
    def M(self) -> int:
        return self.W.shape[0]

    @property
    def dim(self) -> int:
        return self.W.shape[1]

    def predict(self, X) -> np.ndarray:
        """Predictions at the rows of ``X``: transform by W, then the inner GP."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.inner.predict(transform(self.W, X))

    def predict_mean(self, x) -> float:
        x = np.asarray(x, dtype=float).reshape(1, -1)
        return float(self.predict(x)[0])


def init_weights(d: int, M: int, seed: int) -> np.ndarray:
    """Initial M x d weight matrix, entries i.i.d. normal(0, 1/d)."""
    if d < 1 or M < 1:
        raise DomainError("d and M must be at least 1")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, 1.0 / np.sqrt(d), size=(M, d))


def transform(W: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Project the rows of ``X`` (n x d) onto the rows of ``W``: returns n x M.

    Written as an explicit einsum so each entry is accumulated in the same
    order whatever the batch size; transforming one row at a time matches
    the batched result bit for bit.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if W.shape[1] != X.shape[1]:
        raise DomainError(
            f"W has {W.shape[1]} columns but X has {X.shape[1]}"
        )
    return np.einsum("nd,md->nm", X, W)


def default_node_count(n: int, d: int) -> int:
    """Fallback node count: slightly below the sample size, capped at 5 d."""
    return max(1, min(n - 5, 5 * d))


def _additive_kernel(base: Kernel1d, M: int) -> MultivariateKernel:
    return MultivariateKernel(base=base, structure="additive", dim=M)


def loss_and_gradient(
    W: np.ndarray,
    X: np.ndarray,
    Y: np.ndarray,
    kernel1d: Kernel1d,
    nugget: float = DEFAULT_NUGGET,
) -> tuple[float, np.ndarray]:
    """Objective value and its exact gradient in the weight matrix.

    ``Y`` is used as given (center beforehand if the model is centered).
    Raises for kernels without a usable derivative (Matérn needs nu > 1).
    """
    if not kernel1d.differentiable:
        raise DomainError(
            "weight training needs a differentiable kernel "
            "(matern with nu > 1, or gaussian)"
        )
    W = np.atleast_2d(np.asarray(W, dtype=float))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.asarray(Y, dtype=float).reshape(-1)
    if not np.isfinite(W).all():
        # Weights blow up when the step size is too aggressive; surface it
        # as the numeric failure the training loop treats as divergence.
        raise SingularMatrixError("weight matrix contains non-finite entries")
    M = W.shape[0]
    T = transform(W, X)

    K = _additive_kernel(kernel1d, M).gram(T)
    chol = cholesky_with_jitter(K, nugget)
    alpha = solve_spd(chol, Y)
    loss = float(Y @ alpha + logdet(chol))

    # B = K^-1 - alpha alpha^T contracts against dK/dw_k
    B = inverse_spd(chol) - np.outer(alpha, alpha)
    lags = T[:, None, :] - T[None, :, :]              # (n, n, M)
    C = B[:, :, None] * (kernel1d.derivative(lags) / M)
    row_sums = C.sum(axis=1)                          # (n, M)
    col_sums = C.sum(axis=0)                          # (n, M)
    grad = (row_sums - col_sums).T @ X                # (M, d)
    return loss, grad


def train(
    X: np.ndarray,
    Y: np.ndarray,
    kernel1d: Kernel1d,
    cfg: TrainConfig,
    W0: np.ndarray | None = None,
) -> PpgprModel:
    """Gradient-descent training of the projection weights.

    Runs at most ``cfg.epochs`` full-gradient steps, recording the loss at
    every visited weight matrix (epoch 0 is the initial one).  Stops early
    when the relative improvement over the trailing 10-epoch window drops
    below ``cfg.early_stop_rel``.  A non-finite loss aborts the loop and
    falls back to the best weights seen so far (flagged ``diverged``).

    Returns the model refitted at the best-loss epoch.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.asarray(Y, dtype=float).reshape(-1)
    n, d = X.shape
    if n < 2:
        raise TrainingError(f"need at least 2 observations, got {n}")
    if Y.shape[0] != n:
        raise TrainingError(f"got {n} design rows but {Y.shape[0]} responses")
    if not np.isfinite(X).all():
        raise TrainingError("design contains non-finite entries")
    if not np.isfinite(Y).all():
        raise TrainingError("responses contain non-finite entries")

    W = init_weights(d, cfg.M, cfg.seed) if W0 is None else np.array(W0, dtype=float)
    if W.shape != (cfg.M, d):
        raise TrainingError(f"W0 shape {W.shape} does not match (M={cfg.M}, d={d})")

    mean = float(np.mean(Y)) if cfg.center else 0.0
    yc = Y - mean

    trace: list[tuple[int, float]] = []
    best_loss = np.inf
    best_W = W.copy()
    best_epoch = 0
    diverged = False

    for epoch in range(cfg.epochs + 1):
        try:
            loss, grad = loss_and_gradient(W, X, yc, kernel1d, cfg.nugget)
        except SingularMatrixError:
            diverged = True
            break
        if not np.isfinite(loss):
            diverged = True
            break
        trace.append((epoch, loss))
        if loss < best_loss:
            best_loss, best_W, best_epoch = loss, W.copy(), epoch
        if epoch >= EARLY_STOP_WINDOW:
            ref = trace[epoch - EARLY_STOP_WINDOW][1]
            if ref - loss < cfg.early_stop_rel * abs(ref):
                break
        if epoch < cfg.epochs:
            W = W - cfg.eta * grad

    if not np.isfinite(best_loss):
        raise TrainingError(
            "training diverged before producing any finite loss; "
            "try a smaller learning rate eta"
        )

    inner = fit(
        transform(best_W, X),
        Y,
        _additive_kernel(kernel1d, cfg.M),
        nugget=cfg.nugget,
        center=cfg.center,
        validate_unit_cube=False,
    )
    return PpgprModel(
        W=best_W,
        inner=inner,
        trace=tuple(trace),
        config=cfg,
        best_epoch=best_epoch,
        diverged=diverged,
    )
