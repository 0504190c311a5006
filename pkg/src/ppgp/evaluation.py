"""Experiment harness: relative RMSE, train/test runs, cross-validation.

The headline metric is the relative root mean square error

    rmse = sqrt((1/n) sum_i ((yhat_i - y_i) / y_i)^2),

which is undefined when any truth value is zero; an absolute RMSE is
provided as the secondary metric and as the fallback inside the tuner.

``run_experiment`` reproduces the standard benchmark protocol: Halton
training design of size 5 d (unless overridden), 500 seeded
uniform-random test points, one of four model families (isotropic /
product / additive GP, or the projection-pursuit GP).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .benchmarks import by_name
from .designs import halton, uniform_random
from .errors import ConfigError, MetricError, TrainingError
from .gp import DEFAULT_NUGGET, fit
from .kernels import Kernel1d, MultivariateKernel, kernel1d_from_config
from .pursuit import TrainConfig, default_node_count, train

__all__ = [
    "METHODS",
    "rmse",
    "rmse_absolute",
    "ExperimentReport",
    "run_experiment",
    "TuneGrid",
    "fold_indices",
    "cross_validate",
    "benchmark_table",
]

METHODS = ("gp-iso", "gp-pro", "gp-add", "ppgpr")

_METHOD_STRUCTURE = {"gp-iso": "isotropic", "gp-pro": "product", "gp-add": "additive"}


def rmse(pred, truth) -> float:
    """Relative root mean square error; errors when any truth value is 0."""
    pred = np.asarray(pred, dtype=float).reshape(-1)
    truth = np.asarray(truth, dtype=float).reshape(-1)
    if pred.shape != truth.shape:
        raise MetricError(f"length mismatch: {pred.shape[0]} vs {truth.shape[0]}")
    if truth.shape[0] == 0:
        raise MetricError("empty vectors")
    if np.any(truth == 0.0):
        raise MetricError(
            "relative RMSE undefined: truth contains zeros "
            "(use rmse_absolute as a fallback)"
        )
    return float(np.sqrt(np.mean(((pred - truth) / truth) ** 2)))


def rmse_absolute(pred, truth) -> float:
    """Plain root mean square error, the secondary metric."""
    pred = np.asarray(pred, dtype=float).reshape(-1)
    truth = np.asarray(truth, dtype=float).reshape(-1)
    if pred.shape != truth.shape:
        raise MetricError(f"length mismatch: {pred.shape[0]} vs {truth.shape[0]}")
    if truth.shape[0] == 0:
        raise MetricError("empty vectors")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def _safe_rmse(pred, truth) -> float:
    try:
        return rmse(pred, truth)
    except MetricError:
        return rmse_absolute(pred, truth)


@dataclass(frozen=True)
class ExperimentReport:
    """One (method, function, seed) evaluation, mirroring a results-table row."""

    method: str
    function: str
    n_train: int
    n_test: int
    seed: int
    rmse: float
    rmse_abs: float
    centered: bool
    wall_ms: float
    hyperparameters: dict = field(default_factory=dict)
    diverged: bool = False


def _experiment_seeds(seed: int) -> tuple[int, int]:
    """Independent child seeds (test design, weight init) from a master seed."""
    children = np.random.SeedSequence(seed).spawn(2)
    return tuple(int(c.generate_state(1)[0]) for c in children)


def run_experiment(
    method: str,
    function: str,
    n_train: int | None = None,
    n_test: int = 500,
    seed: int = 0,
    *,
    family: str = "matern",
    nu: float | None = 2.5,
    phi: float = 1.0,
    eta: float = 1e-9,
    epochs: int = 150,
    M: int | None = None,
    early_stop_rel: float = 0.04,
    nugget: float = DEFAULT_NUGGET,
    center: bool = True,
) -> ExperimentReport:
    """Train/test one model on one benchmark function.

    Training design is Halton (deterministic, defaults to 5 d points);
    test design is seeded uniform-random.  The seed drives the test
    design and, for the projection-pursuit model, the weight
    initialization, through independently spawned child seeds.
    ``early_stop_rel=0`` disables early stopping so the full epoch
    budget is always used.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; valid: {', '.join(METHODS)}")
    fn = by_name(function)
    d = fn.dim
    if n_train is None:
        n_train = 5 * d
    test_seed, weight_seed = _experiment_seeds(seed)

    U_train = halton(n_train, d).points
    Y_train = fn.eval_unit(U_train)
    U_test = uniform_random(n_test, d, test_seed).points
    Y_test = fn.eval_unit(U_test)

    base = kernel1d_from_config({"family": family, "nu": nu, "phi": phi})
    t0 = time.perf_counter()
    hyper: dict = {"family": family, "nu": nu, "phi": phi}
    diverged = False
    if method == "ppgpr":
        if M is None:
            M = default_node_count(n_train, d)
        cfg = TrainConfig(
            eta=eta, epochs=epochs, M=M, early_stop_rel=early_stop_rel,
            seed=weight_seed, nugget=nugget, center=center,
        )
        model = train(U_train, Y_train, base, cfg)
        pred = model.predict(U_test)
        diverged = model.diverged
        hyper.update(eta=eta, epochs=epochs, M=M)
    else:
        kernel = MultivariateKernel(base=base, structure=_METHOD_STRUCTURE[method], dim=d)
        model = fit(U_train, Y_train, kernel, nugget=nugget, center=center)
        pred = model.predict(U_test)
    wall_ms = 1e3 * (time.perf_counter() - t0)

    return ExperimentReport(
        method=method,
        function=function,
        n_train=n_train,
        n_test=n_test,
        seed=seed,
        rmse=_safe_rmse(pred, Y_test),
        rmse_abs=rmse_absolute(pred, Y_test),
        centered=center,
        wall_ms=wall_ms,
        hyperparameters=hyper,
        diverged=diverged,
    )


@dataclass(frozen=True)
class TuneGrid:
    """Hyperparameter grid for :func:`cross_validate`.

    ``kernels`` holds (family, nu, phi) triples.  Selection ties are
    broken lexicographically: smaller M first, then earlier eta, then
    earlier kernel, so tuning runs are reproducible.
    """

    etas: tuple
    Ms: tuple
    kernels: tuple = (("matern", 2.5, 1.0),)
    folds: int = 5

    def __post_init__(self):
        object.__setattr__(self, "etas", tuple(self.etas))
        object.__setattr__(self, "Ms", tuple(self.Ms))
        object.__setattr__(self, "kernels", tuple(tuple(k) for k in self.kernels))
        if not self.etas or not self.Ms or not self.kernels:
            raise ConfigError("tune grid lists must be non-empty")
        if self.folds < 2:
            raise ConfigError("folds must be at least 2")

    def points(self):
        """Grid points in deterministic order with their tie-break indices."""
        out = []
        for ki, kcfg in enumerate(self.kernels):
            for M in self.Ms:
                for ei, eta in enumerate(self.etas):
                    out.append({"eta": eta, "eta_index": ei, "M": M,
                                "kernel": kcfg, "kernel_index": ki})
        return out


def fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Deterministic partition of range(n) into near-equal folds."""
    if folds > n:
        raise ConfigError(f"folds ({folds}) exceeds sample size ({n})")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(part) for part in np.array_split(perm, folds)]


def cross_validate(
    X: np.ndarray,
    Y: np.ndarray,
    grid: TuneGrid,
    seed: int = 0,
    *,
    epochs: int = 150,
    early_stop_rel: float = 0.04,
    nugget: float = DEFAULT_NUGGET,
    center: bool = True,
) -> tuple[dict, list[dict]]:
    """K-fold tuning of the projection-pursuit model.

    Returns (best point, fold table).  The table has one row per (grid
    point, fold) with the held-out RMSE (relative, absolute fallback on
    exact zeros); the best point minimizes the mean fold RMSE.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.asarray(Y, dtype=float).reshape(-1)
    n = X.shape[0]
    if grid.folds > n:
        raise ConfigError(f"folds ({grid.folds}) exceeds sample size ({n})")
    fold_seed, weight_seed = _experiment_seeds(seed)
    folds = fold_indices(n, grid.folds, fold_seed)
    all_idx = np.arange(n)

    table: list[dict] = []
    scored: list[tuple] = []
    for gi, point in enumerate(grid.points()):
        family, nu, phi = point["kernel"]
        base = kernel1d_from_config({"family": family, "nu": nu, "phi": phi})
        fold_scores = []
        for fi, hold in enumerate(folds):
            train_idx = np.setdiff1d(all_idx, hold)
            cfg = TrainConfig(
                eta=point["eta"], epochs=epochs, M=point["M"],
                early_stop_rel=early_stop_rel, seed=weight_seed,
                nugget=nugget, center=center,
            )
            try:
                model = train(X[train_idx], Y[train_idx], base, cfg)
                score = _safe_rmse(model.predict(X[hold]), Y[hold])
            except TrainingError:
                score = np.inf
            fold_scores.append(score)
            table.append({
                "grid_index": gi, "eta": point["eta"], "M": point["M"],
                "family": family, "nu": nu, "phi": phi,
                "fold": fi, "rmse": score,
            })
        mean_score = float(np.mean(fold_scores))
        scored.append((
            mean_score, point["M"], point["eta_index"], point["kernel_index"], gi,
        ))
    best_score = min(scored)
    best = dict(grid.points()[best_score[-1]])
    best["mean_rmse"] = best_score[0]
    return best, table


def benchmark_table(
    functions,
    methods,
    seeds,
    *,
    n_train: int | None = None,
    family: str = "matern",
    nu: float | None = 2.5,
    phi: float = 1.0,
    eta: float = 1e-9,
    epochs: int = 150,
    M: int | None = None,
    early_stop_rel: float = 0.04,
    nugget: float = DEFAULT_NUGGET,
    center: bool = True,
) -> list[ExperimentReport]:
    """Reports for every (function, method, seed), in deterministic order."""
    reports = []
    for function in functions:
        for method in methods:
            for seed in seeds:
                reports.append(run_experiment(
                    method, function, n_train=n_train, seed=seed,
                    family=family, nu=nu, phi=phi, eta=eta, epochs=epochs,
                    M=M, early_stop_rel=early_stop_rel,
                    nugget=nugget, center=center,
                ))
    return reports
