"""Comparison estimators: l1-penalized smoothed-hinge SVM and the oracle fit.

The l1 solver is proximal gradient (ISTA-style) on the smoothed hinge
plus lambda * ||beta||_1, run down a descending lambda grid with warm
starts; soft thresholding produces exact zeros.  The oracle minimizes
the smoothed hinge restricted to the true support (everything else
pinned at zero) by plain gradient descent.  Both use objective-halving
backtracking because the smoothed gradient's Lipschitz constant scales
like ||X||^2 / (gamma n^2) and a fixed paper-scale step would overshoot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Checkpoint, Dataset, DivergenceError, FitResult, GdConfig
from .metrics import accuracy
from .smoothing import hinge_loss, smoothed_loss, smoothed_value_from_margins

BETA_SUP_GUARD = 1e12
_MIN_STEP = 1e-20


@dataclass(frozen=True)
class L1Config:
    """Path-solver knobs; ``lambda_grid=None`` means the default glmnet-style grid."""

    lambda_grid: tuple[float, ...] | None = None
    inner_max_iter: int = 5000
    inner_tol: float = 1e-8
    gamma: float = 1e-4
    step: float = 0.5
    seed: int = 0
    n_lambdas: int = 30
    lambda_min_ratio: float = 1e-3

    def __post_init__(self):
        if self.lambda_grid is not None:
            grid = tuple(float(x) for x in self.lambda_grid)
            if any(x <= 0 for x in grid):
                raise ValueError("lambda grid must be strictly positive")
            if any(a <= b for a, b in zip(grid, grid[1:])):
                raise ValueError("lambda grid must be strictly decreasing")
            object.__setattr__(self, "lambda_grid", grid)


def soft_threshold(z, theta):
    """Proximal map of theta * |.|: sign(z) * max(|z| - theta, 0)."""
    if np.any(np.asarray(theta) < 0):
        raise ValueError("threshold must be nonnegative")
    return np.sign(z) * np.maximum(np.abs(z) - theta, 0.0)


def lambda_max(d: Dataset, gamma: float) -> float:
    """Smallest lambda at which beta = 0 is a prox fixed point (needs gamma <= 1/n)."""
    if gamma > 1.0 / d.n:
        raise ValueError(f"lambda_max requires gamma <= 1/n, got gamma={gamma}, n={d.n}")
    return float(np.max(np.abs(d.X.T @ d.y))) / d.n


def _grid(train: Dataset, cfg: L1Config) -> np.ndarray:
    if cfg.lambda_grid is not None:
        return np.asarray(cfg.lambda_grid)
    lmax = lambda_max(train, cfg.gamma)
    if lmax == 0.0:
        return np.array([0.0])
    return np.geomspace(lmax, cfg.lambda_min_ratio * lmax, cfg.n_lambdas)


def _check_finite(beta: np.ndarray, where: str) -> None:
    sup = np.max(np.abs(beta))
    if not np.isfinite(sup) or sup > BETA_SUP_GUARD:
        raise DivergenceError(f"iterate diverged in {where}: ||beta||_inf = {sup:g}")


def fit_l1_svm(train: Dataset, validation: Dataset, cfg: L1Config) -> FitResult:
    """Warm-started proximal-gradient path; returns the lambda with the lowest
    validation misclassification (ties go to the larger, sparser lambda)."""
    grid = _grid(train, cfg)
    beta = np.zeros(train.p)
    step = cfg.step
    checkpoints = []
    betas = []
    for k, lam in enumerate(grid):
        beta, step = _prox_inner(beta, train, lam, cfg, step)
        checkpoints.append(
            Checkpoint(
                t=k,
                val_hinge=hinge_loss(beta, validation),
                val_accuracy=accuracy(beta, validation),
                beta_l1=float(np.sum(np.abs(beta))),
                beta_linf=float(np.max(np.abs(beta))),
            )
        )
        betas.append(beta.copy())
    errors = [1.0 - ck.val_accuracy for ck in checkpoints]
    best = int(np.argmin(errors))  # first minimum = largest lambda on the descending grid
    return FitResult(
        beta_hat=betas[best],
        t_selected=best,
        stop_reason="validation_selected",
        checkpoints=tuple(checkpoints),
        selected_param=float(grid[best]),
    )


def _prox_inner(beta0, train, lam, cfg: L1Config, step):
    """ISTA for one lambda: halve the step whenever the composite objective rises.

    Margins are computed once per candidate and reused for the dual
    weights, the gradient, and the objective, so each accepted iteration
    costs two matrix-vector products.
    """
    X, y, n = train.X, train.y, train.n
    beta = beta0.copy()
    margin = y * (X @ beta)
    obj = smoothed_value_from_margins(margin, cfg.gamma, n) + lam * float(np.sum(np.abs(beta)))
    for _ in range(cfg.inner_max_iter):
        mu = np.clip((1.0 - margin) / (cfg.gamma * n), 0.0, 1.0)
        grad = -(X.T @ (y * mu)) / n
        while True:
            cand = soft_threshold(beta - step * grad, step * lam)
            cand_margin = y * (X @ cand)
            cand_obj = smoothed_value_from_margins(cand_margin, cfg.gamma, n) + lam * float(
                np.sum(np.abs(cand))
            )
            if cand_obj <= obj or step <= _MIN_STEP:
                break
            step *= 0.5
        delta = float(np.max(np.abs(cand - beta)))
        beta, margin, obj = cand, cand_margin, cand_obj
        _check_finite(beta, "fit_l1_svm")
        if delta < cfg.inner_tol:
            break
    return beta, step


def fit_oracle(train: Dataset, validation: Dataset, support, cfg: GdConfig) -> FitResult:
    """Smoothed-hinge descent restricted to the true support.

    Off-support coordinates are exactly zero by construction.  Checkpoint
    cadence and validation-based iterate selection mirror the main solver;
    the loop also halts once every dual weight hits zero.
    """
    sup = np.asarray(sorted(int(i) for i in support), dtype=int)
    if sup.size == 0:
        raise ValueError("oracle support must be nonempty")
    if sup.min() < 0 or sup.max() >= train.p:
        raise ValueError(f"support index out of range for p={train.p}")

    beta = np.zeros(train.p)
    step = cfg.eta
    checkpoints = []
    betas = []

    def record(t, beta):
        checkpoints.append(
            Checkpoint(
                t=t,
                val_hinge=hinge_loss(beta, validation),
                val_accuracy=accuracy(beta, validation),
                beta_l1=float(np.sum(np.abs(beta))),
                beta_linf=float(np.max(np.abs(beta))),
                train_smoothed=smoothed_loss(beta, train, cfg.gamma).value,
            )
        )
        betas.append(beta.copy())

    record(0, beta)
    X, y, n = train.X, train.y, train.n
    Xs = X[:, sup]  # contiguous slice keeps the hot loop on s columns
    margin = y * (X @ beta)
    obj = smoothed_value_from_margins(margin, cfg.gamma, n)
    stop = "t_max"
    t = 0
    while t < cfg.t_max:
        mu = np.clip((1.0 - margin) / (cfg.gamma * n), 0.0, 1.0)
        if not np.any(mu):
            stop = "mu_zero"
            break
        grad_s = -(Xs.T @ (y * mu)) / n
        while True:
            cand_s = beta[sup] - step * grad_s
            cand_margin = y * (Xs @ cand_s)  # beta is zero off-support
            cand_obj = smoothed_value_from_margins(cand_margin, cfg.gamma, n)
            if cand_obj <= obj or step <= _MIN_STEP:
                break
            step *= 0.5
        beta = beta.copy()
        beta[sup] = cand_s
        margin, obj = cand_margin, cand_obj
        t += 1
        _check_finite(beta, "fit_oracle")
        if t % cfg.eval_every == 0:
            record(t, beta)

    if checkpoints[-1].t != t:
        record(t, beta)
    errors = [1.0 - ck.val_accuracy for ck in checkpoints]
    best = int(np.argmin(errors))
    t_selected = checkpoints[best].t
    if t_selected != t:
        stop = "validation_selected"
    return FitResult(
        beta_hat=betas[best],
        t_selected=t_selected,
        stop_reason=stop,
        checkpoints=tuple(checkpoints),
    )
