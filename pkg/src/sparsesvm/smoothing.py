"""Nesterov-smoothed hinge loss: dual weights, loss branches, and gradient.

The raw hinge term for sample k is (1 - margin_k)_+ / n with
margin_k = y_k * x_k . beta.  Smoothing subtracts the strongly convex
prox term (gamma/2) ||mu||^2 from the saddle form, giving a closed-form
inner maximizer mu and a piecewise loss with three branches per sample:

  zero       margin >= 1            value 0,                       mu = 0
  linear     margin <= 1 - gamma*n  value (1 - margin)/n - gamma/2, mu = 1
  quadratic  otherwise              value (1 - margin)^2 / (2 gamma n^2)

Boundary convention: margin exactly 1 takes the zero branch, margin
exactly 1 - gamma*n takes the linear branch (the clamp is continuous at
both points, so only tie-breaking is affected).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset


@dataclass(frozen=True)
class SmoothedLossReport:
    value: float
    per_sample: np.ndarray
    mu: np.ndarray
    branch: np.ndarray  # per-sample tag: "zero" | "linear" | "quadratic"


def margins(beta: np.ndarray, d: Dataset) -> np.ndarray:
    return d.y * (d.X @ beta)


def mu_update(beta: np.ndarray, d: Dataset, gamma: float) -> np.ndarray:
    """Closed-form dual weights: clamp((1 - margin_k) / (gamma n), 0, 1)."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    return np.clip((1.0 - margins(beta, d)) / (gamma * d.n), 0.0, 1.0)


def _branches(margin: np.ndarray, gamma: float, n: int) -> np.ndarray:
    out = np.full(margin.shape, "quadratic", dtype="U9")
    out[margin >= 1.0] = "zero"
    out[margin <= 1.0 - gamma * n] = "linear"
    return out


def per_sample_smoothed_loss(margin, gamma: float, n: int):
    """Evaluate the three-branch smoothed hinge for one or more margins."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    m = np.asarray(margin, dtype=float)
    linear = (1.0 - m) / n - gamma / 2.0
    quad = (1.0 - m) ** 2 / (2.0 * gamma * n * n)
    out = np.where(m >= 1.0, 0.0, np.where(m <= 1.0 - gamma * n, linear, quad))
    return float(out) if np.isscalar(margin) else out


def smoothed_loss(beta: np.ndarray, d: Dataset, gamma: float) -> SmoothedLossReport:
    """Total smoothed loss plus per-sample values, dual weights, and branch tags."""
    m = margins(beta, d)
    per = per_sample_smoothed_loss(m, gamma, d.n)
    mu = np.clip((1.0 - m) / (gamma * d.n), 0.0, 1.0)
    # sequential sum over sample index: bit-reproducible reduction order
    value = float(np.add.reduce(per))
    return SmoothedLossReport(value=value, per_sample=per, mu=mu, branch=_branches(m, gamma, d.n))


def smoothed_value_from_margins(m: np.ndarray, gamma: float, n: int) -> float:
    """Scalar total smoothed loss from precomputed margins (hot-loop helper)."""
    linear = (1.0 - m) / n - gamma / 2.0
    quad = (1.0 - m) ** 2 / (2.0 * gamma * n * n)
    per = np.where(m >= 1.0, 0.0, np.where(m <= 1.0 - gamma * n, linear, quad))
    return float(np.add.reduce(per))


def hinge_loss(beta: np.ndarray, d: Dataset) -> float:
    """Average hinge loss (1/n) sum_k (1 - margin_k)_+."""
    m = margins(beta, d)
    return float(np.add.reduce(np.maximum(1.0 - m, 0.0))) / d.n


def smoothed_gradient_beta(beta: np.ndarray, d: Dataset, gamma: float) -> np.ndarray:
    """Gradient of the smoothed loss w.r.t. beta: -(1/n) X^T (y * mu)."""
    mu = mu_update(beta, d, gamma)
    return -(d.X.T @ (d.y * mu)) / d.n
