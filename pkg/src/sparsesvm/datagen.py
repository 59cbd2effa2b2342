"""Seeded synthetic data generators for the benchmark scenarios.

Every generator draws 3n observations from one PRNG stream and slices
them into disjoint train / validation / test thirds (indices 0..n-1,
n..2n-1, 2n..3n-1), so splits are reproducible and non-overlapping by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, GroundTruth

# Named supports, written 1-based in the source material; converted to
# 0-based array indices here.
STRUCTURES = {
    "A": (5, 6, 7, 8),
    "B": (4, 6, 8, 9),
    "C": (3, 6, 9, 10),
    "D": (2, 6, 10, 11),
    "E": (1, 6, 11, 12),
}

COVARIATE_DISTS = ("gaussian", "uniform_pm1", "student_t3")
SCHEMES = ("default_logistic", "model1_probit", "model2_mixture")


@dataclass(frozen=True)
class GenSpec:
    """Declarative description of one synthetic-data draw."""

    scheme: str = "default_logistic"
    n: int = 200
    p: int = 400
    m: float = 10.0
    s: int = 4
    structure: str | None = None  # one of "A".."E", overrides s
    beta_star: tuple[float, ...] | None = None  # explicit signal, overrides m/s/structure
    covariate_dist: str = "gaussian"
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.covariate_dist not in COVARIATE_DISTS:
            raise ValueError(f"unknown covariate_dist {self.covariate_dist!r}")
        if self.structure is not None and self.structure not in STRUCTURES:
            raise ValueError(f"unknown structure {self.structure!r}")
        if self.n < 1 or self.p < 1:
            raise ValueError(f"need n >= 1 and p >= 1, got n={self.n}, p={self.p}")

    def resolve_beta_star(self) -> np.ndarray:
        if self.beta_star is not None:
            beta = np.asarray(self.beta_star, dtype=float)
            if beta.shape != (self.p,):
                raise ValueError(f"explicit beta_star must have length p={self.p}")
            return beta
        beta = np.zeros(self.p)
        if self.structure is not None:
            idx = [i - 1 for i in STRUCTURES[self.structure]]
        else:
            idx = list(range(self.s))
        if idx and max(idx) >= self.p:
            raise ValueError(f"support index {max(idx)} out of range for p={self.p}")
        beta[idx] = self.m
        return beta


def _draw_covariates(rng: np.random.Generator, rows: int, p: int, dist: str) -> np.ndarray:
    if dist == "gaussian":
        return rng.standard_normal((rows, p))
    if dist == "uniform_pm1":
        return rng.uniform(-1.0, 1.0, size=(rows, p))
    if dist == "student_t3":
        return rng.standard_t(3, size=(rows, p))
    raise ValueError(f"unknown covariate_dist {dist!r}")


def _split(X: np.ndarray, y: np.ndarray, n: int):
    return (
        Dataset(X=X[:n], y=y[:n]),
        Dataset(X=X[n : 2 * n], y=y[n : 2 * n]),
        Dataset(X=X[2 * n : 3 * n], y=y[2 * n : 3 * n]),
    )


def gen_default(spec: GenSpec):
    """Logistic-link draw: P(y=+1 | x) = 1 / (1 + exp(-x . beta*)).

    With this orientation the Bayes direction is +beta*; see the README
    note on the sign convention.
    """
    if spec.scheme != "default_logistic":
        raise ValueError(f"gen_default got scheme {spec.scheme!r}")
    rng = np.random.default_rng(spec.seed)
    beta_star = spec.resolve_beta_star()
    rows = 3 * spec.n
    X = _draw_covariates(rng, rows, spec.p, spec.covariate_dist)
    p_plus = 1.0 / (1.0 + np.exp(-(X @ beta_star)))
    y = np.where(rng.random(rows) < p_plus, 1.0, -1.0)
    train, val, test = _split(X, y, spec.n)
    return train, val, test, GroundTruth(beta_star=beta_star)


def gen_model1(n: int, p: int, seed: int):
    """AR(1)-correlated Gaussian covariates, probit labels.

    cov(x_i, x_j) = 0.4^|i-j|, sampled by the exact recursion
    x_1 = z_1, x_j = 0.4 x_{j-1} + sqrt(1 - 0.16) z_j.
    beta* = (1.1, 1.1, 1.1, 1.1, 0, ..., 0).
    """
    if p < 4:
        raise ValueError(f"model 1 needs p >= 4, got {p}")
    from scipy.stats import norm

    rng = np.random.default_rng(seed)
    rows = 3 * n
    Z = rng.standard_normal((rows, p))
    X = np.empty_like(Z)
    X[:, 0] = Z[:, 0]
    c = np.sqrt(1.0 - 0.16)
    for j in range(1, p):
        X[:, j] = 0.4 * X[:, j - 1] + c * Z[:, j]
    beta_star = np.zeros(p)
    beta_star[:4] = 1.1
    p_plus = norm.cdf(X @ beta_star)
    y = np.where(rng.random(rows) < p_plus, 1.0, -1.0)
    train, val, test = _split(X, y, n)
    return train, val, test, GroundTruth(beta_star=beta_star)


# Bayes direction of the model-2 mixture, used as the reference signal for
# estimation metrics (= 2 Sigma^{-1} mu up to rounding of the source values).
MODEL2_BAYES_DIRECTION = (1.39, 1.47, 1.56, 1.65, 1.74)


def gen_model2(n: int, p: int, seed: int):
    """Balanced two-Gaussian mixture with a correlated leading block.

    y is a fair +/-1 coin; x | y ~ N(y * mu, Sigma) with
    mu = (0.1, ..., 0.5, 0, ...), Sigma unit-diagonal with -0.2 between
    distinct coordinates among the first five, identity elsewhere.
    """
    if p < 5:
        raise ValueError(f"model 2 needs p >= 5, got {p}")
    rng = np.random.default_rng(seed)
    rows = 3 * n
    mu = np.zeros(p)
    mu[:5] = (0.1, 0.2, 0.3, 0.4, 0.5)
    sigma_block = np.full((5, 5), -0.2) + 1.2 * np.eye(5)
    chol = np.linalg.cholesky(sigma_block)
    y = np.where(rng.random(rows) < 0.5, 1.0, -1.0)
    Z = rng.standard_normal((rows, p))
    X = Z.copy()
    X[:, :5] = Z[:, :5] @ chol.T
    X += y[:, None] * mu[None, :]
    beta_star = np.zeros(p)
    beta_star[:5] = MODEL2_BAYES_DIRECTION
    train, val, test = _split(X, y, n)
    return train, val, test, GroundTruth(beta_star=beta_star)


def generate(spec: GenSpec):
    """Dispatch on the scheme; all generators return (train, val, test, gt)."""
    if spec.scheme == "default_logistic":
        return gen_default(spec)
    if spec.scheme == "model1_probit":
        return gen_model1(spec.n, spec.p, spec.seed)
    if spec.scheme == "model2_mixture":
        return gen_model2(spec.n, spec.p, spec.seed)
    raise ValueError(f"unknown scheme {spec.scheme!r}")
