"""Shared data model: datasets, ground truth, solver state, configs, results."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np


class DatasetError(ValueError):
    """A dataset violates one of its structural invariants."""


class DivergenceError(RuntimeError):
    """A solver iterate blew up (non-finite or past the magnitude guard)."""


class SignalClassError(ValueError):
    """A nonzero coefficient falls between the weak and strong thresholds."""


@dataclass(frozen=True)
class Dataset:
    """Design matrix ``X`` (n samples by p features) with labels ``y`` in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def validate_dataset(d: Dataset) -> None:
    """Raise :class:`DatasetError` on the first violated invariant."""
    X = np.asarray(d.X)
    y = np.asarray(d.y)
    if X.ndim != 2:
        raise DatasetError(f"X must be 2-dimensional, got ndim={X.ndim}")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise DatasetError(
            f"shape mismatch: X has {X.shape[0]} rows but y has shape {y.shape}"
        )
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise DatasetError(f"need n >= 1 and p >= 1, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        bad = np.argwhere(~np.isfinite(X))[0]
        raise DatasetError(f"non-finite entry in X at ({bad[0]}, {bad[1]})")
    bad_labels = (y != 1) & (y != -1)
    if np.any(bad_labels):
        k = int(np.argmax(bad_labels))
        raise DatasetError(f"label not in {{-1,+1}} at index {k}: {y[k]!r}")


@dataclass(frozen=True)
class GroundTruth:
    """True coefficient vector and its support (0-based indices)."""

    beta_star: np.ndarray
    support: frozenset[int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        beta = np.asarray(self.beta_star, dtype=float)
        object.__setattr__(self, "beta_star", beta)
        sup = frozenset(int(i) for i in np.flatnonzero(beta))
        if self.support is not None and frozenset(self.support) != sup:
            raise ValueError("support does not match nonzeros of beta_star")
        object.__setattr__(self, "support", sup)

    @property
    def s(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class SignalClasses:
    """Partition of the true support into strong and weak coefficients."""

    strong: frozenset[int]
    weak: frozenset[int]
    m_min: float
    kappa: float

    @property
    def s1(self) -> int:
        return len(self.strong)

    @property
    def s2(self) -> int:
        return len(self.weak)


def strong_threshold(n: int, p: int) -> float:
    return math.log(p) * math.sqrt(math.log(p) / n)


def weak_threshold(n: int, p: int) -> float:
    return math.sqrt(math.log(p) / n)


def classify_signals(gt: GroundTruth, n: int, p: int) -> SignalClasses:
    """Split the support into strong and weak coefficients by magnitude.

    Strong means |beta*_i| >= log(p) * sqrt(log(p)/n); weak means
    |beta*_i| <= sqrt(log(p)/n) (unit constants in front of both).
    A nonzero coefficient strictly between the two thresholds raises
    :class:`SignalClassError`.
    """
    if p < 2 or n < 2:
        raise ValueError(f"need n >= 2 and p >= 2, got n={n}, p={p}")
    thr_strong = strong_threshold(n, p)
    thr_weak = weak_threshold(n, p)
    strong, weak = set(), set()
    for i in sorted(gt.support):
        mag = abs(gt.beta_star[i])
        if mag >= thr_strong:
            strong.add(i)
        elif mag <= thr_weak:
            weak.add(i)
        else:
            raise SignalClassError(
                f"coefficient {i} has magnitude {mag:g}, strictly between the "
                f"weak ({thr_weak:g}) and strong ({thr_strong:g}) thresholds"
            )
    if strong:
        mags = np.abs(gt.beta_star[sorted(strong)])
        m_min = float(mags.min())
        kappa = float(mags.max() / mags.min())
    else:
        m_min = math.nan
        kappa = math.nan
    return SignalClasses(frozenset(strong), frozenset(weak), m_min, kappa)


@dataclass(frozen=True)
class GdConfig:
    """Hyperparameters of the over-parameterized gradient descent solver."""

    alpha: float = 1e-8
    eta: float = 0.5
    gamma: float = 1e-4
    t_max: int = 10_000
    eval_every: int = 10
    seed: int = 0

    def __post_init__(self):
        for name in ("alpha", "eta", "gamma"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise ValueError(f"{name} must be strictly positive and finite, got {val!r}")
        if self.t_max < 0:
            raise ValueError(f"t_max must be nonnegative, got {self.t_max}")
        if self.eval_every < 1:
            raise ValueError(f"eval_every must be >= 1, got {self.eval_every}")


@dataclass(frozen=True)
class OverParamState:
    """Factor pair (w, v) with the cached coefficient vector beta = w^2 - v^2."""

    w: np.ndarray
    v: np.ndarray
    beta: np.ndarray

    @classmethod
    def initial(cls, alpha: float, p: int) -> "OverParamState":
        w = np.full(p, alpha, dtype=float)
        v = np.full(p, alpha, dtype=float)
        return cls(w=w, v=v, beta=w * w - v * v)


@dataclass(frozen=True)
class Checkpoint:
    """Per-checkpoint trajectory record kept inside a :class:`FitResult`."""

    t: int
    val_hinge: float
    val_accuracy: float
    beta_l1: float
    beta_linf: float
    train_smoothed: float = math.nan
    max_abs_offsupport: float = math.nan
    min_signal: float = math.nan


@dataclass(frozen=True)
class FitResult:
    beta_hat: np.ndarray
    t_selected: int
    stop_reason: str  # one of "mu_zero", "t_max", "validation_selected"
    checkpoints: tuple[Checkpoint, ...]
    selected_param: float | None = None  # lambda for the l1 path solver
    # running max of off-support |beta_i| over every iteration, when the
    # solver was handed the true support; NaN otherwise
    max_abs_offsupport_trajectory: float = math.nan


# ---------------------------------------------------------------------------
# serialization: CSV datasets, JSON ground truth


def write_dataset_csv(d: Dataset, path) -> None:
    """Write a dataset as CSV with header ``y,x1,...,xp`` and -1/+1 labels."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["y"] + [f"x{j + 1}" for j in range(d.p)])
        for i in range(d.n):
            writer.writerow([f"{int(d.y[i]):+d}"] + [f"{v:.17g}" for v in d.X[i]])


def read_dataset_csv(path) -> Dataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "y":
            raise DatasetError(f"{path}: expected header starting with 'y'")
        rows = [row for row in reader if row]
    y = np.array([float(r[0]) for r in rows])
    X = np.array([[float(v) for v in r[1:]] for r in rows])
    d = Dataset(X=X, y=y)
    validate_dataset(d)
    return d


def write_ground_truth_json(gt: GroundTruth, path) -> None:
    doc = {"beta_star": [float(v) for v in gt.beta_star], "support": sorted(gt.support)}
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def read_ground_truth_json(path) -> GroundTruth:
    with open(path) as fh:
        doc = json.load(fh)
    return GroundTruth(beta_star=np.asarray(doc["beta_star"], dtype=float))
