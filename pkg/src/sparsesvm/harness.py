"""Experiment runner: declarative sweeps, seeded replicates, quantile tables.

An experiment sweeps exactly one variable (a generator field such as m,
n, structure, or covariate_dist, or a solver field such as gamma or
alpha) over a list of values, runs ``replicates`` seeded repetitions per
value (seed = base_seed + replicate, so adding replicates never changes
existing ones), fits the requested methods, and aggregates each metric
to (median, q25, q75) using linear interpolation between order
statistics (the "type 7" quantile rule).  A replicate that diverges
contributes NaN raw values, which propagate into the quantiles rather
than silently biasing them.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import L1Config, fit_l1_svm, fit_oracle
from .core import DivergenceError, GdConfig
from .datagen import GenSpec, generate
from .metrics import (
    accuracy,
    gd_selection_tau,
    normalized_direction_error,
    relative_error,
    selection_metrics,
)
from .solver import fit_gd

METHODS = ("gd", "lasso", "oracle")
METRICS = ("direction_error", "relative_error", "accuracy", "false_positive", "true_negative")

# sweep parameters that belong to the solver configs rather than the generator
_GD_PARAMS = {"alpha", "eta", "gamma", "t_max"}


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    sweep_param: str
    sweep_values: tuple
    generator: GenSpec = field(default_factory=GenSpec)
    methods: tuple[str, ...] = ("gd", "lasso", "oracle")
    replicates: int = 30
    base_seed: int = 20240601
    gd: GdConfig = field(default_factory=GdConfig)
    lasso: L1Config = field(default_factory=L1Config)

    def __post_init__(self):
        if len(self.sweep_values) < 1:
            raise ValueError("sweep needs at least one value")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentSpec":
        """Build a spec from the JSON document schema described in the README."""
        sweep = doc["sweep"]
        return cls(
            name=doc["name"],
            sweep_param=sweep["param"],
            sweep_values=tuple(sweep["values"]),
            generator=GenSpec(**doc.get("generator", {})),
            methods=tuple(doc.get("methods", ("gd", "lasso", "oracle"))),
            replicates=int(doc.get("replicates", 30)),
            base_seed=int(doc.get("base_seed", 20240601)),
            gd=GdConfig(**doc.get("gd", {})),
            lasso=L1Config(**doc.get("lasso", {})),
        )


@dataclass
class ExperimentTable:
    name: str
    sweep_param: str
    sweep_values: tuple
    methods: tuple[str, ...]
    # raw[(value, method, metric)] -> per-replicate floats (NaN = failed cell)
    raw: dict = field(default_factory=dict)
    # statuses[(value, method)] -> per-replicate "ok" or an error string
    statuses: dict = field(default_factory=dict)

    def rows(self):
        """Sorted (value, method, metric, median, q25, q75) rows."""
        out = []
        for value in self.sweep_values:
            for method in self.methods:
                for metric in METRICS:
                    vals = np.asarray(self.raw[(value, method, metric)], dtype=float)
                    q25, med, q75 = np.percentile(vals, [25.0, 50.0, 75.0])
                    out.append((value, method, metric, float(med), float(q25), float(q75)))
        out.sort(key=lambda r: (_sort_key(r[0]), r[1], r[2]))
        return out

    @property
    def n_failed(self) -> int:
        return sum(1 for ss in self.statuses.values() for s in ss if s != "ok")


def _sort_key(value):
    return (0, float(value), "") if isinstance(value, (int, float)) else (1, 0.0, str(value))


def _apply_sweep(spec: ExperimentSpec, value, replicate_seed: int):
    gen = dataclasses.replace(spec.generator, seed=replicate_seed)
    gd_cfg = spec.gd
    lasso_cfg = spec.lasso
    if spec.sweep_param in _GD_PARAMS:
        gd_cfg = dataclasses.replace(gd_cfg, **{spec.sweep_param: value})
        if spec.sweep_param == "gamma":
            lasso_cfg = dataclasses.replace(lasso_cfg, gamma=value)
    else:
        gen = dataclasses.replace(gen, **{spec.sweep_param: value})
    return gen, gd_cfg, lasso_cfg


def _nan_metrics():
    return {metric: math.nan for metric in METRICS}


def run_cell(spec: ExperimentSpec, value, replicate: int):
    """One (swept value, replicate) task: generate, fit each method, score."""
    seed = spec.base_seed + replicate
    gen, gd_cfg, lasso_cfg = _apply_sweep(spec, value, seed)
    train, val, test, gt = generate(gen)
    results = {}
    for method in spec.methods:
        try:
            if method == "gd":
                fit = fit_gd(train, val, gd_cfg)
                tau = gd_selection_tau(fit.beta_hat)
            elif method == "lasso":
                fit = fit_l1_svm(train, val, lasso_cfg)
                tau = 0.0
            else:
                fit = fit_oracle(train, val, gt.support, gd_cfg)
                tau = 0.0
            sel = selection_metrics(fit.beta_hat, gt, tau)
            # an all-zero estimate (e.g. the path solver picking lambda_max)
            # has no direction; record NaN rather than failing the cell
            if np.any(fit.beta_hat):
                dir_err = normalized_direction_error(fit.beta_hat, gt.beta_star)
            else:
                dir_err = math.nan
            results[method] = (
                {
                    "direction_error": dir_err,
                    "relative_error": relative_error(fit.beta_hat, gt.beta_star),
                    "accuracy": accuracy(fit.beta_hat, test),
                    "false_positive": float(sel.false_positive),
                    "true_negative": float(sel.true_negative),
                },
                "ok",
            )
        except (DivergenceError, ValueError) as exc:
            results[method] = (_nan_metrics(), f"{type(exc).__name__}: {exc}")
    return results


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> ExperimentTable:
    table = ExperimentTable(
        name=spec.name,
        sweep_param=spec.sweep_param,
        sweep_values=spec.sweep_values,
        methods=spec.methods,
    )
    tasks = [(value, r) for value in spec.sweep_values for r in range(spec.replicates)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_cell, *zip(*[(spec, v, r) for v, r in tasks])))
    else:
        outcomes = [run_cell(spec, v, r) for v, r in tasks]

    for value in spec.sweep_values:
        for method in spec.methods:
            for metric in METRICS:
                table.raw[(value, method, metric)] = [math.nan] * spec.replicates
            table.statuses[(value, method)] = ["ok"] * spec.replicates
    for (value, r), cell in zip(tasks, outcomes):
        for method, (metrics, status) in cell.items():
            for metric in METRICS:
                table.raw[(value, method, metric)][r] = metrics[metric]
            table.statuses[(value, method)][r] = status
    return table


def write_table_csv(table: ExperimentTable, path) -> None:
    """CSV with header swept_var,value,method,metric,median,q25,q75 and
    17-significant-digit floats (lossless for 64-bit values)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["swept_var", "value", "method", "metric", "median", "q25", "q75"])
        for value, method, metric, med, q25, q75 in table.rows():
            val_str = f"{value:.17g}" if isinstance(value, (int, float)) else str(value)
            writer.writerow(
                [table.sweep_param, val_str, method, metric]
                + [f"{x:.17g}" for x in (med, q25, q75)]
            )


def read_table_csv(path):
    """Round-trip reader, mainly for tests: list of row tuples."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = []
        for row in reader:
            swept, value, method, metric, med, q25, q75 = row
            try:
                value = float(value)
            except ValueError:
                pass
            rows.append((swept, value, method, metric, float(med), float(q25), float(q75)))
    return header, rows


def built_in_scenarios() -> list[ExperimentSpec]:
    """The named benchmark scenarios with their default parameters."""
    default = GenSpec()
    return [
        ExperimentSpec(
            name="init-sweep",
            sweep_param="alpha",
            sweep_values=(1e-4, 1e-6, 1e-8, 1e-10),
            generator=default,
            methods=("gd",),
        ),
        ExperimentSpec(
            name="strength-sweep",
            sweep_param="m",
            sweep_values=tuple(0.5 * k for k in range(1, 21)),
            generator=default,
        ),
        ExperimentSpec(
            name="sample-sweep",
            sweep_param="n",
            sweep_values=tuple(50 * k for k in range(1, 9)),
            generator=dataclasses.replace(default, m=5.0),
        ),
        ExperimentSpec(
            name="structures",
            sweep_param="structure",
            sweep_values=("A", "B", "C", "D", "E"),
            generator=default,
        ),
        ExperimentSpec(
            name="structures-uniform",
            sweep_param="structure",
            sweep_values=("A", "B", "C", "D", "E"),
            generator=dataclasses.replace(default, covariate_dist="uniform_pm1"),
        ),
        ExperimentSpec(
            name="structures-t3",
            sweep_param="structure",
            sweep_values=("A", "B", "C", "D", "E"),
            generator=dataclasses.replace(default, covariate_dist="student_t3"),
        ),
        ExperimentSpec(
            name="gamma-sweep",
            sweep_param="gamma",
            sweep_values=(2.5e-5, 5e-5, 1e-4, 2.5e-4, 5e-4, 1e-3),
            generator=default,
            methods=("gd",),
        ),
        ExperimentSpec(
            name="model1",
            sweep_param="scheme",
            sweep_values=("model1_probit",),
            generator=dataclasses.replace(default, scheme="model1_probit"),
        ),
        ExperimentSpec(
            name="model2",
            sweep_param="scheme",
            sweep_values=("model2_mixture",),
            generator=dataclasses.replace(default, scheme="model2_mixture"),
        ),
    ]


def scenario_by_name(name: str) -> ExperimentSpec:
    for spec in built_in_scenarios():
        if spec.name == name:
            return spec
    raise KeyError(f"no built-in scenario named {name!r}")


def load_spec(path) -> ExperimentSpec:
    with open(path) as fh:
        return ExperimentSpec.from_json(json.load(fh))
