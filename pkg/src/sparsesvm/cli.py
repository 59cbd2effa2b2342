"""Command-line interface.

Subcommands: gen, fit-gd, fit-lasso, fit-oracle, coherence, bench.
Every run is seeded (default 20240601) so results are reproducible by
default.  ``bench`` exits with code 2 if any replicate cell failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness
from .baselines import L1Config, fit_l1_svm, fit_oracle
from .core import (
    GdConfig,
    read_dataset_csv,
    read_ground_truth_json,
    write_dataset_csv,
    write_ground_truth_json,
)
from .datagen import COVARIATE_DISTS, GenSpec, SCHEMES, STRUCTURES, generate
from .metrics import coherence
from .solver import fit_gd

DEFAULT_SEED = 20240601


def _add_gd_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=1e-8, help="initialization size")
    p.add_argument("--eta", type=float, default=0.5, help="step size")
    p.add_argument("--gamma", type=float, default=1e-4, help="smoothness parameter")
    p.add_argument("--t-max", type=int, default=10_000, help="iteration cap")
    p.add_argument("--eval-every", type=int, default=10, help="checkpoint cadence")


def _gd_config(args) -> GdConfig:
    return GdConfig(
        alpha=args.alpha, eta=args.eta, gamma=args.gamma,
        t_max=args.t_max, eval_every=args.eval_every, seed=args.seed,
    )


def _write_fit(result, path) -> None:
    doc = {
        "beta_hat": [float(v) for v in result.beta_hat],
        "t_selected": result.t_selected,
        "stop_reason": result.stop_reason,
    }
    if result.selected_param is not None:
        doc["selected_lambda"] = result.selected_param
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _print_fit(result) -> None:
    nz = int(np.count_nonzero(result.beta_hat))
    best = min(result.checkpoints, key=lambda ck: 1.0 - ck.val_accuracy)
    print(f"stop_reason={result.stop_reason} t_selected={result.t_selected} "
          f"nonzeros={nz} val_accuracy={best.val_accuracy:.4f}")


def cmd_gen(args) -> int:
    spec = GenSpec(
        scheme=args.scheme, n=args.n, p=args.p, m=args.m, s=args.s,
        structure=args.structure, covariate_dist=args.dist, seed=args.seed,
    )
    train, val, test, gt = generate(spec)
    os.makedirs(args.out_dir, exist_ok=True)
    for name, d in (("train", train), ("validation", val), ("test", test)):
        write_dataset_csv(d, os.path.join(args.out_dir, f"{name}.csv"))
    write_ground_truth_json(gt, os.path.join(args.out_dir, "ground_truth.json"))
    print(f"wrote train/validation/test CSVs and ground_truth.json to {args.out_dir}")
    return 0


def cmd_fit_gd(args) -> int:
    train = read_dataset_csv(args.train)
    val = read_dataset_csv(args.validation)
    support = None
    if args.ground_truth:
        support = read_ground_truth_json(args.ground_truth).support
    result = fit_gd(train, val, _gd_config(args), support=support,
                    trajectory_path=args.trajectory)
    _print_fit(result)
    if args.out:
        _write_fit(result, args.out)
    return 0


def cmd_fit_lasso(args) -> int:
    train = read_dataset_csv(args.train)
    val = read_dataset_csv(args.validation)
    cfg = L1Config(
        inner_max_iter=args.inner_max_iter, inner_tol=args.inner_tol,
        gamma=args.gamma, step=args.step, seed=args.seed,
    )
    result = fit_l1_svm(train, val, cfg)
    _print_fit(result)
    print(f"selected_lambda={result.selected_param:.6g}")
    if args.out:
        _write_fit(result, args.out)
    return 0


def cmd_fit_oracle(args) -> int:
    train = read_dataset_csv(args.train)
    val = read_dataset_csv(args.validation)
    gt = read_ground_truth_json(args.ground_truth)
    result = fit_oracle(train, val, gt.support, _gd_config(args))
    _print_fit(result)
    if args.out:
        _write_fit(result, args.out)
    return 0


def cmd_coherence(args) -> int:
    d = read_dataset_csv(args.data)
    report = coherence(d.X, s=args.s)
    print(f"delta = {report.delta:.17g}")
    print(f"argmax_pair = {report.argmax_pair}")
    if report.budget is not None:
        print(f"budget 1/(s log p) = {report.budget:.17g}")
    return 0


def cmd_bench(args) -> int:
    if os.path.exists(args.scenario):
        spec = harness.load_spec(args.scenario)
    else:
        try:
            spec = harness.scenario_by_name(args.scenario)
        except KeyError:
            names = ", ".join(s.name for s in harness.built_in_scenarios())
            print(f"unknown scenario {args.scenario!r}; built-ins: {names}", file=sys.stderr)
            return 1
    import dataclasses

    if args.replicates is not None:
        spec = dataclasses.replace(spec, replicates=args.replicates)
    if args.seed != DEFAULT_SEED or spec.base_seed is None:
        spec = dataclasses.replace(spec, base_seed=args.seed)
    table = harness.run_experiment(spec, jobs=args.jobs)
    harness.write_table_csv(table, args.out)
    print(f"wrote {args.out} ({len(table.rows())} rows, {table.n_failed} failed cells)")
    if args.plot_dir:
        from .plotting import plot_table

        for path in plot_table(table, args.plot_dir):
            print(f"wrote {path}")
    return 2 if table.n_failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsesvm",
        description="Sparse SVM via over-parameterized gradient descent: "
                    "data generation, solvers, coherence audit, benchmarks.",
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="global seed (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate synthetic train/validation/test CSVs")
    p.add_argument("--scheme", choices=SCHEMES, default="default_logistic")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--p", type=int, default=400)
    p.add_argument("--m", type=float, default=10.0, help="signal strength")
    p.add_argument("--s", type=int, default=4, help="number of signals")
    p.add_argument("--structure", choices=sorted(STRUCTURES), default=None)
    p.add_argument("--dist", choices=COVARIATE_DISTS, default="gaussian")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fit-gd", help="over-parameterized gradient descent fit")
    p.add_argument("--train", required=True)
    p.add_argument("--validation", required=True)
    p.add_argument("--ground-truth", default=None,
                   help="ground-truth JSON; enables off-support trajectory metrics")
    p.add_argument("--trajectory", default=None, help="write per-checkpoint CSV here")
    p.add_argument("--out", default=None, help="write fit result JSON here")
    _add_gd_flags(p)
    p.set_defaults(func=cmd_fit_gd)

    p = sub.add_parser("fit-lasso", help="l1-penalized smoothed-hinge path fit")
    p.add_argument("--train", required=True)
    p.add_argument("--validation", required=True)
    p.add_argument("--gamma", type=float, default=1e-4)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--inner-max-iter", type=int, default=5000)
    p.add_argument("--inner-tol", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit_lasso)

    p = sub.add_parser("fit-oracle", help="smoothed-hinge fit restricted to the true support")
    p.add_argument("--train", required=True)
    p.add_argument("--validation", required=True)
    p.add_argument("--ground-truth", required=True)
    p.add_argument("--out", default=None)
    _add_gd_flags(p)
    p.set_defaults(func=cmd_fit_oracle)

    p = sub.add_parser("coherence", help="audit design-matrix coherence")
    p.add_argument("--data", required=True, help="dataset CSV")
    p.add_argument("--s", type=int, default=None, help="sparsity for the 1/(s log p) budget")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("bench", help="run a built-in scenario or a spec JSON")
    p.add_argument("scenario", help="scenario name or path to a spec .json")
    p.add_argument("--out", default="table.csv", help="output table CSV")
    p.add_argument("--jobs", type=int, default=1, help="parallel replicate workers")
    p.add_argument("--replicates", type=int, default=None, help="override replicate count")
    p.add_argument("--plot-dir", default=None, help="also render figures into this directory")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
