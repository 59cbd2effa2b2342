"""Render median/IQR figures from an experiment table.

One PNG per metric: the median across replicates as a line (numeric
sweeps) or marker series (categorical sweeps), with the 25th-75th
percentile band shaded per method.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .harness import METRICS, ExperimentTable

_METHOD_STYLE = {
    "gd": {"color": "tab:blue", "label": "GD"},
    "lasso": {"color": "tab:orange", "label": "Lasso"},
    "oracle": {"color": "tab:green", "label": "Oracle"},
}

_LOG_PARAMS = {"alpha", "gamma"}


def plot_table(table: ExperimentTable, out_dir) -> list[str]:
    """Write one figure per metric; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    rows = table.rows()
    numeric = all(isinstance(v, (int, float)) for v in table.sweep_values)
    paths = []
    for metric in METRICS:
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for method in table.methods:
            pts = [(r[0], r[3], r[4], r[5]) for r in rows if r[1] == method and r[2] == metric]
            if not pts or all(math.isnan(p[1]) for p in pts):
                continue
            style = _METHOD_STYLE.get(method, {"label": method})
            if numeric:
                xs = [p[0] for p in pts]
                ax.plot(xs, [p[1] for p in pts], marker="o", markersize=3, **style)
                ax.fill_between(
                    xs, [p[2] for p in pts], [p[3] for p in pts],
                    alpha=0.2, color=style.get("color"),
                )
            else:
                xs = range(len(pts))
                med = [p[1] for p in pts]
                ax.errorbar(
                    xs, med,
                    yerr=[[m - p[2] for m, p in zip(med, pts)],
                          [p[3] - m for m, p in zip(med, pts)]],
                    fmt="o", capsize=3, **style,
                )
                ax.set_xticks(list(xs))
                ax.set_xticklabels([str(p[0]) for p in pts])
        if numeric and table.sweep_param in _LOG_PARAMS:
            ax.set_xscale("log")
        ax.set_xlabel(table.sweep_param)
        ax.set_ylabel(metric.replace("_", " "))
        ax.set_title(table.name)
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{table.name}_{metric}.png")
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths
