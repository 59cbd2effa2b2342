"""Tests for the experiment runner and its CSV table format."""

import json
import math

import numpy as np
import pytest

from sparsesvm.datagen import GenSpec
from sparsesvm.core import GdConfig
from sparsesvm.baselines import L1Config
from sparsesvm.harness import (
    METRICS,
    ExperimentSpec,
    built_in_scenarios,
    load_spec,
    read_table_csv,
    run_cell,
    run_experiment,
    scenario_by_name,
    write_table_csv,
)


def _small_spec(**kw):
    defaults = dict(
        name="mini",
        sweep_param="m",
        sweep_values=(2.0, 5.0),
        generator=GenSpec(n=40, p=20, s=3),
        methods=("gd", "oracle"),
        replicates=3,
        base_seed=7,
        gd=GdConfig(t_max=300),
        lasso=L1Config(inner_max_iter=300),
    )
    defaults.update(kw)
    return ExperimentSpec(**defaults)


class TestSpecValidation:
    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError):
            _small_spec(sweep_values=())

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            _small_spec(methods=("gd", "svm"))

    def test_zero_replicates_rejected(self):
        with pytest.raises(ValueError):
            _small_spec(replicates=0)


class TestRunCell:
    def test_replicate_seed_offsets_base(self):
        spec = _small_spec(methods=("gd",), replicates=1)
        a = run_cell(spec, 2.0, 0)
        b = run_cell(spec, 2.0, 0)
        assert a == b  # fully deterministic
        c = run_cell(spec, 2.0, 1)
        assert a != c  # a different replicate sees different data

    def test_metrics_complete(self):
        cell = run_cell(_small_spec(), 5.0, 0)
        for method in ("gd", "oracle"):
            metrics, status = cell[method]
            assert status == "ok"
            assert set(metrics) == set(METRICS)


class TestRunExperiment:
    def test_table_shape(self):
        spec = _small_spec()
        table = run_experiment(spec)
        assert len(table.raw) == 2 * 2 * len(METRICS)
        for vals in table.raw.values():
            assert len(vals) == 3
        assert table.n_failed == 0

    def test_adding_replicates_preserves_existing(self):
        """seed = base_seed + replicate, so replicate r is stable."""
        t3 = run_experiment(_small_spec(replicates=3))
        t5 = run_experiment(_small_spec(replicates=5))
        for key, vals in t3.raw.items():
            np.testing.assert_array_equal(vals, t5.raw[key][:3])

    def test_quantiles_type7(self):
        spec = _small_spec(replicates=4, methods=("gd",), sweep_values=(5.0,))
        table = run_experiment(spec)
        key = (5.0, "gd", "accuracy")
        vals = np.asarray(table.raw[key])
        rows = {(v, m, met): (med, q25, q75) for v, m, met, med, q25, q75 in table.rows()}
        med, q25, q75 = rows[(5.0, "gd", "accuracy")]
        assert med == pytest.approx(np.percentile(vals, 50))
        assert q25 == pytest.approx(np.percentile(vals, 25))
        assert q75 == pytest.approx(np.percentile(vals, 75))

    def test_single_replicate_quantiles_collapse(self):
        table = run_experiment(_small_spec(replicates=1, methods=("gd",)))
        for _, _, _, med, q25, q75 in table.rows():
            if not math.isnan(med):
                assert q25 == med == q75

    def test_failure_becomes_nan_and_counts(self):
        # eta large enough to blow up the multiplicative iteration
        spec = _small_spec(methods=("gd",), gd=GdConfig(eta=1e6, t_max=5000), replicates=2)
        table = run_experiment(spec)
        assert table.n_failed == 4  # 2 values x 2 replicates
        for (value, method, metric), vals in table.raw.items():
            assert all(math.isnan(v) for v in vals)


class TestCsv:
    def test_header_and_roundtrip(self, tmp_path):
        table = run_experiment(_small_spec(replicates=2))
        path = tmp_path / "table.csv"
        write_table_csv(table, path)
        assert path.read_text().splitlines()[0] == (
            "swept_var,value,method,metric,median,q25,q75"
        )
        header, rows = read_table_csv(path)
        expected = table.rows()
        assert len(rows) == len(expected)
        for got, want in zip(rows, expected):
            assert got[0] == "m"
            assert got[1:4] == want[:3]
            for a, b in zip(got[4:], want[3:]):
                assert (math.isnan(a) and math.isnan(b)) or a == b

    def test_byte_identical_rerun(self, tmp_path):
        spec = _small_spec(replicates=2)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_table_csv(run_experiment(spec), p1)
        write_table_csv(run_experiment(spec), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_categorical_sweep_values(self, tmp_path):
        spec = _small_spec(
            sweep_param="structure",
            sweep_values=("A", "B"),
            generator=GenSpec(n=40, p=20, m=5.0),
            methods=("gd",),
            replicates=2,
        )
        table = run_experiment(spec)
        path = tmp_path / "t.csv"
        write_table_csv(table, path)
        _, rows = read_table_csv(path)
        assert {r[1] for r in rows} == {"A", "B"}


class TestJsonSpecs:
    def test_from_json(self, tmp_path):
        doc = {
            "name": "demo",
            "sweep": {"param": "m", "values": [1.0, 2.0]},
            "generator": {"n": 30, "p": 10, "s": 2},
            "methods": ["gd"],
            "replicates": 2,
            "base_seed": 11,
            "gd": {"t_max": 100},
        }
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(doc))
        spec = load_spec(path)
        assert spec.name == "demo"
        assert spec.sweep_values == (1.0, 2.0)
        assert spec.generator.n == 30
        assert spec.gd.t_max == 100
        assert spec.replicates == 2

    def test_defaults_filled(self):
        spec = ExperimentSpec.from_json(
            {"name": "d", "sweep": {"param": "m", "values": [1.0]}}
        )
        assert spec.methods == ("gd", "lasso", "oracle")
        assert spec.replicates == 30


class TestScenarios:
    def test_names_unique(self):
        names = [s.name for s in built_in_scenarios()]
        assert len(names) == len(set(names))

    def test_lookup(self):
        spec = scenario_by_name("init-sweep")
        assert spec.sweep_param == "alpha"
        assert spec.methods == ("gd",)

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            scenario_by_name("nope")

    def test_expected_catalog(self):
        names = {s.name for s in built_in_scenarios()}
        assert names == {
            "init-sweep",
            "strength-sweep",
            "sample-sweep",
            "structures",
            "structures-uniform",
            "structures-t3",
            "gamma-sweep",
            "model1",
            "model2",
        }
