import json
from pathlib import Path

import numpy as np
import pytest

from hypercollapse import analytic
from hypercollapse.errors import ConfigurationError
from hypercollapse.experiments import (ExperimentConfig, ObservableStats, csv_header, run_experiment,
                                       trials_csv)
from hypercollapse.model import HypergraphSpec

GOLDEN = Path(__file__).parent / "golden"


def test_empty_spec_single_trial():
    cfg = ExperimentConfig(HypergraphSpec(50, (0.0,)), trials=1)
    recs, agg = run_experiment(cfg)
    r = recs[0]
    assert (r.V_N, r.H_N, r.E_N_total) == (0, 0, 0)
    assert r.E_N_per_k == {1: 0}
    assert agg["V_N/N"].mean == 0.0


def test_golden_trials_csv():
    cfg = ExperimentConfig.load(GOLDEN / "small.toml")
    recs, _ = run_experiment(cfg, write=False)
    assert trials_csv(cfg, recs) == (GOLDEN / "small_trials.csv").read_text()


def test_header_schema():
    cfg = ExperimentConfig(HypergraphSpec(10, (0.1, 0.2, 0.3)))
    assert csv_header(cfg) == ["trial", "seed", "N", "V_N", "H_N", "E_total", "E_k1", "E_k2", "E_k3", "wall_ms"]


def test_byte_identical_reruns(tmp_path):
    outs = []
    for name in ("a", "b"):
        cfg = ExperimentConfig.load(GOLDEN / "small.toml")
        cfg.output_path = tmp_path / name
        run_experiment(cfg)
        outs.append(((tmp_path / name / "trials.csv").read_bytes(),
                     (tmp_path / name / "aggregate.json").read_bytes()))
    assert outs[0] == outs[1]


def test_parallelism_does_not_change_results(monkeypatch):
    cfg = ExperimentConfig(HypergraphSpec(400, (0.1, 0.5)), trials=5, master_seed=3)
    serial = trials_csv(cfg, run_experiment(cfg, write=False)[0])
    monkeypatch.setenv("HYPERCOLLAPSE_THREADS", "2")
    parallel = trials_csv(cfg, run_experiment(cfg, write=False)[0])
    assert serial == parallel


def test_wall_time_optional():
    cfg = ExperimentConfig(HypergraphSpec(100, (0.1, 0.5)), trials=2, record_wall_time=True)
    text = trials_csv(cfg, run_experiment(cfg, write=False)[0])
    assert all(float(line.split(",")[-1]) >= 0 for line in text.splitlines()[1:])


def test_record_invariants():
    cfg = ExperimentConfig(HypergraphSpec(500, (0.1, 0.4, 0.2)), trials=6, master_seed=8)
    for r in run_experiment(cfg, write=False)[0]:
        assert r.E_N_total == sum(r.E_N_per_k.values())
        assert 0 <= r.V_N <= r.N
        assert r.E_N_total <= r.H_N


def test_aggregate_stats():
    s = ObservableStats.of([1.0, 2.0, 3.0], 2.5)
    assert s.mean == 2.0 and s.stddev == 1.0
    assert s.stderr == pytest.approx(1 / np.sqrt(3))
    assert s.z_gap == pytest.approx(-0.5 * np.sqrt(3))
    assert ObservableStats.of([1.0, 1.0], 1.0).z_gap is None


def test_aggregate_json_schema(tmp_path):
    cfg = ExperimentConfig(HypergraphSpec(300, (0.1, 0.5)), trials=3, output_path=tmp_path)
    run_experiment(cfg)
    agg = json.loads((tmp_path / "aggregate.json").read_text())
    for name in ("V_N/N", "H_N/N", "E_total/N", "E_k1/N", "E_k2/N"):
        assert set(agg["observables"][name]) == {"mean", "stddev", "stderr", "limit", "z_gap"}
    assert agg["limits"]["t_star"] == analytic.t_star([0.1, 0.5])


def test_graph_and_domain_observables():
    cfg = ExperimentConfig(HypergraphSpec(2000, (0.0, 1.0)), trials=3,
                           observables=("identifiable", "graphcase", "domains"))
    recs, agg = run_experiment(cfg, write=False)
    assert all(r.core_frac is not None and r.domain_size >= 1 for r in recs)
    assert agg["mantle_frac"].limit == pytest.approx(2 * analytic.theta(1.0) * (1 - analytic.theta(1.0)))
    assert agg["domain_size"].limit is None


@pytest.mark.parametrize("kwargs", [
    dict(trials=0),
    dict(observables=("identifiable", "spectrum")),
    dict(observables=("graphcase",), spec=HypergraphSpec(10, (0.1, 0.1, 0.1))),
    dict(observables=("domains",), spec=HypergraphSpec(10, (0.1, 0.1))),
])
def test_config_errors(kwargs):
    kwargs.setdefault("spec", HypergraphSpec(10, (0.1,)))
    with pytest.raises(ConfigurationError):
        ExperimentConfig(**kwargs)


def test_config_file_errors(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("n_vertices = 10\nbetas = [0.1]\ncolour = 'red'\n")
    with pytest.raises(ConfigurationError):
        ExperimentConfig.load(p)
    p.write_text("n_vertices = 10\n")
    with pytest.raises(ConfigurationError):
        ExperimentConfig.load(p)
    with pytest.raises(ConfigurationError):
        ExperimentConfig.load(tmp_path / "missing.toml")


def test_convergence_trend():
    spec_betas = (0.1, 0.5)
    t = analytic.t_star(spec_betas)
    gaps, errs = [], []
    for n in (10**3, 10**4, 10**5):
        cfg = ExperimentConfig(HypergraphSpec(n, spec_betas), trials=6, master_seed=61, observables=("identifiable",))
        s = run_experiment(cfg, write=False)[1]["V_N/N"]
        gaps.append(abs(s.mean - t))
        errs.append(s.stderr)
    for i in range(2):
        assert gaps[i + 1] <= gaps[i] + 2 * max(errs[i], errs[i + 1])
