"""Seeded Monte Carlo trials joined with the analytic limits.

Trial ``i`` always uses ``sub_seed(master_seed, i)``, so output does not
depend on how many worker processes run the trials.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic
from .collapse import collapse, residual_beta2_estimate
from .domains import domain_of
from .errors import ConfigurationError
from .essential import classify_all
from .genrand import make_rng, sample_hypergraph, sub_seed
from .model import HypergraphSpec

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

OBSERVABLES = ("identifiable", "essential", "domains", "graphcase", "residual")
THREADS_ENV = "HYPERCOLLAPSE_THREADS"


@dataclass
class ExperimentConfig:
    spec: HypergraphSpec
    trials: int = 1
    master_seed: int = 0
    observables: tuple[str, ...] = ("identifiable", "essential")
    output_path: Path | None = None
    parallelism: int = 1
    record_wall_time: bool = False

    def __post_init__(self):
        self.observables = tuple(self.observables)
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if self.parallelism < 1:
            raise ConfigurationError("parallelism must be >= 1")
        unknown = set(self.observables) - set(OBSERVABLES)
        if unknown:
            raise ConfigurationError(f"unknown observables {sorted(unknown)}; choose from {OBSERVABLES}")
        if "graphcase" in self.observables and not self.spec.is_graph_case:
            raise ConfigurationError("graphcase observable needs beta_k = 0 for k >= 3")
        if "domains" in self.observables and self.spec.beta(1) != 0:
            raise ConfigurationError("domains observable needs beta_1 = 0")
        if self.output_path is not None:
            self.output_path = Path(self.output_path)

    @classmethod
    def from_mapping(cls, d: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        known = {"n_vertices", "betas", "trials", "master_seed", "observables", "output_path",
                 "parallelism", "record_wall_time"}
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"unknown config keys {sorted(extra)}")
        for key in ("n_vertices", "betas"):
            if key not in d:
                raise ConfigurationError(f"config is missing {key!r}")
        out = d.get("output_path")
        if out is not None and base_dir is not None and not Path(out).is_absolute():
            out = base_dir / out
        try:
            return cls(
                spec=HypergraphSpec(int(d["n_vertices"]), tuple(d["betas"])),
                trials=int(d.get("trials", 1)),
                master_seed=int(d.get("master_seed", 0)),
                observables=tuple(d.get("observables", ("identifiable", "essential"))),
                output_path=out,
                parallelism=int(d.get("parallelism", 1)),
                record_wall_time=bool(d.get("record_wall_time", False)),
            )
        except ConfigurationError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            data = tomllib.loads(path.read_text())
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from None
        return cls.from_mapping(data, base_dir=path.parent)


@dataclass
class TrialRecord:
    trial_index: int
    sub_seed: int
    N: int
    V_N: int
    H_N: int
    E_N_per_k: dict[int, int] | None = None
    E_N_total: int | None = None
    wall_time: float = 0.0
    residual_beta2: float | None = None
    domain_size: int | None = None
    core_frac: float | None = None
    mantle_frac: float | None = None


def run_trial(cfg: ExperimentConfig, index: int) -> TrialRecord:
    t0 = time.perf_counter()
    seed = sub_seed(cfg.master_seed, index)
    rng = make_rng(seed)
    spec = cfg.spec
    h = sample_hypergraph(spec, rng)
    obs = cfg.observables
    res = collapse(h, with_residual="residual" in obs)
    rec = TrialRecord(index, seed, spec.n_vertices, res.V_N, res.H_N)
    if "essential" in obs:
        rep = classify_all(h)
        rec.E_N_per_k = {k: rep.per_k_counts.get(k, 0) for k in range(1, spec.kmax + 1)}
        rec.E_N_total = rep.total
    if "residual" in obs and res.residual.n_vertices > 0:
        rec.residual_beta2 = residual_beta2_estimate(res)
    if "domains" in obs:
        rec.domain_size = domain_of(h, int(rng.integers(spec.n_vertices))).size
    if "graphcase" in obs:
        from .graphcase import decompose
        d = decompose(h)
        rec.core_frac, rec.mantle_frac = d.core_frac, d.mantle_frac
    rec.wall_time = time.perf_counter() - t0
    return rec


def _run_chunk(cfg: ExperimentConfig, indices: list[int]) -> list[TrialRecord]:
    return [run_trial(cfg, i) for i in indices]


@dataclass
class ObservableStats:
    mean: float
    stddev: float
    stderr: float
    limit: float | None
    z_gap: float | None

    @classmethod
    def of(cls, values, limit: float | None) -> "ObservableStats":
        x = np.asarray(values, dtype=float)
        mean = float(x.mean())
        sd = float(x.std(ddof=1)) if len(x) > 1 else 0.0
        se = sd / math.sqrt(len(x))
        z = (mean - limit) / se if limit is not None and se > 0 else None
        return cls(mean, sd, se, limit, z)


@dataclass
class AggregateStats:
    trials: int
    observables: dict[str, ObservableStats] = field(default_factory=dict)
    limits: analytic.LimitBundle | None = None

    def __getitem__(self, name: str) -> ObservableStats:
        return self.observables[name]

    def to_dict(self) -> dict:
        out = {"trials": self.trials,
               "observables": {k: vars(v) for k, v in self.observables.items()}}
        if self.limits is not None:
            out["limits"] = json.loads(self.limits.to_json())
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def aggregate(cfg: ExperimentConfig, records: list[TrialRecord]) -> AggregateStats:
    spec = cfg.spec
    n = spec.n_vertices
    lim = analytic.limits(spec.betas)
    agg = AggregateStats(trials=len(records), limits=lim)
    obs = agg.observables
    obs["V_N/N"] = ObservableStats.of([r.V_N / n for r in records], lim.v_limit)
    obs["H_N/N"] = ObservableStats.of([r.H_N / n for r in records], lim.h_limit)
    if "essential" in cfg.observables:
        obs["E_total/N"] = ObservableStats.of([r.E_N_total / n for r in records], lim.e_total_limit)
        for k in range(1, spec.kmax + 1):
            obs[f"E_k{k}/N"] = ObservableStats.of([r.E_N_per_k[k] / n for r in records], lim.e_limits[k])
    if "residual" in cfg.observables:
        vals = [r.residual_beta2 for r in records if r.residual_beta2 is not None]
        if vals:
            obs["residual_beta2"] = ObservableStats.of(vals, 0.5 * lim.gamma_at_tstar)
    if "domains" in cfg.observables:
        mean = analytic.Borel(2 * spec.beta(2)).mean
        obs["domain_size"] = ObservableStats.of([r.domain_size for r in records],
                                                mean if math.isfinite(mean) else None)
    if "graphcase" in cfg.observables:
        from .graphcase import core_mantle_limits
        core_lim = mantle_lim = None
        if 2 * spec.beta(2) > 1:
            core_lim, mantle_lim = core_mantle_limits(spec.beta(2))
        obs["core_frac"] = ObservableStats.of([r.core_frac for r in records], core_lim)
        obs["mantle_frac"] = ObservableStats.of([r.mantle_frac for r in records], mantle_lim)
    return agg


def resolve_parallelism(cfg: ExperimentConfig) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return cfg.parallelism


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> tuple[list[TrialRecord], AggregateStats]:
    # fail on unusable parameters before any trial runs
    analytic.limits(cfg.spec.betas)
    workers = min(resolve_parallelism(cfg), cfg.trials)
    indices = list(range(cfg.trials))
    if workers == 1:
        records = _run_chunk(cfg, indices)
    else:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, [cfg] * workers, chunks))
        records = sorted((r for part in parts for r in part), key=lambda r: r.trial_index)
    agg = aggregate(cfg, records)
    if write and cfg.output_path is not None:
        write_outputs(cfg, records, agg)
    return records, agg


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def csv_header(cfg: ExperimentConfig) -> list[str]:
    cols = ["trial", "seed", "N", "V_N", "H_N", "E_total"]
    cols += [f"E_k{k}" for k in range(1, cfg.spec.kmax + 1)]
    cols.append("wall_ms")
    if "residual" in cfg.observables:
        cols.append("residual_beta2")
    if "domains" in cfg.observables:
        cols.append("domain_size")
    if "graphcase" in cfg.observables:
        cols += ["core_frac", "mantle_frac"]
    return cols


def trials_csv(cfg: ExperimentConfig, records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(cfg))
    for r in records:
        per_k = r.E_N_per_k or {}
        row = [r.trial_index, r.sub_seed, r.N, r.V_N, r.H_N, r.E_N_total]
        row += [per_k.get(k) for k in range(1, cfg.spec.kmax + 1)]
        row.append(round(r.wall_time * 1000, 3) if cfg.record_wall_time else None)
        if "residual" in cfg.observables:
            row.append(r.residual_beta2)
        if "domains" in cfg.observables:
            row.append(r.domain_size)
        if "graphcase" in cfg.observables:
            row += [r.core_frac, r.mantle_frac]
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def write_outputs(cfg: ExperimentConfig, records: list[TrialRecord], agg: AggregateStats) -> None:
    out = cfg.output_path
    out.mkdir(parents=True, exist_ok=True)
    (out / "trials.csv").write_text(trials_csv(cfg, records))
    (out / "aggregate.json").write_text(agg.to_json())
