"""Domains: what a single added patch at v manages to identify.

Without patches elsewhere the domain of v is the set identified after
adding one patch at v.  If the hypergraph already carries patches the
same definition is used (collapse with the extra patch), which then
includes everything those patches identify as well.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chisquare

from . import analytic
from .collapse import collapse
from .errors import ConfigurationError, InputError
from .genrand import sample_hypergraph
from .model import Hypergraph, HypergraphSpec


@dataclass(frozen=True)
class DomainSample:
    vertex: int
    domain: frozenset[int]
    # None marks a domain larger than the overflow threshold
    size: int | None

    @property
    def overflow(self) -> bool:
        return self.size is None


def domain_of(h: Hypergraph, v: int, overflow_at: int | None = None) -> DomainSample:
    h.check_vertex(v)
    dom = collapse(h, policy="fifo", extra_patches=[v]).identifiable_vertices
    size = len(dom)
    return DomainSample(v, dom, None if overflow_at is not None and size > overflow_at else size)


@dataclass
class DomainDistribution:
    alpha: float
    probes: int
    counts: dict[int, int] = field(default_factory=dict)
    overflow: int = 0
    overflow_at: int = 1000

    def frequency(self, n: int) -> float:
        return self.counts.get(n, 0) / self.probes

    def bucketed(self, top: int = 8) -> tuple[np.ndarray, np.ndarray]:
        """Observed and Borel-expected counts over buckets 1..top and >top."""
        b = analytic.Borel(self.alpha)
        obs = [self.counts.get(n, 0) for n in range(1, top + 1)]
        obs.append(self.probes - sum(obs))
        probs = [analytic.borel_pmf(b, n) for n in range(1, top + 1)]
        probs.append(max(0.0, 1.0 - sum(probs)))
        return np.array(obs, dtype=float), np.array(probs) * self.probes

    def chi_square(self, top: int = 8) -> tuple[float, float]:
        obs, exp = self.bucketed(top)
        stat, p = chisquare(obs, exp)
        return float(stat), float(p)

    def to_csv(self) -> str:
        b = analytic.Borel(self.alpha)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["size", "count", "frequency", "borel_pmf"])
        for n in sorted(self.counts):
            c = self.counts[n]
            w.writerow([n, c, repr(c / self.probes), repr(analytic.borel_pmf(b, n))])
        if self.overflow:
            w.writerow([f">{self.overflow_at}", self.overflow, repr(self.overflow / self.probes), repr(b.escape_p)])
        return buf.getvalue()


def domain_size_distribution(spec: HypergraphSpec, trials: int, rng: np.random.Generator, *,
                             probes_per_graph: int = 1, overflow_at: int = 1000) -> DomainDistribution:
    """Empirical domain-size law of a uniform vertex, against Borel(2 beta_2).

    Each of ``trials`` probes samples fresh hypergraphs; with
    ``probes_per_graph > 1`` consecutive probes share a hypergraph and are
    no longer independent.
    """
    if spec.beta(1) != 0:
        raise ConfigurationError("domain law is stated for beta_1 = 0")
    if trials < 1 or probes_per_graph < 1:
        raise InputError("trials and probes_per_graph must be >= 1")
    dist = DomainDistribution(alpha=2 * spec.beta(2), probes=trials, overflow_at=overflow_at)
    h = None
    for t in range(trials):
        if t % probes_per_graph == 0:
            h = sample_hypergraph(spec, rng)
        v = int(rng.integers(spec.n_vertices))
        s = domain_of(h, v, overflow_at).size
        if s is None:
            dist.overflow += 1
        else:
            dist.counts[s] = dist.counts.get(s, 0) + 1
    dist.counts = dict(sorted(dist.counts.items()))
    return dist
