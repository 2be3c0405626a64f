"""Graph-case structure: components, 2-core, mantle and bridges.

Only 2-edges form the graph.  Parallel 2-edges over one pair count as a
2-cycle, so neither copy is a bridge and both survive 2-core peeling.
"""
from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import analytic
from .errors import ConfigurationError
from .essential import EssentialReport, _report
from .genrand import make_rng, sample_hypergraph, sub_seed
from .model import Hypergraph, HypergraphSpec


def _graph_edges(h: Hypergraph, warn_patches: bool = False) -> list[int]:
    ids = []
    saw_patch = False
    for i, e in enumerate(h.edges):
        if len(e) == 2:
            ids.append(i)
        elif len(e) == 1:
            saw_patch = True
        else:
            raise ConfigurationError(f"edge {i} has {len(e)} vertices; graph routines need 2-edges")
    if saw_patch and warn_patches:
        warnings.warn("patches are ignored by graph routines", stacklevel=3)
    return ids


def components(h: Hypergraph) -> list[list[int]]:
    """Connected components of the 2-edge graph, each sorted, in order of smallest vertex."""
    parent = list(range(h.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in _graph_edges(h):
        a, b = h.edges[i]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(h.n_vertices):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def two_core(h: Hypergraph) -> frozenset[int]:
    """Vertices of the maximal subgraph with all degrees >= 2."""
    ids = _graph_edges(h, warn_patches=True)
    deg = [0] * h.n_vertices
    nbrs: list[list[int]] = [[] for _ in range(h.n_vertices)]
    for i in ids:
        a, b = h.edges[i]
        deg[a] += 1
        deg[b] += 1
        nbrs[a].append(b)
        nbrs[b].append(a)
    alive = bytearray(b"\x01") * h.n_vertices
    queue = deque(v for v in range(h.n_vertices) if deg[v] <= 1)
    for v in queue:
        alive[v] = 0
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    alive[w] = 0
                    queue.append(w)
    return frozenset(v for v in range(h.n_vertices) if alive[v])


def bridges(h: Hypergraph) -> frozenset[int]:
    """Edge ids of 2-edges whose removal disconnects their component."""
    return frozenset(_bridge_pass(h)[0])


def _bridge_pass(h: Hypergraph, patch_count: list[int] | None = None):
    """Iterative DFS low-link.

    Returns the bridge ids and, for each bridge, the number of patches on
    the side away from the DFS root.  ``patch_count[v]`` is the number of
    patches on v (zeros if not given).
    """
    n = h.n_vertices
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in _graph_edges(h):
        a, b = h.edges[i]
        adj[a].append((b, i))
        adj[b].append((a, i))
    pc = patch_count or [0] * n
    disc = [-1] * n
    low = [0] * n
    sub = [0] * n
    out: list[int] = []
    below: dict[int, int] = {}
    t = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        sub[root] = pc[root]
        t += 1
        stack = [(root, -1, 0)]
        while stack:
            v, pedge, j = stack[-1]
            if j < len(adj[v]):
                stack[-1] = (v, pedge, j + 1)
                w, eid = adj[v][j]
                if eid == pedge:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = t
                    sub[w] = pc[w]
                    t += 1
                    stack.append((w, eid, 0))
                elif disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    sub[p] += sub[v]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] > disc[p]:
                        out.append(pedge)
                        below[pedge] = sub[v]
    return out, below, sub, disc


@dataclass
class GraphDecomposition:
    n_vertices: int
    components: list[list[int]]
    giant_index: int | None
    two_core: frozenset[int]
    mantle: frozenset[int]
    bridges: frozenset[int]
    mantle_edges: int

    @property
    def giant(self) -> list[int]:
        return [] if self.giant_index is None else self.components[self.giant_index]

    @property
    def giant_core(self) -> frozenset[int]:
        return self.two_core & frozenset(self.giant)

    @property
    def core_frac(self) -> float:
        return len(self.giant_core) / self.n_vertices

    @property
    def mantle_frac(self) -> float:
        return len(self.mantle) / self.n_vertices

    def summary(self) -> dict:
        sizes = sorted((len(c) for c in self.components), reverse=True)
        return {
            "N": self.n_vertices,
            "n_components": len(self.components),
            "largest_component_sizes": sizes[:10],
            "giant_size": len(self.giant),
            "giant_core_size": len(self.giant_core),
            "two_core_size": len(self.two_core),
            "mantle_size": len(self.mantle),
            "mantle_edges": self.mantle_edges,
            "n_bridges": len(self.bridges),
            "core_frac": self.core_frac,
            "mantle_frac": self.mantle_frac,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def decompose(h: Hypergraph) -> GraphDecomposition:
    comps = components(h)
    giant_index = None
    if comps:
        # largest; components are already ordered by smallest vertex id
        giant_index = max(range(len(comps)), key=lambda i: (len(comps[i]), -i))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        core = two_core(h)
    giant = frozenset(comps[giant_index]) if giant_index is not None else frozenset()
    mantle = giant - core
    mantle_edges = sum(1 for e in h.edges if len(e) == 2 and (e[0] in mantle or e[1] in mantle))
    return GraphDecomposition(h.n_vertices, comps, giant_index, core, mantle, bridges(h), mantle_edges)


def classify_graph(h: Hypergraph) -> EssentialReport:
    """Graph-case essential edges from components and bridges alone.

    A patch is essential iff it is the only patch in its component; a
    2-edge iff it is a bridge with patches on exactly one side.
    """
    pc = [0] * h.n_vertices
    for i in h.patch_ids:
        pc[h.edges[i][0]] += 1
    out, below, sub, disc = _bridge_pass(h, pc)
    comp_of = [0] * h.n_vertices
    comp_patches = []
    for ci, comp in enumerate(components(h)):
        for v in comp:
            comp_of[v] = ci
        comp_patches.append(sum(pc[v] for v in comp))
    verdicts = [False] * len(h.edges)
    for i in h.patch_ids:
        verdicts[i] = comp_patches[comp_of[h.edges[i][0]]] == 1
    for eid in out:
        total = comp_patches[comp_of[h.edges[eid][0]]]
        far = below[eid]
        verdicts[eid] = (far > 0) != (total - far > 0)
    ident = frozenset(i for i, e in enumerate(h.edges) if comp_patches[comp_of[e[0]]] > 0)
    return _report(h, verdicts, ident)


def core_mantle_fractions(spec: HypergraphSpec, trials: int, master_seed: int) -> tuple[float, float]:
    """Monte Carlo means of |giant 2-core| / N and |mantle| / N."""
    if not spec.is_graph_case or spec.beta(1) != 0:
        raise ConfigurationError("core/mantle fractions need a pure 2-edge spec (beta_1 = 0, beta_k = 0 for k>=3)")
    if 2 * spec.beta(2) <= 1:
        raise ConfigurationError(f"2-core is o(N) unless 2 beta_2 > 1; got beta_2={spec.beta(2)}")
    cores, mantles = [], []
    for t in range(trials):
        h = sample_hypergraph(spec, make_rng(sub_seed(master_seed, t)))
        d = decompose(h)
        cores.append(d.core_frac)
        mantles.append(d.mantle_frac)
    return float(np.mean(cores)), float(np.mean(mantles))


def core_mantle_limits(beta2: float) -> tuple[float, float]:
    th = analytic.theta(beta2)
    mantle = 2 * beta2 * th * (1 - th)
    return th - mantle, mantle


def essential_patch_probability(spec: HypergraphSpec, trials: int, master_seed: int) -> float:
    """Fraction of (trial, vertex) probes where the vertex carries a lone essential patch."""
    if not spec.is_graph_case:
        raise ConfigurationError("essential patch probability is defined for the graph case only")
    if spec.beta(1) == 0:
        return 0.0
    hits = 0
    for t in range(trials):
        h = sample_hypergraph(spec, make_rng(sub_seed(master_seed, t)))
        rep = classify_graph(h)
        hits += rep.per_k_counts.get(1, 0)
    return hits / (trials * spec.n_vertices)


def inject_patches(h: Hypergraph, count: int, rng: np.random.Generator) -> Hypergraph:
    """Add ``count`` patches on uniform random vertices."""
    return h.with_edges([[int(v)] for v in rng.integers(0, h.n_vertices, size=count)])
