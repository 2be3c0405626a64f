"""Essential hyperedges: edges whose deletion shrinks the identifiable set.

An edge over A is essential exactly when it is the only edge over A and,
after deleting it, exactly one vertex of A is left unidentified.

``classify_all`` offers two routes to that test:

``full``
    one complete collapse per singly-covered vertex set.
``local`` (default)
    one collapse of the whole hypergraph, then a warm-started re-collapse
    per candidate.  Only an edge that actually fired as the removing patch
    of some vertex u can be essential (any other edge can be deleted without
    changing that run).  Deleting it can only un-identify vertices whose
    removal depended, transitively, on u; everything else is kept and only
    those dependants are re-collapsed.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .collapse import collapse
from .model import Hypergraph


@dataclass
class EssentialReport:
    n_vertices: int
    verdicts: list[bool]
    per_k_counts: dict[int, int]
    per_k_identifiable: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.per_k_counts.values())

    def essential_ids(self) -> list[int]:
        return [i for i, ok in enumerate(self.verdicts) if ok]

    def to_dict(self) -> dict:
        return {
            "N": self.n_vertices,
            "per_k": {str(k): c for k, c in sorted(self.per_k_counts.items())},
            "per_k_identifiable": {str(k): c for k, c in sorted(self.per_k_identifiable.items())},
            "total": self.total,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def is_essential_oracle(h: Hypergraph, edge_id: int) -> bool:
    """Definition check: two full collapses, with and without the edge."""
    h.edge(edge_id)
    before = collapse(h).V_N
    after = collapse(h, exclude=edge_id).V_N
    return after < before


def _report(h: Hypergraph, verdicts: list[bool], ident: frozenset[int]) -> EssentialReport:
    per_k: dict[int, int] = {}
    per_k_ident: dict[int, int] = {}
    for i, e in enumerate(h.edges):
        k = len(e)
        per_k.setdefault(k, 0)
        per_k_ident.setdefault(k, 0)
        if i in ident:
            per_k_ident[k] += 1
        if verdicts[i]:
            per_k[k] += 1
    return EssentialReport(h.n_vertices, verdicts, dict(sorted(per_k.items())), dict(sorted(per_k_ident.items())))


def _classify_full(h: Hypergraph) -> EssentialReport:
    verdicts = [False] * len(h.edges)
    for key, ids in h.key_index.items():
        if len(ids) != 1:
            continue
        vstar = collapse(h, exclude=ids[0]).identifiable_vertices
        verdicts[ids[0]] = sum(1 for v in key if v not in vstar) == 1
    base = collapse(h)
    return _report(h, verdicts, base.identifiable_edge_ids)


def _classify_local(h: Hypergraph) -> EssentialReport:
    edges, inc, keys = h.edges, h.incidence, h.key_index
    base = collapse(h, policy="fifo")
    ident = base.identifiable_edge_ids
    n = h.n_vertices
    pos = [-1] * n
    via = [-1] * n
    for i, (v, e) in enumerate(zip(base.removal_order, base.removal_edges)):
        pos[v] = i
        via[v] = e
    children: list[list[int]] = [[] for _ in range(n)]
    for w in base.removal_order:
        for p in edges[via[w]]:
            if p != w:
                children[p].append(w)

    verdicts = [False] * len(edges)
    stamp = [0] * n
    token = 0
    for u in base.removal_order:
        e = via[u]
        if len(keys[edges[e]]) != 1:
            continue
        pu = pos[u]
        # another identifiable edge whose other vertices all precede u
        if any(f != e and f in ident and all(pos[w] < pu for w in edges[f] if w != u) for f in inc[u]):
            continue

        token += 1
        desc = [u]
        stamp[u] = token
        j = 0
        while j < len(desc):
            for c in children[desc[j]]:
                if stamp[c] != token:
                    stamp[c] = token
                    desc.append(c)
            j += 1

        # collapse the dependants again, with everything else already removed
        lc: dict[int, int] = {}
        for x in desc:
            for f in inc[x]:
                if f != e and f in ident and f not in lc:
                    lc[f] = sum(1 for w in edges[f] if stamp[w] == token)
        queue = deque()
        for f, c in lc.items():
            if c == 1:
                queue.append(f)
        recovered = False
        while queue:
            f = queue.popleft()
            x = next((w for w in edges[f] if stamp[w] == token), None)
            if x is None:
                continue
            if x == u:
                recovered = True
                break
            stamp[x] = 0
            for g in inc[x]:
                c = lc.get(g)
                if c is None or c == 0:
                    continue
                lc[g] = c - 1
                if c - 1 == 1:
                    queue.append(g)
        verdicts[e] = not recovered
        # leave no stale marks from this candidate
        for x in desc:
            if stamp[x] == token:
                stamp[x] = 0
    return _report(h, verdicts, ident)


def classify_all(h: Hypergraph, method: str = "local") -> EssentialReport:
    if method == "local":
        return _classify_local(h)
    if method == "full":
        return _classify_full(h)
    if method == "graph":
        from .graphcase import classify_graph
        return classify_graph(h)
    raise ValueError(f"unknown method {method!r}")


def essential_density(rep: EssentialReport, n_vertices: int) -> tuple[dict[int, float], float]:
    per_k = {k: c / n_vertices for k, c in rep.per_k_counts.items()}
    return per_k, rep.total / n_vertices
