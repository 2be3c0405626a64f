"""Identification by repeated patch removal.

Every edge keeps a count of its still-present vertices.  When a count
drops to 1 the edge has collapsed to a patch on its last vertex, which
is queued for removal.  Total work is O(sum of edge sizes + N) plus the
heap overhead of the ``min-id`` policy.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import InputError
from .model import Hypergraph

POLICIES = ("min-id", "random", "fifo")


@dataclass
class CollapseResult:
    n_vertices: int
    identifiable_vertices: frozenset[int]
    identifiable_edge_ids: frozenset[int]
    removal_order: list[int]
    # id of the patch that removed each vertex in removal_order (-1: added patch)
    removal_edges: list[int]
    residual: Hypergraph | None = None
    # residual vertex i is original vertex residual_vertices[i]
    residual_vertices: tuple[int, ...] | None = None

    @property
    def V_N(self) -> int:
        return len(self.identifiable_vertices)

    @property
    def H_N(self) -> int:
        return len(self.identifiable_edge_ids)

    def dump_removal_order(self, path: str | Path) -> None:
        Path(path).write_text("".join(f"{v}\n" for v in self.removal_order))


class _Queue:
    """Pending (vertex, patch edge) pairs, popped according to ``policy``."""

    def __init__(self, policy: str, rng: np.random.Generator | None):
        if policy not in POLICIES:
            raise InputError(f"unknown policy {policy!r}; expected one of {POLICIES}")
        if policy == "random" and rng is None:
            raise InputError("policy 'random' needs an rng")
        self.policy = policy
        self.rng = rng
        self.items: list | deque = deque() if policy == "fifo" else []

    def push(self, v: int, e: int) -> None:
        if self.policy == "min-id":
            heapq.heappush(self.items, (v, e))
        else:
            self.items.append((v, e))

    def pop(self) -> tuple[int, int]:
        if self.policy == "min-id":
            return heapq.heappop(self.items)
        if self.policy == "fifo":
            return self.items.popleft()
        items = self.items
        j = int(self.rng.integers(len(items)))
        items[j], items[-1] = items[-1], items[j]
        return items.pop()

    def __bool__(self) -> bool:
        return bool(self.items)


def _run(h: Hypergraph, policy: str, rng, exclude: int | None, extra_patches: Iterable[int]):
    edges = h.edges
    inc = h.incidence
    live = [len(e) for e in edges]
    removed = bytearray(h.n_vertices)
    queue = _Queue(policy, rng)
    if exclude is not None:
        live[exclude] = 0
    for v in extra_patches:
        queue.push(v, -1)
    for i in h.patch_ids:
        if i != exclude:
            queue.push(edges[i][0], i)
    order: list[int] = []
    via: list[int] = []
    while queue:
        v, e = queue.pop()
        if removed[v]:
            continue
        removed[v] = 1
        order.append(v)
        via.append(e)
        for f in inc[v]:
            c = live[f]
            if c == 0:
                continue
            c -= 1
            live[f] = c
            if c == 1:
                for w in edges[f]:
                    if not removed[w]:
                        queue.push(w, f)
                        break
    return order, via, live, removed


def collapse(h: Hypergraph, policy: str = "min-id", rng: np.random.Generator | None = None, *,
             with_residual: bool = False, exclude: int | None = None,
             extra_patches: Iterable[int] = ()) -> CollapseResult:
    """Run the collapse to exhaustion.

    ``exclude`` drops one edge id before collapsing; ``extra_patches`` adds
    patches on the given vertices.  Neither touches ``h`` itself.
    """
    if exclude is not None:
        h.edge(exclude)
    extra = list(extra_patches)
    for v in extra:
        h.check_vertex(v)
    order, via, live, removed = _run(h, policy, rng, exclude, extra)
    ident_edges = frozenset(i for i, c in enumerate(live) if c == 0 and i != exclude)
    res = CollapseResult(
        n_vertices=h.n_vertices,
        identifiable_vertices=frozenset(order),
        identifiable_edge_ids=ident_edges,
        removal_order=order,
        removal_edges=via,
    )
    if with_residual:
        keep = [v for v in range(h.n_vertices) if not removed[v]]
        relabel = {v: i for i, v in enumerate(keep)}
        rest = []
        for i, e in enumerate(h.edges):
            if live[i] >= 2:
                rest.append(tuple(relabel[v] for v in e if not removed[v]))
        res.residual = Hypergraph(len(keep), rest, trusted=True)
        res.residual_vertices = tuple(keep)
    return res


def identifiable_vertices(h: Hypergraph, **kwargs) -> frozenset[int]:
    return collapse(h, **kwargs).identifiable_vertices


def count_identifiable(res: CollapseResult) -> tuple[int, int]:
    return res.V_N, res.H_N


def residual_beta2_estimate(res: CollapseResult) -> float:
    """2-edges per vertex in the collapsed hypergraph."""
    if res.residual is None:
        raise InputError("collapse was run without with_residual=True")
    r = res.residual
    if r.n_vertices == 0:
        raise InputError("residual hypergraph has no vertices")
    return sum(1 for e in r.edges if len(e) == 2) / r.n_vertices


def brute_force_identifiable(h: Hypergraph, extra_patches: Iterable[int] = ()) -> frozenset[int]:
    """Literal shrinking-edge collapse; quadratic, for cross-checking small cases."""
    current = [list(e) for e in h.edges] + [[v] for v in extra_patches]
    removed: set[int] = set()
    while True:
        patch = next((e[0] for e in current if len(e) == 1), None)
        if patch is None:
            return frozenset(removed)
        removed.add(patch)
        current = [[w for w in e if w != patch] for e in current]
        current = [e for e in current if e]
