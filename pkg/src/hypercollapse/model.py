"""Hypergraph containers.

Edges are stored as sorted vertex tuples; an edge's id is its position in
``Hypergraph.edges``.  Several edges may share a vertex set.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import ConfigurationError, InputError


@dataclass(frozen=True)
class HypergraphSpec:
    """Vertex count plus coefficients ``betas[k-1] = beta_k``."""

    n_vertices: int
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if self.n_vertices < 1:
            raise ConfigurationError(f"need at least one vertex, got {self.n_vertices}")
        if not self.betas:
            raise ConfigurationError("betas must contain at least beta_1")
        for k, b in enumerate(self.betas, start=1):
            if not math.isfinite(b) or b < 0:
                raise ConfigurationError(f"beta_{k} must be a finite non-negative number, got {b}")
            if b > 0 and k > self.n_vertices:
                raise ConfigurationError(f"beta_{k} > 0 but only {self.n_vertices} vertices")

    @property
    def kmax(self) -> int:
        return len(self.betas)

    def beta(self, k: int) -> float:
        return self.betas[k - 1] if 1 <= k <= len(self.betas) else 0.0

    @property
    def is_graph_case(self) -> bool:
        return all(b == 0 for b in self.betas[2:])


class Hyperedge(NamedTuple):
    edge_id: int
    vertices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


def canonical(vertices: Iterable[int]) -> tuple[int, ...]:
    key = tuple(sorted(vertices))
    if not key:
        raise InputError("a hyperedge needs at least one vertex")
    for a, b in zip(key, key[1:]):
        if a == b:
            raise InputError(f"repeated vertex {a} in hyperedge")
    return key


class Hypergraph:
    """Immutable multiset of hyperedges over vertices ``0..n_vertices-1``.

    Derived lookups (``key_index``, ``incidence``) are computed on first use
    and cached, so one instance can be shared read-only between callers.
    """

    __slots__ = ("n_vertices", "edges", "__dict__")

    def __init__(self, n_vertices: int, edges: Iterable[Sequence[int]] = (), *, trusted: bool = False):
        if n_vertices < 0:
            raise InputError("negative vertex count")
        self.n_vertices = int(n_vertices)
        if trusted:
            # caller guarantees sorted, duplicate-free, in-range tuples
            self.edges: tuple[tuple[int, ...], ...] = tuple(edges)
            return
        out = []
        for e in edges:
            key = canonical(int(v) for v in e)
            if key[0] < 0 or key[-1] >= self.n_vertices:
                raise InputError(f"edge {key} has a vertex outside 0..{self.n_vertices - 1}")
            out.append(key)
        self.edges = tuple(out)

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.n_vertices, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n_vertices={self.n_vertices}, n_edges={len(self.edges)})"

    def hyperedges(self) -> Iterator[Hyperedge]:
        for i, e in enumerate(self.edges):
            yield Hyperedge(i, e)

    def edge(self, edge_id: int) -> Hyperedge:
        if not 0 <= edge_id < len(self.edges):
            raise InputError(f"unknown edge id {edge_id}")
        return Hyperedge(edge_id, self.edges[edge_id])

    @cached_property
    def key_index(self) -> dict[tuple[int, ...], list[int]]:
        index: dict[tuple[int, ...], list[int]] = defaultdict(list)
        for i, e in enumerate(self.edges):
            index[e].append(i)
        return dict(index)

    @cached_property
    def incidence(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return inc

    @cached_property
    def patch_ids(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if len(e) == 1)

    def size_counts(self) -> dict[int, int]:
        counts: dict[int, int] = defaultdict(int)
        for e in self.edges:
            counts[len(e)] += 1
        return dict(sorted(counts.items()))

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n_vertices:
            raise InputError(f"vertex {v} outside 0..{self.n_vertices - 1}")

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Hypergraph":
        return Hypergraph(self.n_vertices, list(self.edges) + [list(e) for e in extra])

    def without_edge(self, edge_id: int) -> "Hypergraph":
        self.edge(edge_id)
        kept = self.edges[:edge_id] + self.edges[edge_id + 1:]
        return Hypergraph(self.n_vertices, kept, trusted=True)

    def relabel(self, perm: Sequence[int]) -> "Hypergraph":
        """Apply the vertex map ``v -> perm[v]``; edge order is kept."""
        if sorted(perm) != list(range(self.n_vertices)):
            raise InputError("perm is not a permutation of the vertex set")
        return Hypergraph(self.n_vertices, [tuple(sorted(perm[v] for v in e)) for e in self.edges], trusted=True)

    # text format: "N <n>" then one edge per line
    def to_text(self) -> str:
        lines = [f"N {self.n_vertices}"]
        lines.extend(" ".join(map(str, e)) for e in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Hypergraph":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise InputError("empty hypergraph file")
        head = lines[0].split()
        if len(head) != 2 or head[0] != "N":
            raise InputError(f"expected header 'N <n_vertices>', got {lines[0]!r}")
        try:
            n = int(head[1])
            edges = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise InputError(f"malformed hypergraph file: {exc}") from None
        return cls(n, edges)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> "Hypergraph":
        return cls.from_text(Path(path).read_text())


def multiplicity(h: Hypergraph, vertex_set: Iterable[int]) -> int:
    """Number of edges whose vertex set is exactly ``vertex_set``."""
    key = canonical(vertex_set)
    for v in key:
        h.check_vertex(v)
    return len(h.key_index.get(key, ()))


def incidence(h: Hypergraph) -> list[list[int]]:
    """``incidence(h)[v]`` lists the ids of edges containing ``v``."""
    return h.incidence


def parse_edge_list(text: str) -> list[list[int]]:
    """Parse ``"0;0 1;1 2"`` style edge lists used on the command line."""
    edges = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            edges.append([int(tok) for tok in chunk.replace(",", " ").split()])
        except ValueError:
            raise InputError(f"bad edge {chunk!r}") from None
    return edges
