"""Seeded sampling of Poisson random hypergraphs.

Each size class k gets ``Poisson(N * beta_k)`` edges placed on independent
uniform k-subsets, which is the same law as independent
``Poisson(N beta_k / C(N, k))`` counts on every k-set.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError, InputError
from .model import Hypergraph, HypergraphSpec

MASK64 = (1 << 64) - 1
# splitmix64 increment and finalizer multipliers
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_M1 = 0xBF58476D1CE4E5B9
MIX_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 step: a bijective 64-bit mixer."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX_M1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_M2) & MASK64
    return z ^ (z >> 31)


def sub_seed(master_seed: int, index: int) -> int:
    return mix64((master_seed ^ index) & MASK64)


def make_rng(seed: int) -> np.random.Generator:
    """The package's ``SeededRng``: PCG64 keyed by a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & MASK64))


def sample_poisson(mean: float, rng: np.random.Generator) -> int:
    if not math.isfinite(mean) or mean < 0:
        raise InputError(f"Poisson mean must be finite and >= 0, got {mean}")
    if mean == 0:
        return 0
    return int(rng.poisson(mean))


def sample_uniform_ksubset(n: int, k: int, rng: np.random.Generator) -> tuple[int, ...]:
    if not 1 <= k <= n:
        raise InputError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k == n:
        return tuple(range(n))
    return tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))


def _sample_ksubsets(n: int, k: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """``m`` independent uniform k-subsets of ``range(n)`` as sorted rows."""
    if m == 0:
        return np.empty((0, k), dtype=np.int64)
    if k == 1:
        return rng.integers(0, n, size=(m, 1))
    if 2 * k > n:
        return np.array([sample_uniform_ksubset(n, k, rng) for _ in range(m)], dtype=np.int64).reshape(m, k)
    # ordered draws with repeats rejected are uniform over k-subsets
    out = np.empty((m, k), dtype=np.int64)
    filled = 0
    while filled < m:
        need = m - filled
        rows = np.sort(rng.integers(0, n, size=(need, k)), axis=1)
        ok = np.all(rows[:, 1:] != rows[:, :-1], axis=1)
        rows = rows[ok]
        out[filled:filled + len(rows)] = rows
        filled += len(rows)
    return out


def sample_hypergraph(spec: HypergraphSpec, rng: np.random.Generator) -> Hypergraph:
    n = spec.n_vertices
    edges: list[tuple[int, ...]] = []
    for k, beta in enumerate(spec.betas, start=1):
        if beta == 0:
            continue
        if k > n:
            raise ConfigurationError(f"beta_{k} > 0 but only {n} vertices")
        m = sample_poisson(n * beta, rng)
        edges.extend(map(tuple, _sample_ksubsets(n, k, m, rng).tolist()))
    return Hypergraph(n, edges, trusted=True)
