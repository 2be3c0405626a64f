"""Independent reference computations used as test oracles.

Nothing here calls into the package's solvers; each function recomputes its
quantity by brute force or a different method.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def grid_scan_tstar(betas, points: int = 10**6) -> tuple[float, float]:
    """Bracket [t_{j-1}, t_j] of the first grid point where g < 0."""
    t = np.arange(points, dtype=float) / points
    d1 = np.zeros_like(t)
    for k, b in enumerate(betas, start=1):
        d1 += k * b * t ** (k - 1)
    g = d1 + np.log1p(-t)
    neg = np.nonzero(g[1:] < 0)[0]
    if len(neg) == 0:
        return 1.0 - 1.0 / points, 1.0
    j = neg[0] + 1
    return float(t[j - 1]), float(t[j])


def gw_total_progeny_pmf(alpha: float, n: int) -> float:
    """P(total progeny = n) by summing over all Lukasiewicz offspring words of length n."""
    pois = [math.exp(-alpha) * alpha**c / math.factorial(c) for c in range(n)]
    total = 0.0

    def rec(depth, open_, prob):
        nonlocal total
        if open_ == 0:
            if depth == n:
                total += prob
            return
        if depth == n:
            return
        for c in range(n - depth):
            rec(depth + 1, open_ - 1 + c, prob * pois[c])

    rec(0, 1, 1.0)
    return total


def collapsed_beta_enumeration(betas, n: int, big_n: int, k: int) -> Fraction:
    """beta_k(n, N) from explicit subsets: V* = {0..n-1}, A a fixed k-set outside it."""
    identified = range(n)
    mu = Fraction(0)
    for s in range(0, n + 1):
        for extra in itertools.combinations(identified, s):
            size = k + len(extra)
            if size <= len(betas):
                b = Fraction(betas[size - 1])
                mu += big_n * b / math.comb(big_n, size)
    return mu * math.comb(big_n - n, k) / (big_n - n)


def poisson_pmf(mean: float, c: int) -> float:
    return math.exp(-mean) * mean**c / math.factorial(c)
