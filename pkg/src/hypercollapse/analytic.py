"""Deterministic limit constants for the Poisson hypergraph model.

The central quantity is ``t_star``, the first point where
``g(t) = beta'(t) + log(1 - t)`` turns negative.  Everything else
(identifiable and essential edge densities, the residual 2-edge
parameter, Borel laws for domains) is a closed-form function of it.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InputError, ModelAssumptionError

SCAN_POINTS = 10_000
ROOT_TOL = 1e-12
# zeros of g closer than this to 0 inside (0, t*) violate the model assumption
TOUCH_TOL = 1e-10


@dataclass(frozen=True)
class BetaSeries:
    coefficients: tuple[float, ...]

    def __init__(self, coefficients: Sequence[float]):
        coeffs = tuple(float(c) for c in coefficients)
        if not coeffs:
            coeffs = (0.0,)
        for k, c in enumerate(coeffs, start=1):
            if not math.isfinite(c) or c < 0:
                raise InputError(f"beta_{k} must be finite and >= 0, got {c}")
        object.__setattr__(self, "coefficients", coeffs)

    def beta(self, k: int) -> float:
        return self.coefficients[k - 1] if 1 <= k <= len(self.coefficients) else 0.0

    def value(self, t: float) -> float:
        return sum(b * t**k for k, b in enumerate(self.coefficients, start=1))

    def d1(self, t: float) -> float:
        return sum(k * b * t ** (k - 1) for k, b in enumerate(self.coefficients, start=1))

    def d2(self, t: float) -> float:
        return sum(k * (k - 1) * b * t ** (k - 2) for k, b in enumerate(self.coefficients, start=1) if k >= 2)

    def g(self, t: float) -> float:
        return self.d1(t) + math.log1p(-t)

    def gamma(self, t: float) -> float:
        return (1.0 - t) * self.d2(t)


def _as_series(series) -> BetaSeries:
    return series if isinstance(series, BetaSeries) else BetaSeries(series)


def _g_grid(series: BetaSeries, ts: np.ndarray) -> np.ndarray:
    d1 = np.zeros_like(ts)
    for k, b in enumerate(series.coefficients, start=1):
        if b:
            d1 += k * b * ts ** (k - 1)
    return d1 + np.log1p(-ts)


def _negative_at_zero_plus(series: BetaSeries) -> bool:
    """Sign of g just right of 0 when g(0) = beta_1 = 0.

    Taylor coefficients of g are ``(m+1) beta_{m+1} - 1/m`` for m >= 1;
    the first nonzero one decides.  Past the support they are all -1/m.
    """
    for m in range(1, len(series.coefficients) + 1):
        c = (m + 1) * series.beta(m + 1) - 1.0 / m
        if c != 0:
            return c < 0
    return True


def _bisect(series: BetaSeries, lo: float, hi: float) -> float:
    # invariant: g(lo) >= 0, g(hi) < 0
    while hi - lo > ROOT_TOL:
        mid = 0.5 * (lo + hi)
        if series.g(mid) < 0:
            hi = mid
        else:
            lo = mid
    return hi


def _check_no_touching(series: BetaSeries, ts: np.ndarray, gs: np.ndarray, t_star: float) -> None:
    inside = (ts > 0) & (ts < t_star)
    idx = np.nonzero(inside)[0]
    if len(idx) < 3:
        return
    for i in idx[1:-1]:
        if gs[i] <= gs[i - 1] and gs[i] <= gs[i + 1]:
            res = minimize_scalar(series.g, bounds=(ts[i - 1], ts[i + 1]), method="bounded",
                                  options={"xatol": 1e-13})
            if res.fun <= TOUCH_TOL:
                raise ModelAssumptionError(
                    f"beta'(t) + log(1 - t) vanishes at t={res.x:.6g} before t*={t_star:.6g}")


def t_star(series) -> float:
    """``inf{t >= 0 : beta'(t) + log(1 - t) < 0}``, to 1e-12."""
    series = _as_series(series)
    if series.beta(1) == 0 and _negative_at_zero_plus(series):
        return 0.0
    ts = np.linspace(0.0, 1.0, SCAN_POINTS + 1)[:-1]
    gs = _g_grid(series, ts)
    neg = np.nonzero(gs[1:] < 0)[0]
    if len(neg):
        j = neg[0] + 1
        lo, hi = float(ts[j - 1]), float(ts[j])
    else:
        # g -> -inf as t -> 1, so the crossing is in the last cell
        lo = float(ts[-1])
        for m in range(5, 17):
            hi = 1.0 - 10.0**-m
            if series.g(hi) < 0:
                break
            lo = hi
        else:
            return hi
    root = _bisect(series, lo, hi)
    _check_no_touching(series, ts, gs, root)
    return root


def theta(beta2: float) -> float:
    """Giant-component fraction of the graph with 2-edge parameter beta2."""
    if beta2 < 0:
        raise InputError("beta2 must be >= 0")
    return t_star(BetaSeries((0.0, beta2)))


@dataclass(frozen=True)
class Borel:
    alpha: float
    escape_p: float

    def __init__(self, alpha: float):
        if not math.isfinite(alpha) or alpha < 0:
            raise InputError(f"Borel parameter must be finite and >= 0, got {alpha}")
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "escape_p", borel_escape(alpha))

    @property
    def mean(self) -> float:
        return math.inf if self.alpha >= 1 else 1.0 / (1.0 - self.alpha)


def borel_escape(alpha: float) -> float:
    """Root in (0, 1) of ``alpha x + log(1 - x) = 0``; 0 when alpha <= 1."""
    return 0.0 if alpha <= 1 else t_star(BetaSeries((0.0, alpha / 2.0)))


def borel_log_pmf(b: Borel, n: int) -> float:
    if n < 1:
        raise InputError(f"Borel support starts at 1, got n={n}")
    a = b.alpha
    if a == 0:
        return 0.0 if n == 1 else -math.inf
    return -a * n + (n - 1) * math.log(a * n) - math.lgamma(n + 1)


def borel_pmf(b: Borel, n: int) -> float:
    return math.exp(borel_log_pmf(b, n))


def borel_sample(b: Borel, rng: np.random.Generator, cap: int) -> int | None:
    """Total progeny of a Poisson(alpha) Galton-Watson tree, None past ``cap``."""
    if cap < 1:
        raise InputError("cap must be >= 1")
    total = generation = 1
    while generation:
        generation = int(rng.poisson(b.alpha * generation)) if b.alpha else 0
        total += generation
        if total > cap:
            return None
    return total


def pgf_fixed_point(beta2: float, s: float, tol: float = 1e-12, max_iter: int = 10_000_000) -> float:
    """Smallest root in [0, 1] of ``F = s exp(2 beta2 (F - 1))``.

    Monotone iteration from 0; convergence is geometric except at the
    critical point s = 1, 2 beta2 = 1.
    """
    if not 0 <= s <= 1:
        raise InputError(f"s must lie in [0, 1], got {s}")
    c = 2.0 * beta2
    f = 0.0
    for _ in range(max_iter):
        nxt = s * math.exp(c * (f - 1.0))
        if abs(nxt - f) <= tol * 1e-2:
            return nxt
        f = nxt
    return f


@dataclass
class LimitBundle:
    betas: tuple[float, ...]
    t_star: float
    v_limit: float
    h_limit: float
    e_limits: dict[int, float]
    e_total_limit: float
    gamma_at_tstar: float
    beta_at_tstar: float = field(default=0.0)

    def to_json(self) -> str:
        d = asdict(self)
        d["betas"] = list(self.betas)
        d["e_limits"] = {str(k): v for k, v in self.e_limits.items()}
        return json.dumps(d, indent=2, sort_keys=True)


def entropy_term(t: float) -> float:
    """-(1 - t) log(1 - t)."""
    return -(1.0 - t) * math.log1p(-t) if t > 0 else 0.0


def limits(series) -> LimitBundle:
    series = _as_series(series)
    ts = t_star(series)
    e_limits = {k: k * (1.0 - ts) * ts ** (k - 1) * b
                for k, b in enumerate(series.coefficients, start=1)}
    e_total = entropy_term(ts)
    b_at = series.value(ts)
    return LimitBundle(
        betas=series.coefficients,
        t_star=ts,
        v_limit=ts,
        h_limit=b_at + e_total,
        e_limits=e_limits,
        e_total_limit=e_total,
        gamma_at_tstar=series.gamma(ts),
        beta_at_tstar=b_at,
    )


def _subset_ratio(big_n: int, n: int, k: int, i: int) -> float:
    """``C(N-n, k) C(n, i) / C(N, i+k)`` as a telescoping product."""
    r = 1.0
    # (i+k)! / (i! k!) comes from reordering the falling factorials
    for j in range(1, i + 1):
        r *= (k + j) / j
    for j in range(k):
        r *= (big_n - n - j) / (big_n - j)
    for j in range(i):
        r *= (n - j) / (big_n - k - j)
    return r


def collapsed_betas(series, n: int, big_n: int) -> list[float]:
    """Parameters of the hypergraph left on the ``N - n`` unidentified vertices.

    Entry ``k-1`` holds beta_k(n, N); beta_1(n, N) is always 0.
    """
    series = _as_series(series)
    if not 0 <= n < big_n:
        raise InputError(f"need 0 <= n < N, got n={n}, N={big_n}")
    kmax = len(series.coefficients)
    out = [0.0] * kmax
    for k in range(2, kmax + 1):
        if k > big_n - n:
            continue
        acc = 0.0
        for i in range(0, min(n, kmax - k) + 1):
            b = series.beta(i + k)
            if b:
                acc += b * _subset_ratio(big_n, n, k, i)
        out[k - 1] = big_n / (big_n - n) * acc
    return out
