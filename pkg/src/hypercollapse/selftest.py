"""Fast internal consistency checks behind ``hypercollapse selftest``."""
from __future__ import annotations

import math

from . import analytic
from .collapse import brute_force_identifiable, collapse
from .essential import classify_all, is_essential_oracle
from .genrand import make_rng, sample_hypergraph, sub_seed
from .model import HypergraphSpec


def _random_small(seed: int):
    rng = make_rng(seed)
    n = int(rng.integers(5, 31))
    betas = tuple(float(b) for b in rng.uniform(0, 0.6, size=4) * (rng.random(4) < 0.7))
    return sample_hypergraph(HypergraphSpec(n, betas), rng)


def check_order_invariance(seed: int) -> bool:
    for i in range(20):
        h = _random_small(sub_seed(seed, i))
        ref = collapse(h).identifiable_vertices
        if ref != brute_force_identifiable(h):
            return False
        for j in range(5):
            got = collapse(h, policy="random", rng=make_rng(sub_seed(seed + 1, 100 * i + j)))
            if got.identifiable_vertices != ref:
                return False
    return True


def check_essential(seed: int) -> bool:
    for i in range(20):
        h = _random_small(sub_seed(seed + 2, i))
        rep = classify_all(h)
        if rep.verdicts != classify_all(h, method="full").verdicts:
            return False
        if any(rep.verdicts[e] != is_essential_oracle(h, e) for e in range(len(h.edges))):
            return False
    return True


def check_analytic(seed: int) -> bool:
    rng = make_rng(seed + 3)
    for _ in range(50):
        betas = tuple(rng.uniform(0, 1.0, size=int(rng.integers(1, 6))))
        try:
            lim = analytic.limits(betas)
        except ArithmeticError:
            continue
        if lim.gamma_at_tstar > 1 + 1e-9:
            return False
        if abs(lim.h_limit - lim.beta_at_tstar - lim.e_total_limit) > 1e-9:
            return False
        if lim.t_star > 0 and abs(sum(lim.e_limits.values()) - lim.e_total_limit) > 1e-9:
            return False
    b = analytic.Borel(0.4)
    total = sum(analytic.borel_pmf(b, n) for n in range(1, 2000))
    return math.isclose(total, 1.0, abs_tol=1e-9)


def check_determinism(seed: int) -> bool:
    spec = HypergraphSpec(500, (0.1, 0.5, 0.1))
    return sample_hypergraph(spec, make_rng(seed)) == sample_hypergraph(spec, make_rng(seed))


CHECKS = {
    "collapse order invariance": check_order_invariance,
    "essential verdicts vs oracle": check_essential,
    "analytic identities": check_analytic,
    "seeded determinism": check_determinism,
}


def run_selftest(seed: int = 0) -> bool:
    ok = True
    for name, fn in CHECKS.items():
        passed = fn(seed)
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
