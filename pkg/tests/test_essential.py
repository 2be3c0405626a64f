import json

import numpy as np
import pytest
from hypothesis import given, settings

from hypercollapse import Hypergraph, analytic
from hypercollapse.collapse import brute_force_identifiable, collapse
from hypercollapse.errors import InputError
from hypercollapse.essential import classify_all, essential_density, is_essential_oracle
from hypercollapse.genrand import make_rng, sample_hypergraph, sub_seed
from hypercollapse.model import HypergraphSpec

from strategies import hypergraphs


def test_oracle_examples():
    assert is_essential_oracle(Hypergraph(1, [[0]]), 0)
    h = Hypergraph(1, [[0], [0]])
    assert not is_essential_oracle(h, 0) and not is_essential_oracle(h, 1)
    h = Hypergraph(2, [[0], [0, 1], [0, 1]])
    assert [is_essential_oracle(h, e) for e in range(3)] == [True, False, False]
    with pytest.raises(InputError):
        is_essential_oracle(h, 3)


def _definition(h, e):
    # |V*| via the literal shrinking collapse, independent of the counter engine
    keep = [edge for i, edge in enumerate(h.edges) if i != e]
    return len(brute_force_identifiable(Hypergraph(h.n_vertices, keep))) < len(brute_force_identifiable(h))


@pytest.mark.parametrize("method", ["local", "full"])
def test_chain_all_essential(chain, method):
    assert classify_all(chain, method).verdicts == [True, True, True]


@pytest.mark.parametrize("method", ["local", "full", "graph"])
def test_two_patches_and_an_edge(method):
    h = Hypergraph(2, [[0], [1], [0, 1]])
    assert [_definition(h, e) for e in range(3)] == [False, False, False]
    assert classify_all(h, method).verdicts == [False, False, False]


@settings(max_examples=300, deadline=None)
@given(hypergraphs(max_n=10))
def test_routes_agree_with_definition(h):
    local = classify_all(h).verdicts
    assert local == classify_all(h, "full").verdicts
    assert local == [_definition(h, e) for e in range(len(h.edges))]


@settings(max_examples=200, deadline=None)
@given(hypergraphs(max_n=14, max_k=2, max_edges=30))
def test_graph_route_agrees(h):
    assert classify_all(h, "graph").verdicts == classify_all(h).verdicts


def test_random_instances_match_oracle():
    for i in range(200):
        rng = make_rng(sub_seed(41, i))
        n = int(rng.integers(5, 41))
        betas = tuple(rng.uniform(0, 0.7, size=4) * (rng.random(4) < 0.75))
        h = sample_hypergraph(HypergraphSpec(n, betas), rng)
        rep = classify_all(h)
        assert rep.verdicts == [is_essential_oracle(h, e) for e in range(len(h.edges))]


@settings(max_examples=200, deadline=None)
@given(hypergraphs())
def test_report_invariants(h):
    rep = classify_all(h)
    res = collapse(h)
    assert rep.total == sum(rep.per_k_counts.values())
    for k, c in rep.per_k_counts.items():
        assert c <= rep.per_k_identifiable[k]
    for e, ess in enumerate(rep.verdicts):
        if ess:
            assert e in res.identifiable_edge_ids
            assert len(h.key_index[h.edges[e]]) == 1
            assert collapse(h, exclude=e).V_N < res.V_N
        else:
            assert collapse(h, exclude=e).V_N == res.V_N


def test_report_json_and_density():
    rep = classify_all(Hypergraph(3, [[0], [0, 1], [1, 2]]))
    d = json.loads(rep.to_json())
    assert d == {"N": 3, "per_k": {"1": 1, "2": 2}, "per_k_identifiable": {"1": 1, "2": 2}, "total": 3}
    per_k, total = essential_density(rep, 3)
    assert per_k == {1: 1 / 3, 2: 2 / 3} and total == 1.0
    empty = classify_all(Hypergraph(4))
    assert essential_density(empty, 4) == ({}, 0.0)


def test_density_near_limits():
    spec = HypergraphSpec(20_000, (0.1, 0.5))
    lim = analytic.limits(spec.betas)
    e2, tot = [], []
    for i in range(20):
        rep = classify_all(sample_hypergraph(spec, make_rng(sub_seed(29, i))))
        per_k, total = essential_density(rep, spec.n_vertices)
        e2.append(per_k.get(2, 0.0))
        tot.append(total)
    assert abs(np.mean(e2) - lim.e_limits[2]) < 0.01
    assert abs(np.mean(tot) - lim.e_total_limit) < 0.01


def test_unknown_method():
    with pytest.raises(ValueError):
        classify_all(Hypergraph(1), "magic")
