import math

import pytest
from hypothesis import given, settings, strategies as st

from hypercollapse import Hypergraph, analytic
from hypercollapse.collapse import brute_force_identifiable
from hypercollapse.domains import domain_of, domain_size_distribution
from hypercollapse.errors import ConfigurationError, InputError
from hypercollapse.genrand import make_rng
from hypercollapse.model import HypergraphSpec

from strategies import hypergraphs


def test_isolated_vertex():
    d = domain_of(Hypergraph(3), 1)
    assert d.domain == {1} and d.size == 1


def test_single_edge():
    assert domain_of(Hypergraph(2, [[0, 1]]), 0).domain == {0, 1}


def test_asymmetric_domains():
    h = Hypergraph(3, [[0, 1, 2], [0, 1]])
    assert 2 in domain_of(h, 0).domain
    assert 0 not in domain_of(h, 2).domain


def test_base_graph_untouched_and_bad_vertex():
    h = Hypergraph(3, [[0, 1]])
    domain_of(h, 0)
    assert h.edges == ((0, 1),) and h.patch_ids == ()
    with pytest.raises(InputError):
        domain_of(h, 9)


def test_overflow_marker():
    h = Hypergraph(4, [[0, 1], [1, 2], [2, 3]])
    d = domain_of(h, 0, overflow_at=2)
    assert d.overflow and d.size is None and len(d.domain) == 4


@settings(max_examples=200, deadline=None)
@given(hypergraphs(), st.data())
def test_domain_definition(h, data):
    v = data.draw(st.integers(0, h.n_vertices - 1))
    d = domain_of(h, v)
    assert v in d.domain
    assert d.domain == brute_force_identifiable(h, [v])
    assert d.domain <= set(range(h.n_vertices))


@settings(max_examples=200, deadline=None)
@given(hypergraphs(max_k=2), st.data())
def test_graph_case_symmetry(h, data):
    patchless = Hypergraph(h.n_vertices, [e for e in h.edges if len(e) == 2])
    v = data.draw(st.integers(0, h.n_vertices - 1))
    w = data.draw(st.integers(0, h.n_vertices - 1))
    assert (w in domain_of(patchless, v).domain) == (v in domain_of(patchless, w).domain)


@settings(max_examples=200, deadline=None)
@given(hypergraphs(), st.data())
def test_domain_monotone(h, data):
    v = data.draw(st.integers(0, h.n_vertices - 1))
    k = data.draw(st.integers(1, min(3, h.n_vertices)))
    extra = data.draw(st.sets(st.integers(0, h.n_vertices - 1), min_size=k, max_size=k))
    assert domain_of(h, v).domain <= domain_of(h.with_edges([extra]), v).domain


def test_distribution_trivial_and_errors():
    dist = domain_size_distribution(HypergraphSpec(50, (0.0, 0.0)), 200, make_rng(0))
    assert dist.counts == {1: 200}
    with pytest.raises(ConfigurationError):
        domain_size_distribution(HypergraphSpec(50, (0.1, 0.2)), 10, make_rng(0))


def test_distribution_close_to_borel():
    dist = domain_size_distribution(HypergraphSpec(5000, (0.0, 0.2)), 3000, make_rng(8))
    assert abs(dist.frequency(1) - math.exp(-0.4)) < 0.03
    assert dist.chi_square()[1] > 0.01


def test_csv_output():
    dist = domain_size_distribution(HypergraphSpec(500, (0.0, 0.2)), 100, make_rng(1))
    lines = dist.to_csv().splitlines()
    assert lines[0] == "size,count,frequency,borel_pmf"
    size, count, freq, pmf = lines[1].split(",")
    assert size == "1"
    assert float(freq) == int(count) / 100
    assert float(pmf) == pytest.approx(math.exp(-0.4))


def test_supercritical_overflow_bucket():
    dist = domain_size_distribution(HypergraphSpec(3000, (0.0, 1.0)), 300, make_rng(2), overflow_at=500)
    # giant domains show up as overflow at roughly the escape probability
    assert abs(dist.overflow / dist.probes - analytic.Borel(2.0).escape_p) < 0.1
    assert dist.to_csv().splitlines()[-1].startswith(">500,")
