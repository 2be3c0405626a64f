"""Poisson random hypergraphs: collapse, essential edges and their limit laws."""

from .analytic import BetaSeries, Borel, LimitBundle, limits, t_star, theta
from .collapse import CollapseResult, collapse, count_identifiable
from .errors import ConfigurationError, HypercollapseError, InputError, ModelAssumptionError
from .essential import EssentialReport, classify_all, is_essential_oracle
from .genrand import make_rng, sample_hypergraph, sub_seed
from .model import Hyperedge, Hypergraph, HypergraphSpec, multiplicity

__all__ = [
    "BetaSeries", "Borel", "CollapseResult", "ConfigurationError", "EssentialReport",
    "Hyperedge", "Hypergraph", "HypergraphSpec", "HypercollapseError", "InputError",
    "LimitBundle", "ModelAssumptionError", "classify_all", "collapse", "count_identifiable",
    "is_essential_oracle", "limits", "make_rng", "multiplicity", "sample_hypergraph",
    "sub_seed", "t_star", "theta",
]
