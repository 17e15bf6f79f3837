"""Taxicab correspondence analysis of nega-coded rank data."""

from .homogeneity import classify_scenario, ghc, homogeneity_report, upper_bound_u
from .io import load_dataset, load_fixture, parse_orderings, parse_ranks
from .mixture import PeelConfig, flatten, group_report, peel
from .ranks import Ordering, RankDataset, borda_scores, collapse_to_partial, mean_borda, nega_code
from .tca import analyze_nega, biplot_coordinates

__version__ = "0.1.0"

__all__ = [
    "Ordering",
    "RankDataset",
    "PeelConfig",
    "analyze_nega",
    "biplot_coordinates",
    "borda_scores",
    "classify_scenario",
    "collapse_to_partial",
    "flatten",
    "ghc",
    "group_report",
    "homogeneity_report",
    "load_dataset",
    "load_fixture",
    "mean_borda",
    "nega_code",
    "parse_orderings",
    "parse_ranks",
    "peel",
    "upper_bound_u",
]
