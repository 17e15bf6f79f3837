"""Recursive peeling of a rank dataset into homogeneous groups and outliers.

At each step the current subset is analyzed; if some voters land on the
NEGA side of the first axis they are split off. Small split-off sets become
outliers, larger ones are analyzed on their own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .homogeneity import (
    EPS,
    HomogeneityReport,
    ScenarioResult,
    classify_scenario,
    homogeneity_report,
)
from .ranks import EmptyDatasetError, RankDataset, _merge, ordering_from_scores
from .tca import DEFAULT_AXES, NegaAnalysis, analyze_nega
from .tsvd import DEFAULT_EXACT_LIMIT, DegenerateTableError, Method

__all__ = [
    "PeelConfig",
    "Group",
    "OutlierSet",
    "Split",
    "MixtureTree",
    "peel",
    "group_report",
    "flatten",
]


@dataclass(frozen=True)
class PeelConfig:
    outlier_threshold: float = 0.02
    max_depth: int = 10
    axes_per_group: int = DEFAULT_AXES
    min_group_patterns: int = 1
    method: Method = "auto"
    exact_limit: int = DEFAULT_EXACT_LIMIT

    def __post_init__(self) -> None:
        if not 0 <= self.outlier_threshold < 1:
            raise ValueError("outlier_threshold must be in [0, 1)")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.axes_per_group < 1:
            raise ValueError("axes_per_group must be at least 1")
        if self.min_group_patterns < 1:
            raise ValueError("min_group_patterns must be at least 1")
        if self.method not in ("auto", "exact", "crisscross"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(eq=False)
class Group:
    """A globally homogeneous leaf.

    ``patterns`` index the merged dataset of the tree, ``indices`` the
    original input rows.
    """

    patterns: tuple[int, ...]
    indices: tuple[int, ...]
    weight: float
    weight_fraction: float
    depth: int
    report: HomogeneityReport
    id: str = ""

    @property
    def analysis(self) -> NegaAnalysis:
        return self.report.analysis

    @property
    def ghc_percent(self) -> float:
        return self.report.ghc_percent

    @property
    def beta(self) -> np.ndarray:
        return self.report.beta

    @property
    def lambdas(self) -> tuple[float, ...]:
        return self.report.lambdas


@dataclass(eq=False)
class OutlierSet:
    patterns: tuple[int, ...]
    indices: tuple[int, ...]
    weight: float
    weight_fraction: float
    depth: int
    degenerate: bool = False
    reason: str = ""
    id: str = ""


@dataclass(eq=False)
class Split:
    """A Scen2 step: ``removed`` holds the voters split off the first axis."""

    patterns: tuple[int, ...]
    depth: int
    lambda1: float
    scenario: ScenarioResult
    removed_is_outlier: bool
    retained: "Node"
    removed: "Node"


Node = Union[Group, OutlierSet, Split]
Leaf = Union[Group, OutlierSet]


@dataclass(eq=False)
class MixtureTree:
    source: RankDataset
    merged: RankDataset
    members: list[list[int]]
    root: Node
    config: PeelConfig
    leaves: list[Leaf] = field(default_factory=list)

    @property
    def groups(self) -> list[Group]:
        return [n for n in self.leaves if isinstance(n, Group)]

    @property
    def outliers(self) -> list[OutlierSet]:
        return [n for n in self.leaves if isinstance(n, OutlierSet)]

    def node(self, node_id: str) -> Leaf:
        for n in self.leaves:
            if n.id == node_id:
                return n
        raise KeyError(f"no leaf {node_id!r}")

    def labels(self, leaf: Leaf) -> list[str]:
        return [self.merged.labels[i] for i in leaf.patterns]


def _leaves(node: Node) -> list[Leaf]:
    if isinstance(node, Split):
        return _leaves(node.retained) + _leaves(node.removed)
    return [node]


class _Peeler:
    def __init__(self, merged: RankDataset, members: list[list[int]], cfg: PeelConfig):
        self.ds = merged
        self.members = members
        self.cfg = cfg
        self.total = merged.total_weight

    def _original(self, patterns) -> tuple[int, ...]:
        return tuple(sorted(i for p in patterns for i in self.members[p]))

    def _weight(self, patterns) -> float:
        return float(self.ds.weights[list(patterns)].sum())

    def outlier(self, patterns, depth, degenerate=False, reason="") -> OutlierSet:
        patterns = tuple(sorted(patterns))
        w = self._weight(patterns)
        return OutlierSet(
            patterns, self._original(patterns), w, w / self.total, depth, degenerate, reason
        )

    def run(self, patterns: tuple[int, ...], depth: int) -> Node:
        cfg = self.cfg
        if depth > cfg.max_depth:
            return self.outlier(patterns, depth, True, "maximum depth reached")
        if len(patterns) < cfg.min_group_patterns:
            return self.outlier(patterns, depth, True, "fewer patterns than min_group_patterns")
        sub = self.ds.subset(patterns)
        try:
            analysis = analyze_nega(
                sub, method=cfg.method, exact_limit=cfg.exact_limit, max_axes=cfg.axes_per_group
            )
        except DegenerateTableError as e:
            return self.outlier(patterns, depth, True, str(e))
        scen = classify_scenario(analysis)
        if scen.homogeneous:
            w = self._weight(patterns)
            if len(patterns) == 1 and w / self.total < cfg.outlier_threshold:
                return self.outlier(patterns, depth, reason="single pattern below threshold")
            report = homogeneity_report(sub, analysis=analysis)
            return Group(
                tuple(patterns), self._original(patterns), w, w / self.total, depth, report
            )
        f = analysis.f_voters(1)
        local = np.asarray(patterns)
        retained = tuple(local[f > EPS].tolist())
        negative = tuple(local[list(scen.negative)].tolist())
        zero = tuple(local[list(scen.zero)].tolist())
        lam1 = analysis.lambdas[0]
        if self._weight(negative) / self.total < cfg.outlier_threshold:
            removed = self.outlier(negative, depth + 1, reason="small NEGA-side set")
            kept = self.run(tuple(sorted(retained + zero)), depth + 1)
            return Split(tuple(patterns), depth, lam1, scen, True, kept, removed)
        if not retained:
            return self.outlier(patterns, depth, True, "no voter on the positive side of axis 1")
        # voters at zero share the NEGA side of the first row axis (sgn(0) = -1)
        kept = self.run(retained, depth + 1)
        removed = self.run(tuple(sorted(negative + zero)), depth + 1)
        return Split(tuple(patterns), depth, lam1, scen, False, kept, removed)


def peel(ds: RankDataset, cfg: PeelConfig | None = None) -> MixtureTree:
    """Split ``ds`` into globally homogeneous groups and outlier sets."""
    cfg = cfg or PeelConfig()
    if ds.n == 0:
        raise EmptyDatasetError("cannot peel an empty dataset")
    merged, members = _merge(ds)
    peeler = _Peeler(merged, members, cfg)
    root = peeler.run(tuple(range(merged.n)), 0)
    leaves = sorted(_leaves(root), key=lambda n: (-n.weight, n.patterns[0]))
    counters = {"G": 0, "O": 0}
    for leaf in leaves:
        prefix = "G" if isinstance(leaf, Group) else "O"
        counters[prefix] += 1
        leaf.id = f"{prefix}{counters[prefix]}"
    return MixtureTree(ds, merged, members, root, cfg, leaves)


def _fmt(x: float, nd: int = 4) -> str:
    return f"{x:.{nd}f}"


def _beta_ordering(items, beta) -> str:
    tiers = ordering_from_scores(beta).tiers
    return " > ".join(
        items[t[0]] if len(t) == 1 else "{" + ",".join(items[j] for j in t) + "}" for t in tiers
    )


def group_report(tree: MixtureTree, node: str | Leaf) -> str:
    """Plain-text summary of one leaf."""
    leaf = tree.node(node) if isinstance(node, str) else node
    if leaf not in tree.leaves:
        raise KeyError("node does not belong to this tree")
    ds = tree.merged
    labels = tree.labels(leaf)
    lines = [f"[{leaf.id}] {100 * leaf.weight_fraction:.2f}% of total weight, {len(labels)} patterns"]
    lines.append("patterns: " + " ".join(labels))
    if isinstance(leaf, OutlierSet):
        kind = "degenerate branch" if leaf.degenerate else "outlier set"
        lines.append(f"{kind}: {leaf.reason}" if leaf.reason else kind)
        for p in leaf.patterns:
            lines.append(f"  {ds.labels[p]}: scores " + " ".join(_format_score(x) for x in ds.scores[p]))
        return "\n".join(lines)
    rep = leaf.report
    items = ds.items
    lines.append("beta: " + " ".join(f"{it}={_fmt(b)}" for it, b in zip(items, rep.beta)))
    lines.append("beta ordering: " + _beta_ordering(items, rep.beta))
    lines.append(f"GHC: {rep.ghc_percent:.2f}%  (lambda1 {_fmt(rep.lambda1)}, U(d) {_fmt(rep.u_d)})")
    part = rep.partition
    lines.append(
        "axis-1 partition: "
        + part.describe(items)
        + ("  (faithful)" if part.faithful else "  (not faithful)")
    )
    fv = [labels[i] for i in sorted(rep.faithful_voters)]
    lines.append("faithful voters: " + (" ".join(fv) if fv else "none"))
    hist = rep.crossing_histogram()
    lines.append("crossings: " + ", ".join(f"{k}: {w:g}" for k, w in hist.items()))
    lines.append("lambdas: " + " ".join(_fmt(x) for x in rep.lambdas))
    return "\n".join(lines)


def _format_score(x: float) -> str:
    return f"{x:g}"


def flatten(tree: MixtureTree) -> list[tuple[str, str]]:
    """``(pattern label, leaf id)`` for every original input row, in input order."""
    owner: dict[int, str] = {}
    for leaf in tree.leaves:
        for i in leaf.indices:
            owner[i] = leaf.id
    return [(tree.source.labels[i], owner[i]) for i in range(tree.source.n)]
