"""JSON report for a peeled dataset."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from .mixture import Group, MixtureTree, Node, OutlierSet, Split
from .tca import NegaAnalysis

__all__ = ["SCHEMA", "ReportDocument", "build_report", "score_rows"]

SCHEMA = 1


@dataclass
class ReportDocument:
    version: str
    config: dict[str, Any]
    tree: dict[str, Any]
    groups: list[dict[str, Any]]
    scores: dict[str, dict[str, Any]]
    leaves: list[dict[str, Any]] = field(default_factory=list)
    schema: int = SCHEMA
    input: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ReportDocument:
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        return cls.from_dict(json.loads(text))


def _floats(xs) -> list[float]:
    return [float(x) for x in xs]


def _node_dict(tree: MixtureTree, node: Node) -> dict[str, Any]:
    labels = lambda pats: [tree.merged.labels[i] for i in pats]  # noqa: E731
    if isinstance(node, Split):
        scen = node.scenario
        return {
            "kind": "split",
            "depth": node.depth,
            "patterns": labels(node.patterns),
            "lambda1": node.lambda1,
            "negative": labels(node.patterns[i] for i in scen.negative),
            "zero": labels(node.patterns[i] for i in scen.zero),
            "removed_is_outlier": node.removed_is_outlier,
            "retained": _node_dict(tree, node.retained),
            "removed": _node_dict(tree, node.removed),
        }
    base = {
        "id": node.id,
        "depth": node.depth,
        "patterns": labels(node.patterns),
        "weight": node.weight,
        "weight_fraction": node.weight_fraction,
    }
    if isinstance(node, OutlierSet):
        base.update(kind="outlier", degenerate=node.degenerate, reason=node.reason)
    else:
        base.update(kind="group", ghc_percent=node.ghc_percent)
    return base


def _group_dict(tree: MixtureTree, g: Group) -> dict[str, Any]:
    rep = g.report
    items = tree.merged.items
    labels = tree.labels(g)
    part = rep.partition
    return {
        "id": g.id,
        "patterns": labels,
        "weight_fraction": g.weight_fraction,
        "ghc_percent": rep.ghc_percent,
        "lambda1": rep.lambda1,
        "u_d": rep.u_d,
        "lambdas": _floats(rep.lambdas),
        "beta": dict(zip(items, _floats(rep.beta))),
        "f_nega": rep.f_nega,
        "partition": {
            "plus": [items[j] for j in part.plus],
            "zero": [items[j] for j in part.zero],
            "minus": [items[j] for j in part.minus],
            "faithful": part.faithful,
        },
        "faithful_voters": [labels[i] for i in sorted(rep.faithful_voters)],
        "crossings": dict(zip(labels, (int(c) for c in rep.crossings))),
    }


def _scores_dict(a: NegaAnalysis) -> dict[str, Any]:
    k = len(a.axes)
    return {
        "lambdas": _floats(a.lambdas),
        "voters": {
            lab: [float(a.f_voters(ax)[i]) for ax in range(1, k + 1)]
            for i, lab in enumerate(a.dataset.labels)
        },
        "nega": [a.f_nega(ax) for ax in range(1, k + 1)],
        "items": {
            it: [float(a.g(ax)[j]) for ax in range(1, k + 1)]
            for j, it in enumerate(a.dataset.items)
        },
    }


def score_rows(analysis: NegaAnalysis) -> list[tuple[str, str, int, float]]:
    """Long-format factor scores: (kind, label, axis, score)."""
    sc = _scores_dict(analysis)
    rows = []
    for lab, vals in sc["voters"].items():
        rows += [("voter", lab, ax, v) for ax, v in enumerate(vals, start=1)]
    rows += [("nega", "NEGA", ax, v) for ax, v in enumerate(sc["nega"], start=1)]
    for it, vals in sc["items"].items():
        rows += [("item", it, ax, v) for ax, v in enumerate(vals, start=1)]
    return rows


def build_report(tree: MixtureTree, version: str, input_info: dict[str, Any] | None = None) -> ReportDocument:
    return ReportDocument(
        version=version,
        config=asdict(tree.config),
        tree=_node_dict(tree, tree.root),
        groups=[_group_dict(tree, g) for g in tree.groups],
        scores={g.id: _scores_dict(g.analysis) for g in tree.groups},
        leaves=[_node_dict(tree, leaf) for leaf in tree.leaves],
        input=dict(input_info or {}),
    )
