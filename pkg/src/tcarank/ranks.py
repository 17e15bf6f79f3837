"""Rank data: orderings, Borda scores, reverse scores and the nega-coded table."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MalformedOrderingError",
    "EmptyDatasetError",
    "Ordering",
    "RankDataset",
    "NegaTable",
    "borda_scores",
    "reverse_borda",
    "mean_borda",
    "nega_code",
    "merge_identical_patterns",
    "collapse_to_partial",
    "ordering_from_scores",
    "pattern_label",
]

_ROW_SUM_TOL = 1e-9


class MalformedOrderingError(ValueError):
    """An ordering does not partition the item set."""


class EmptyDatasetError(ValueError):
    """An operation needs at least one response pattern."""


@dataclass(frozen=True)
class Ordering:
    """A (possibly tied) ranking of ``d`` items, most preferred tier first.

    ``tiers`` holds item indices; every index in ``0..d-1`` must appear in
    exactly one tier. A complete linear order has ``d`` singleton tiers.
    """

    tiers: tuple[tuple[int, ...], ...]
    weight: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "tiers", tuple(tuple(int(j) for j in t) for t in self.tiers)
        )
        if not self.weight > 0:
            raise MalformedOrderingError(f"weight must be positive, got {self.weight}")

    @classmethod
    def linear(cls, order: Iterable[int], weight: float = 1.0) -> Ordering:
        return cls(tuple((j,) for j in order), weight)

    def check(self, d: int) -> None:
        seen: set[int] = set()
        for tier in self.tiers:
            if not tier:
                raise MalformedOrderingError("empty tie-group")
            for j in tier:
                if j in seen:
                    raise MalformedOrderingError(f"item {j} appears twice")
                if not 0 <= j < d:
                    raise MalformedOrderingError(f"item {j} out of range for d={d}")
                seen.add(j)
        if len(seen) != d:
            missing = sorted(set(range(d)) - seen)
            raise MalformedOrderingError(f"items missing from ordering: {missing}")

    @property
    def is_complete(self) -> bool:
        return all(len(t) == 1 for t in self.tiers)


def borda_scores(ordering: Ordering, d: int) -> np.ndarray:
    """Borda score vector indexed by item.

    The item at depth ``j`` (1-based) scores ``d - j``; a tie-group covering
    positions ``j..j+t-1`` gets the mean of the scores of those positions.

    >>> borda_scores(Ordering(((0,), (1,), (2, 3))), 4)
    array([3. , 2. , 0.5, 0.5])
    """
    ordering.check(d)
    scores = np.empty(d)
    pos = 0
    for tier in ordering.tiers:
        t = len(tier)
        scores[list(tier)] = d - pos - (t + 1) / 2
        pos += t
    return scores


def reverse_borda(scores: Sequence[float] | np.ndarray, d: int) -> np.ndarray:
    return (d - 1) - np.asarray(scores, dtype=float)


def ordering_from_scores(scores: Sequence[float] | np.ndarray, weight: float = 1.0) -> Ordering:
    """Rebuild the tie-grouped ordering whose Borda scores are ``scores``."""
    scores = np.asarray(scores, dtype=float)
    tiers: list[list[int]] = []
    last = None
    for j in sorted(range(len(scores)), key=lambda j: (-scores[j], j)):
        if last is not None and abs(scores[j] - last) <= _ROW_SUM_TOL:
            tiers[-1].append(j)
        else:
            tiers.append([j])
            last = scores[j]
    return Ordering(tuple(tuple(t) for t in tiers), weight)


def _format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def pattern_label(items: Sequence[str], scores: Sequence[float] | np.ndarray, weight: float) -> str:
    """Figure-style label: item names in preference order followed by the weight.

    ``A>B>C>D`` with weight 137 gives ``ABCD137``. A trailing tie-group is
    dropped (``A>B>[C,D]`` gives ``AB166``); interior ties are bracketed.
    Multi-character item names are joined with ``-``.
    """
    tiers = ordering_from_scores(scores).tiers
    if len(tiers) > 1 and len(tiers[-1]) > 1:
        tiers = tiers[:-1]
    sep = "" if all(len(s) == 1 for s in items) else "-"
    parts = []
    for t in tiers:
        names = [items[j] for j in t]
        parts.append(names[0] if len(names) == 1 else "[" + sep.join(names) + "]")
    return sep.join(parts) + _format_weight(weight)


@dataclass(frozen=True, eq=False)
class RankDataset:
    """Weighted response patterns as Borda-score rows over labeled items."""

    items: tuple[str, ...]
    scores: np.ndarray
    weights: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        items = tuple(str(s) for s in self.items)
        d = len(items)
        if d < 2:
            raise ValueError("need at least two items")
        if len(set(items)) != d:
            raise ValueError("item labels must be unique")
        scores = np.array(self.scores, dtype=float).reshape(-1, d)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if len(weights) != len(scores):
            raise ValueError("one weight per pattern required")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be positive and finite")
        if np.any(scores < -_ROW_SUM_TOL) or np.any(scores > d - 1 + _ROW_SUM_TOL):
            raise ValueError(f"scores must lie in [0, {d - 1}]")
        bad = np.abs(scores.sum(axis=1) - d * (d - 1) / 2) > _ROW_SUM_TOL
        if np.any(bad):
            raise ValueError(
                f"score rows must sum to d(d-1)/2; bad rows {np.flatnonzero(bad).tolist()}"
            )
        labels = tuple(self.labels) or tuple(
            pattern_label(items, s, w) for s, w in zip(scores, weights)
        )
        if len(labels) != len(scores):
            raise ValueError("one label per pattern required")
        scores.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_orderings(
        cls, items: Sequence[str], orderings: Iterable[Ordering], labels: Sequence[str] = ()
    ) -> RankDataset:
        orderings = list(orderings)
        d = len(items)
        scores = np.array([borda_scores(o, d) for o in orderings]).reshape(-1, d)
        return cls(tuple(items), scores, [o.weight for o in orderings], tuple(labels))

    @property
    def n(self) -> int:
        return self.scores.shape[0]

    @property
    def d(self) -> int:
        return len(self.items)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def is_complete(self) -> bool:
        ref = np.arange(self.d, dtype=float)
        return all(np.array_equal(np.sort(row), ref) for row in self.scores)

    def orderings(self) -> list[Ordering]:
        return [ordering_from_scores(s, w) for s, w in zip(self.scores, self.weights)]

    def subset(self, indices: Iterable[int]) -> RankDataset:
        idx = list(indices)
        return RankDataset(
            self.items,
            self.scores[idx].reshape(-1, self.d),
            self.weights[idx],
            tuple(self.labels[i] for i in idx),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RankDataset):
            return NotImplemented
        return (
            self.items == other.items
            and self.labels == other.labels
            and np.array_equal(self.scores, other.scores)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None  # type: ignore[assignment]

    def __len__(self) -> int:
        return self.n


def mean_borda(ds: RankDataset) -> np.ndarray:
    """Weighted mean Borda score of each item (the Borda count)."""
    if ds.n == 0:
        raise EmptyDatasetError("mean Borda score of an empty dataset")
    return ds.weights @ ds.scores / ds.total_weight


@dataclass(frozen=True, eq=False)
class NegaTable:
    """A rank dataset with the appended ``nega`` row of summed reverse scores."""

    base: RankDataset
    nega_row: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        """The ``(n+1) x d`` table: weighted score rows, then the nega row."""
        rows = self.base.weights[:, None] * self.base.scores
        return np.vstack([rows, self.nega_row[None, :]])

    @property
    def row_labels(self) -> tuple[str, ...]:
        return self.base.labels + ("NEGA",)


def nega_code(ds: RankDataset) -> NegaTable:
    if ds.n == 0:
        raise EmptyDatasetError("cannot nega-code an empty dataset")
    nega = ds.weights @ reverse_borda(ds.scores, ds.d)
    nega.setflags(write=False)
    return NegaTable(ds, nega)


def _merge(ds: RankDataset) -> tuple[RankDataset, list[list[int]]]:
    groups: dict[bytes, list[int]] = {}
    for i, row in enumerate(ds.scores):
        groups.setdefault(np.ascontiguousarray(row).tobytes(), []).append(i)
    members = list(groups.values())
    merged = RankDataset(
        ds.items,
        np.array([ds.scores[g[0]] for g in members]).reshape(-1, ds.d),
        [ds.weights[g].sum() for g in members],
        tuple("+".join(ds.labels[i] for i in g) for g in members),
    )
    return merged, members


def merge_identical_patterns(ds: RankDataset) -> RankDataset:
    """Merge rows with identical score vectors, summing weights.

    Rows keep first-occurrence order; merged labels are joined with ``+``.
    """
    return _merge(ds)[0]


def collapse_to_partial(ds: RankDataset, top_k: int) -> RankDataset:
    """Keep the first ``top_k`` choices and tie everything below them.

    Collapsed patterns that coincide are merged and relabeled, so
    ``ABCD137`` and ``ABDC29`` become ``AB166``.
    """
    d = ds.d
    if not 1 <= top_k < d:
        raise ValueError(f"top_k must be in [1, {d - 1}], got {top_k}")
    if not ds.is_complete:
        raise ValueError("collapse_to_partial needs complete rankings")
    rows = []
    for s in ds.scores:
        order = [t[0] for t in ordering_from_scores(s).tiers]
        tiers = tuple((j,) for j in order[:top_k]) + (tuple(order[top_k:]),)
        rows.append(borda_scores(Ordering(tiers), d))
    collapsed = RankDataset(ds.items, np.array(rows), ds.weights, ds.labels)
    merged, _ = _merge(collapsed)
    return RankDataset(merged.items, merged.scores, merged.weights)
