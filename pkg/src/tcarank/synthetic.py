"""Seeded generators for random rank data and faithful-block datasets."""

from __future__ import annotations

import string

import numpy as np

from .ranks import Ordering, RankDataset, borda_scores

__all__ = [
    "item_names",
    "random_rank_dataset",
    "consensus_dataset",
    "faithful_block_dataset",
    "inject_swap",
    "random_table",
]


def item_names(d: int) -> tuple[str, ...]:
    if d <= 26:
        return tuple(string.ascii_uppercase[:d])
    return tuple(f"I{j + 1}" for j in range(d))


def _weights(rng: np.random.Generator, n: int, max_weight: int) -> np.ndarray:
    return rng.integers(1, max_weight + 1, size=n).astype(float)


def random_rank_dataset(
    rng: np.random.Generator,
    d: int,
    n: int,
    tie_prob: float = 0.0,
    max_weight: int = 50,
) -> RankDataset:
    """``n`` uniformly random orderings of ``d`` items with integer weights.

    With ``tie_prob > 0`` each adjacent pair of positions is tied with that
    probability.
    """
    rows = []
    for _ in range(n):
        perm = rng.permutation(d)
        tiers = [[int(perm[0])]]
        for j in perm[1:]:
            if tie_prob and rng.random() < tie_prob:
                tiers[-1].append(int(j))
            else:
                tiers.append([int(j)])
        rows.append(borda_scores(Ordering(tuple(map(tuple, tiers))), d))
    return RankDataset(item_names(d), np.array(rows), _weights(rng, n, max_weight))


def consensus_dataset(
    rng: np.random.Generator, d: int, n: int, swaps: int = 2, max_weight: int = 50
) -> RankDataset:
    """Random reference order perturbed by ``swaps`` random adjacent transpositions per voter."""
    ref = [int(j) for j in rng.permutation(d)]
    rows = []
    for _ in range(n):
        order = list(ref)
        for _ in range(swaps):
            k = int(rng.integers(d - 1))
            order[k], order[k + 1] = order[k + 1], order[k]
        rows.append(borda_scores(Ordering.linear(order), d))
    return RankDataset(item_names(d), np.array(rows), _weights(rng, n, max_weight))


def faithful_block_dataset(
    rng: np.random.Generator, d: int, n: int, max_weight: int = 50
) -> tuple[RankDataset, tuple[list[int], list[int], list[int]]]:
    """Intra-block permutations over a random faithful split.

    Returns the dataset and the blocks ``(plus, zero, minus)``; ``zero``
    holds the middle item when ``d`` is odd.
    """
    m = d // 2
    perm = [int(j) for j in rng.permutation(d)]
    plus, zero, minus = perm[:m], perm[m : d - m], perm[d - m :]
    rows = []
    for _ in range(n):
        order = list(rng.permutation(plus)) + zero + list(rng.permutation(minus))
        rows.append(borda_scores(Ordering.linear(order), d))
    ds = RankDataset(item_names(d), np.array(rows), _weights(rng, n, max_weight))
    return ds, (plus, zero, minus)


def inject_swap(
    ds: RankDataset, blocks: tuple[list[int], list[int], list[int]], voter: int
) -> RankDataset:
    """Swap one voter's lowest plus-block item with its highest minus-block item.

    For odd ``d`` the middle item is skipped: it scores ``(d-1)/2`` and
    moving it across a boundary leaves the first dispersion unchanged.
    """
    plus, _, minus = blocks
    scores = ds.scores.copy()
    row = scores[voter]
    low = min(plus, key=lambda j: row[j])
    high = max(minus, key=lambda j: row[j])
    row[low], row[high] = row[high], row[low]
    return RankDataset(ds.items, scores, ds.weights)


def random_table(rng: np.random.Generator, I: int, J: int) -> np.ndarray:
    """Nonnegative table with positive margins."""
    X = rng.integers(0, 10, size=(I, J)).astype(float)
    X[:, 0] += X.sum(axis=1) == 0
    X[0, :] += X.sum(axis=0) == 0
    return X
