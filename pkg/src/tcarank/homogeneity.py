"""Global homogeneity: scenario test, the U(d) bound, GHC, faithful blocks and crossings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .ranks import RankDataset, mean_borda
from .tca import NegaAnalysis, analyze_nega
from .tsvd import DEFAULT_EXACT_LIMIT, Method

__all__ = [
    "EPS",
    "UndefinedGHCError",
    "ScenarioResult",
    "Partition",
    "HomogeneityReport",
    "classify_scenario",
    "upper_bound_u",
    "upper_bound_u_exact",
    "ghc",
    "faithful_partition",
    "faithful_voters",
    "crossing_counts",
    "homogeneity_report",
]

EPS = 1e-10
FAITHFUL_TOL = 1e-9
_GHC_SLACK = 1e-8


class UndefinedGHCError(ValueError):
    """GHC was requested for data that are not globally homogeneous."""


@dataclass(frozen=True)
class ScenarioResult:
    """Outcome of the law-of-contradiction test on the first axis.

    ``kind`` is ``"Scen1"`` when no voter has a negative first score. For
    ``"Scen2"``, ``negative`` holds the voters strictly on the NEGA side and
    ``v1_indices`` additionally includes voters at zero (their first row
    axis coordinate is -1 by the ``sgn(0) = -1`` rule).
    """

    kind: Literal["Scen1", "Scen2"]
    v1_indices: tuple[int, ...]
    negative: tuple[int, ...]
    zero: tuple[int, ...]
    v1_weight_fraction: float

    @property
    def homogeneous(self) -> bool:
        return self.kind == "Scen1"


def classify_scenario(analysis: NegaAnalysis) -> ScenarioResult:
    f = analysis.f_voters(1)
    w = analysis.dataset.weights
    negative = tuple(int(i) for i in np.flatnonzero(f < -EPS))
    zero = tuple(int(i) for i in np.flatnonzero(np.abs(f) <= EPS))
    if not negative:
        return ScenarioResult("Scen1", (), (), zero, 0.0)
    v1 = tuple(sorted(negative + zero))
    frac = float(w[list(v1)].sum() / w.sum())
    return ScenarioResult("Scen2", v1, negative, zero, frac)


def upper_bound_u_exact(d: int) -> Fraction:
    if d < 1:
        raise ValueError("d must be at least 1")
    if d == 1:
        return Fraction(1)
    m = (d + 1) // 2
    return Fraction(m, 2 * m - 1)


def upper_bound_u(d: int) -> float:
    """Largest first dispersion a homogeneous rank table on ``d`` items can reach."""
    return float(upper_bound_u_exact(d))


def ghc(analysis: NegaAnalysis) -> float:
    """Global homogeneity coefficient in percent, ``100 * lambda_1 / U(d)``."""
    scen = classify_scenario(analysis)
    if not scen.homogeneous:
        raise UndefinedGHCError(
            f"data are not globally homogeneous: {len(scen.v1_indices)} patterns on the NEGA side"
        )
    value = 100.0 * analysis.lambdas[0] / upper_bound_u(analysis.dataset.d)
    if value > 100.0 + _GHC_SLACK:
        raise RuntimeError(f"GHC {value!r} exceeds 100%: first dispersion above U(d)")
    return value


@dataclass(frozen=True)
class Partition:
    """Item blocks cut by the first item scores; indices into the item list."""

    plus: tuple[int, ...]
    zero: tuple[int, ...]
    minus: tuple[int, ...]
    faithful: bool

    def describe(self, items) -> str:
        blocks = [b for b in (self.plus, self.zero, self.minus) if b]
        return " > ".join("{" + ",".join(items[j] for j in b) + "}" for b in blocks)


def faithful_partition(analysis: NegaAnalysis) -> Partition:
    g = analysis.g(1)
    beta = mean_borda(analysis.dataset)
    d = len(g)
    plus = tuple(int(j) for j in np.flatnonzero(g > EPS))
    minus = tuple(int(j) for j in np.flatnonzero(g < -EPS))
    zero = tuple(int(j) for j in np.flatnonzero(np.abs(g) <= EPS))
    mid = (d - 1) / 2
    m = d // 2
    sizes_ok = len(plus) == m and len(minus) == m and len(zero) == d % 2
    order_ok = (
        all(beta[j] > mid + EPS for j in plus)
        and all(beta[j] < mid - EPS for j in minus)
        and all(abs(beta[j] - mid) <= EPS for j in zero)
    )
    return Partition(plus, zero, minus, sizes_ok and order_ok)


def faithful_voters(analysis: NegaAnalysis) -> set[int]:
    """Voters whose first score reaches ``U(d)``."""
    u = upper_bound_u(analysis.dataset.d)
    return {int(i) for i in np.flatnonzero(np.abs(analysis.f_voters(1) - u) <= FAITHFUL_TOL)}


def crossing_counts(ds: RankDataset, partition: Partition) -> np.ndarray:
    """Number of block-violating score assignments per pattern.

    With ``c = (d-1)/2``, a score crosses when an item of the plus block gets
    less than ``c`` or an item of the minus block gets more than ``c``. For
    odd ``d`` the middle score ``c`` belongs to the zero block only, so it
    counts as a crossing elsewhere, and any other score in the zero block
    counts too. A single swap between blocks therefore counts twice.
    """
    d = ds.d
    covered = sorted(partition.plus + partition.zero + partition.minus)
    if covered != list(range(d)):
        raise ValueError("partition must cover every item exactly once")
    c = (d - 1) / 2
    odd = d % 2 == 1
    S = ds.scores
    P = S[:, list(partition.plus)]
    M = S[:, list(partition.minus)]
    Z = S[:, list(partition.zero)]
    at_mid = lambda X: np.abs(X - c) <= EPS  # noqa: E731
    plus_cross = (P < c - EPS) | (odd & at_mid(P))
    minus_cross = (M > c + EPS) | (odd & at_mid(M))
    zero_cross = ~at_mid(Z)
    return plus_cross.sum(axis=1) + minus_cross.sum(axis=1) + zero_cross.sum(axis=1)


@dataclass(frozen=True, eq=False)
class HomogeneityReport:
    lambda1: float
    u_d: float
    ghc_percent: float
    partition: Partition
    faithful_voters: frozenset[int]
    crossings: np.ndarray
    beta: np.ndarray
    lambdas: tuple[float, ...]
    f_nega: float
    analysis: NegaAnalysis

    def crossing_histogram(self) -> dict[int, float]:
        """Total pattern weight per crossing count."""
        hist: dict[int, float] = {}
        for count, w in zip(self.crossings.tolist(), self.analysis.dataset.weights):
            hist[int(count)] = hist.get(int(count), 0.0) + float(w)
        return dict(sorted(hist.items()))


def homogeneity_report(
    ds: RankDataset,
    k: int | None = None,
    method: Method = "auto",
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    analysis: NegaAnalysis | None = None,
) -> HomogeneityReport:
    """Full homogeneity summary; raises :class:`UndefinedGHCError` on Scen2 data."""
    if analysis is None:
        analysis = analyze_nega(ds, k, method, exact_limit)
    value = ghc(analysis)
    part = faithful_partition(analysis)
    return HomogeneityReport(
        lambda1=analysis.lambdas[0],
        u_d=upper_bound_u(ds.d),
        ghc_percent=value,
        partition=part,
        faithful_voters=frozenset(faithful_voters(analysis)),
        crossings=crossing_counts(ds, part),
        beta=mean_borda(ds),
        lambdas=tuple(analysis.lambdas),
        f_nega=analysis.f_nega(1),
        analysis=analysis,
    )
