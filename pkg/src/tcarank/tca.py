"""Taxicab correspondence analysis of nega-coded rank data."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ranks import NegaTable, RankDataset, nega_code
from .tsvd import (
    DEFAULT_EXACT_LIMIT,
    LAMBDA_FLOOR,
    SIGN_RTOL,
    DegenerateTableError,
    Method,
    TaxicabDecomposition,
    TaxicabFactor,
    center,
    correspondence_table,
    deflate,
    extract,
)

__all__ = [
    "FactorScores",
    "NegaAnalysis",
    "Biplot",
    "factor_scores",
    "fix_nega_sign",
    "analyze_nega",
    "biplot_coordinates",
    "DEFAULT_AXES",
]

DEFAULT_AXES = 3


@dataclass(frozen=True, eq=False)
class FactorScores:
    """Row scores ``f = a / r`` and column scores ``g = b / c`` for one axis (1-based)."""

    f: np.ndarray
    g: np.ndarray
    lam: float
    axis: int


def factor_scores(decomp: TaxicabDecomposition) -> list[FactorScores]:
    r, c = decomp.table.row_masses, decomp.table.col_masses
    if np.any(r <= 0) or np.any(c <= 0):
        raise ValueError("factor scores need positive masses")
    return [
        FactorScores(f.a / r, f.b / c, f.lam, axis)
        for axis, f in enumerate(decomp.factors, start=1)
    ]


@dataclass(frozen=True, eq=False)
class NegaAnalysis:
    """TCA of a nega-coded table; the last row of every row-score vector is NEGA."""

    source: NegaTable
    decomposition: TaxicabDecomposition
    axes: tuple[FactorScores, ...]

    @property
    def dataset(self) -> RankDataset:
        return self.source.base

    @property
    def n(self) -> int:
        return self.source.base.n

    @property
    def lambdas(self) -> list[float]:
        return [s.lam for s in self.axes]

    def _axis(self, axis: int) -> FactorScores:
        if not 1 <= axis <= len(self.axes):
            raise IndexError(f"axis {axis} not extracted (have {len(self.axes)})")
        return self.axes[axis - 1]

    def f_voters(self, axis: int = 1) -> np.ndarray:
        return self._axis(axis).f[:-1]

    def f_nega(self, axis: int = 1) -> float:
        return float(self._axis(axis).f[-1])

    def g(self, axis: int = 1) -> np.ndarray:
        return self._axis(axis).g

    @property
    def nega_opposes_all_voters(self) -> bool:
        """True when the first row axis is (+1 for every voter, -1 for NEGA).

        This is the condition under which the first item scores are affine in
        the Borda count and the nega row vanishes after the first deflation.
        """
        v = self.decomposition.factors[0].v
        return bool(np.all(v[:-1] == 1.0) and v[-1] == -1.0)


def _orient_first(f: TaxicabFactor, residual: np.ndarray) -> TaxicabFactor:
    # NEGA row takes v = -1. Voters with a zero first coordinate can sit on
    # either side without changing lambda; put them on the voter side.
    if f.v[-1] > 0:
        f = f.negated()
    scale = np.max(np.abs(f.a))
    zero = np.abs(f.a[:-1]) <= SIGN_RTOL * scale
    if np.any(zero & (f.v[:-1] < 0)):
        v = f.v.copy()
        v[:-1][zero] = 1.0
        f = replace(f, v=v, b=residual.T @ v)
    return f


def fix_nega_sign(analysis: NegaAnalysis) -> NegaAnalysis:
    """Negate axis 1 when NEGA sits on the positive side of the first row axis."""
    decomp = analysis.decomposition
    if not decomp.factors or decomp.factors[0].v[-1] < 0:
        return analysis
    factors = (decomp.factors[0].negated(),) + decomp.factors[1:]
    first = analysis.axes[0]
    axes = (replace(first, f=-first.f, g=-first.g),) + analysis.axes[1:]
    return replace(analysis, decomposition=replace(decomp, factors=factors), axes=axes)


def analyze_nega(
    ds: RankDataset,
    k: int | None = None,
    method: Method = "auto",
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    max_axes: int = DEFAULT_AXES,
) -> NegaAnalysis:
    """Nega-code ``ds``, decompose ``k`` axes and orient the first one.

    ``k`` defaults to ``min(max_axes, rank - 1)`` of the nega-coded table.
    """
    nt = nega_code(ds)
    table = correspondence_table(nt.matrix)
    residual = center(table)
    rank = int(np.linalg.matrix_rank(residual))
    if rank == 0:
        raise DegenerateTableError("no non-trivial dispersion: all items tied for every pattern")
    if k is None:
        k = max(1, min(max_axes, rank))
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > min(table.shape) - 1:
        raise ValueError(f"k={k} exceeds min(I, J) - 1 = {min(table.shape) - 1}")
    factors = []
    for alpha in range(k):
        f = extract(residual, method, exact_limit)
        if f.lam < LAMBDA_FLOOR:
            break
        if alpha == 0:
            f = _orient_first(f, residual)
        factors.append(f)
        residual = deflate(residual, f)
    decomp = TaxicabDecomposition(table, tuple(factors), residual)
    return NegaAnalysis(nt, decomp, tuple(factor_scores(decomp)))


@dataclass(frozen=True)
class Biplot:
    """Labeled 2-D points for one pair of axes."""

    axes: tuple[int, int]
    lambdas: tuple[float, float]
    voters: tuple[tuple[str, float, float], ...]
    items: tuple[tuple[str, float, float], ...]
    nega: tuple[float, float]
    title: str = ""


def biplot_coordinates(analysis: NegaAnalysis, axis_x: int, axis_y: int, title: str = "") -> Biplot:
    sx, sy = analysis._axis(axis_x), analysis._axis(axis_y)
    ds = analysis.dataset
    voters = tuple(
        (lab, float(x), float(y)) for lab, x, y in zip(ds.labels, sx.f[:-1], sy.f[:-1])
    )
    items = tuple((lab, float(x), float(y)) for lab, x, y in zip(ds.items, sx.g, sy.g))
    return Biplot(
        (axis_x, axis_y),
        (sx.lam, sy.lam),
        voters,
        items,
        (float(sx.f[-1]), float(sy.f[-1])),
        title,
    )
