"""Taxicab singular value decomposition.

Each factor maximizes ``||P u||_1`` over sign vectors ``u`` (equivalently
``||P' v||_1`` over ``v``), then the residual is deflated by the rank-one
term ``a b' / lambda``. Two solvers are offered: complete enumeration of
sign vectors on the smaller dimension, and the criss-cross ascent that
alternates the transition formulas from every row as a start.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

import numpy as np

__all__ = [
    "DegenerateTableError",
    "CorrespondenceTable",
    "TaxicabFactor",
    "TaxicabDecomposition",
    "sign_vector",
    "correspondence_table",
    "center",
    "tsvd_exact",
    "tsvd_crisscross",
    "crisscross_run",
    "extract",
    "deflate",
    "decompose",
    "DEFAULT_EXACT_LIMIT",
]

Method = Literal["auto", "exact", "crisscross"]

DEFAULT_EXACT_LIMIT = 22
LAMBDA_FLOOR = 1e-12
ASCENT_TOL = 1e-12
# relative to max |x|; values this close to zero take sgn(0) = -1
SIGN_RTOL = 1e-12
_TIE_TOL = 1e-13
_CHUNK_CELLS = 1 << 22


class DegenerateTableError(ValueError):
    """The table has no usable mass or no non-trivial structure."""


def sign_vector(x: np.ndarray) -> np.ndarray:
    """Elementwise sign with ``sgn(0) = -1``.

    Entries within rounding noise of zero (relative to the largest entry)
    count as zero.
    """
    x = np.asarray(x, dtype=float)
    scale = np.max(np.abs(x)) if x.size else 0.0
    return np.where(x > SIGN_RTOL * scale, 1.0, -1.0)


@dataclass(frozen=True, eq=False)
class CorrespondenceTable:
    P: np.ndarray
    row_masses: np.ndarray
    col_masses: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.P.shape


def correspondence_table(X) -> CorrespondenceTable:
    """Normalize a nonnegative table to total 1 and compute its masses."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a 2-D table")
    if np.any(X < 0) or not np.all(np.isfinite(X)):
        raise ValueError("table entries must be finite and nonnegative")
    total = X.sum()
    if total <= 0:
        raise DegenerateTableError("table total is zero")
    P = X / total
    r, c = P.sum(axis=1), P.sum(axis=0)
    if np.any(r <= 0):
        raise DegenerateTableError(f"zero row mass at rows {np.flatnonzero(r <= 0).tolist()}")
    if np.any(c <= 0):
        raise DegenerateTableError(f"zero column mass at columns {np.flatnonzero(c <= 0).tolist()}")
    for arr in (P, r, c):
        arr.setflags(write=False)
    return CorrespondenceTable(P, r, c)


def center(table: CorrespondenceTable) -> np.ndarray:
    """Remove the trivial factor: ``P - r c'``."""
    return table.P - np.outer(table.row_masses, table.col_masses)


@dataclass(frozen=True, eq=False)
class TaxicabFactor:
    """One TSVD factor: axes ``u`` (columns), ``v`` (rows), basic vectors ``a = P u``, ``b = P' v``."""

    u: np.ndarray
    v: np.ndarray
    a: np.ndarray
    b: np.ndarray
    lam: float
    exact: bool

    def negated(self) -> TaxicabFactor:
        return replace(self, u=-self.u, v=-self.v, a=-self.a, b=-self.b)


def _settle(residual: np.ndarray, u: np.ndarray, max_iter: int = 50):
    # Criss-cross from an optimal u until u = sgn(b) and v = sgn(a) agree.
    # Each step keeps the objective at its maximum.
    for _ in range(max_iter):
        a = residual @ u
        v = sign_vector(a)
        b = residual.T @ v
        u_next = sign_vector(b)
        if np.array_equal(u_next, u):
            break
        u = u_next
    else:
        a = residual @ u
        v = sign_vector(a)
        b = residual.T @ v
    return u, v, a, b


def _factor(residual: np.ndarray, u: np.ndarray, exact: bool) -> TaxicabFactor:
    u, v, a, b = _settle(residual, u)
    lam = float(v @ a)
    return TaxicabFactor(u, v, a, b, lam, exact)


def _best_sign_vector(M: np.ndarray) -> np.ndarray:
    """Maximize ``||M s||_1`` over ``s`` in {-1,+1}^m with ``s[0] = +1``.

    Candidates are visited in lexicographic order (-1 < +1) so the first
    maximizer within ``_TIE_TOL`` is the lexicographically smallest one.
    """
    m = M.shape[1]
    if m == 1:
        return np.ones(1)
    nbits = m - 1
    # bit (nbits - 1 - t) of the candidate index encodes coordinate t + 1
    shifts = np.arange(nbits - 1, -1, -1, dtype=np.int64)
    best_val, best_idx = -np.inf, 0
    vals_all = []
    chunk = max(64, _CHUNK_CELLS // max(1, M.shape[0]))
    for start in range(0, 1 << nbits, chunk):
        idx = np.arange(start, min(start + chunk, 1 << nbits), dtype=np.int64)
        bits = (idx[:, None] >> shifts[None, :]) & 1
        S = np.hstack([np.ones((len(idx), 1)), 2.0 * bits - 1.0])
        vals = np.abs(S @ M.T).sum(axis=1)
        vals_all.append((idx, vals))
        best_val = max(best_val, float(vals.max()))
    for idx, vals in vals_all:
        hits = np.flatnonzero(vals >= best_val - _TIE_TOL)
        if hits.size:
            best_idx = int(idx[hits[0]])
            break
    bits = (best_idx >> shifts) & 1
    return np.concatenate([[1.0], 2.0 * bits - 1.0])


def tsvd_exact(residual, exact_limit: int = DEFAULT_EXACT_LIMIT) -> TaxicabFactor:
    """Globally optimal factor by enumerating sign vectors on the smaller side."""
    P = np.asarray(residual, dtype=float)
    I, J = P.shape
    m = min(I, J)
    if m > exact_limit:
        raise ValueError(f"smaller dimension {m} exceeds exact_limit={exact_limit}")
    if J <= I:
        u = _best_sign_vector(P)
    else:
        v = _best_sign_vector(P.T)
        u = sign_vector(P.T @ v)
    return _factor(P, u, exact=True)


def crisscross_run(residual, b0) -> tuple[TaxicabFactor, list[float]]:
    """One criss-cross ascent from the starting column vector ``b0``.

    Returns the factor and the sequence of ``lambda(b)`` values, one per
    iteration.
    """
    P = np.asarray(residual, dtype=float)
    b = np.asarray(b0, dtype=float)
    history: list[float] = []
    while True:
        u = sign_vector(b)
        a = P @ u
        lam_a = float(np.abs(a).sum())
        v = sign_vector(a)
        b = P.T @ v
        lam_b = float(np.abs(b).sum())
        history.append(lam_b)
        if not lam_b - lam_a > ASCENT_TOL or len(history) > 1000:
            break
    return TaxicabFactor(u, v, a, b, float(v @ a), exact=False), history


def tsvd_crisscross(residual, starts: Sequence[int] | None = None) -> TaxicabFactor:
    """Best criss-cross factor over the given start rows (all rows by default)."""
    P = np.asarray(residual, dtype=float)
    rows = range(P.shape[0]) if starts is None else starts
    best = None
    for i in rows:
        f, _ = crisscross_run(P, P[i])
        if best is None or f.lam > best.lam + ASCENT_TOL:
            best = f
    if best is None:
        raise ValueError("no start rows given")
    return best


def extract(residual, method: Method = "auto", exact_limit: int = DEFAULT_EXACT_LIMIT) -> TaxicabFactor:
    P = np.asarray(residual, dtype=float)
    if method == "auto":
        method = "exact" if min(P.shape) <= exact_limit else "crisscross"
    if method == "exact":
        return tsvd_exact(P, exact_limit)
    if method == "crisscross":
        return tsvd_crisscross(P)
    raise ValueError(f"unknown method {method!r}")


def deflate(residual, f: TaxicabFactor) -> np.ndarray:
    """Subtract the rank-one part ``a b' / lambda``."""
    if not f.lam > 0:
        raise ValueError("cannot deflate by a factor with zero dispersion")
    return np.asarray(residual, dtype=float) - np.outer(f.a, f.b) / f.lam


@dataclass(frozen=True, eq=False)
class TaxicabDecomposition:
    table: CorrespondenceTable
    factors: tuple[TaxicabFactor, ...]
    residual: np.ndarray = field(repr=False)

    @property
    def lambdas(self) -> list[float]:
        return [f.lam for f in self.factors]

    @property
    def residual_norm(self) -> float:
        return float(np.abs(self.residual).sum())

    def __len__(self) -> int:
        return len(self.factors)


def decompose(
    table: CorrespondenceTable,
    k: int,
    method: Method = "auto",
    exact_limit: int = DEFAULT_EXACT_LIMIT,
) -> TaxicabDecomposition:
    """Center, then extract and deflate up to ``k`` factors.

    Extraction stops early once the dispersion falls below ``1e-12``.
    """
    I, J = table.shape
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > min(I, J) - 1:
        raise ValueError(f"k={k} exceeds min(I, J) - 1 = {min(I, J) - 1}")
    residual = center(table)
    factors = []
    for _ in range(k):
        f = extract(residual, method, exact_limit)
        if f.lam < LAMBDA_FLOOR:
            break
        factors.append(f)
        residual = deflate(residual, f)
    return TaxicabDecomposition(table, tuple(factors), residual)
