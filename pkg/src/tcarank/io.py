"""Text formats for rank data.

``orderings`` format::

    ordering,weight
    A>B>C>D,137
    A>B>[C,D],166

``ranks`` format (1 = most preferred, optional ``__weight`` column)::

    A,B,C,D,__weight
    1,2,3,4,137
    1,2,2,4,12
"""

from __future__ import annotations

import csv
import io
from importlib import resources
from pathlib import Path

import numpy as np

from .ranks import (
    MalformedOrderingError,
    Ordering,
    RankDataset,
    _format_weight,
)

__all__ = [
    "ParseError",
    "parse_orderings",
    "parse_ranks",
    "format_orderings",
    "format_ranks",
    "load_dataset",
    "load_fixture",
    "FIXTURES",
]

FIXTURES = ("table1", "artificial_two_voters", "artificial_three_voters", "four_orderings")
WEIGHT_COLUMN = "__weight"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _rows(text: str):
    # (line number, cells) for non-blank rows
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if any(cells):
            yield lineno, cells


def _weight(cell: str, lineno: int) -> float:
    try:
        w = float(cell)
    except ValueError:
        raise ParseError(f"weight {cell!r} is not a number", lineno) from None
    if not np.isfinite(w) or w <= 0:
        raise ParseError(f"weight must be positive, got {cell!r}", lineno)
    return w


def _split_ordering(token: str, lineno: int) -> list[list[str]]:
    tiers = []
    for part in token.split(">"):
        part = part.strip()
        if part.startswith("[") and part.endswith("]"):
            names = [s.strip() for s in part[1:-1].split(",")]
        elif "[" in part or "]" in part:
            raise ParseError(f"unbalanced tie-group in {token!r}", lineno)
        else:
            names = [part]
        if not all(names):
            raise ParseError(f"empty item in {token!r}", lineno)
        tiers.append(names)
    return tiers


def _join_brackets(cells: list[str]) -> list[str]:
    # csv splits "A>[B,C]>D" on the inner comma; glue bracket groups back
    out, buf, depth = [], [], 0
    for c in cells:
        buf.append(c)
        depth += c.count("[") - c.count("]")
        if depth <= 0:
            out.append(",".join(buf))
            buf, depth = [], 0
    if buf:
        out.append(",".join(buf))
    return out


def parse_orderings(text: str, items: tuple[str, ...] | None = None) -> RankDataset:
    """Parse the ``ordering,weight`` format.

    Items are taken in order of first appearance unless ``items`` is given;
    every row must rank the same item set.
    """
    rows = list(_rows(text))
    if not rows:
        raise ParseError("empty input")
    lineno, header = rows[0]
    if [h.lower() for h in header] != ["ordering", "weight"]:
        raise ParseError(f"expected header 'ordering,weight', got {','.join(header)!r}", lineno)
    if len(rows) == 1:
        raise ParseError("no data rows", lineno)
    parsed = []
    for lineno, cells in rows[1:]:
        cells = _join_brackets(cells)
        if len(cells) != 2:
            raise ParseError(f"expected 2 fields, got {len(cells)}", lineno)
        parsed.append((lineno, _split_ordering(cells[0], lineno), _weight(cells[1], lineno)))
    if items is None:
        seen: dict[str, None] = {}
        for _, tiers, _ in parsed:
            for t in tiers:
                for name in t:
                    seen.setdefault(name)
        items = tuple(seen)
    index = {name: j for j, name in enumerate(items)}
    orderings = []
    for lineno, tiers, w in parsed:
        try:
            idx = tuple(tuple(index[name] for name in t) for t in tiers)
        except KeyError as e:
            raise ParseError(f"unknown item {e.args[0]!r}", lineno) from None
        o = Ordering(idx, w)
        try:
            o.check(len(items))
        except MalformedOrderingError as e:
            raise ParseError(str(e), lineno) from None
        orderings.append(o)
    try:
        return RankDataset.from_orderings(items, orderings)
    except ValueError as e:
        raise ParseError(str(e)) from None


def _scores_from_ranks(ranks: list[float], lineno: int) -> np.ndarray:
    """Borda scores ``d - rank`` after validating the (possibly tied) rank vector.

    A tie-group of size ``t`` starting at position ``p`` may be written
    either with the shared rank ``p`` or with the averaged rank ``p + (t-1)/2``.
    """
    d = len(ranks)
    r = np.asarray(ranks, dtype=float)
    order = np.argsort(r, kind="stable")
    out = np.empty(d)
    pos = 1
    k = 0
    while k < d:
        value = r[order[k]]
        t = 1
        while k + t < d and r[order[k + t]] == value:
            t += 1
        if value not in (pos, pos + (t - 1) / 2):
            raise ParseError(f"ranks {ranks} are not a valid tied ranking", lineno)
        avg = pos + (t - 1) / 2
        out[order[k:k + t]] = d - avg
        pos += t
        k += t
    return out


def parse_ranks(text: str) -> RankDataset:
    rows = list(_rows(text))
    if not rows:
        raise ParseError("empty input")
    lineno, header = rows[0]
    has_weight = header[-1] == WEIGHT_COLUMN
    items = tuple(header[:-1] if has_weight else header)
    if len(items) < 2 or not all(items):
        raise ParseError("header must name at least two items", lineno)
    if len(set(items)) != len(items):
        raise ParseError("duplicate item in header", lineno)
    if len(rows) == 1:
        raise ParseError("no data rows", lineno)
    scores, weights = [], []
    for lineno, cells in rows[1:]:
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(cells)}", lineno)
        try:
            ranks = [float(c) for c in cells[: len(items)]]
        except ValueError:
            raise ParseError("non-numeric rank", lineno) from None
        scores.append(_scores_from_ranks(ranks, lineno))
        weights.append(_weight(cells[-1], lineno) if has_weight else 1.0)
    return RankDataset(items, np.array(scores), weights)


def _format_tier(items, tier) -> str:
    names = [items[j] for j in tier]
    return names[0] if len(names) == 1 else "[" + ",".join(names) + "]"


def format_orderings(ds: RankDataset) -> str:
    lines = ["ordering,weight"]
    for o in ds.orderings():
        token = ">".join(_format_tier(ds.items, t) for t in o.tiers)
        if len(o.tiers) < ds.d:
            token = f'"{token}"'
        lines.append(f"{token},{_format_weight(o.weight)}")
    return "\n".join(lines) + "\n"


def format_ranks(ds: RankDataset) -> str:
    lines = [",".join(ds.items + (WEIGHT_COLUMN,))]
    for s, w in zip(ds.scores, ds.weights):
        ranks = [_format_weight(ds.d - x) for x in s]
        lines.append(",".join(ranks + [_format_weight(w)]))
    return "\n".join(lines) + "\n"


def load_dataset(path: str | Path, fmt: str = "orderings") -> RankDataset:
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "orderings":
        return parse_orderings(text)
    if fmt == "ranks":
        return parse_ranks(text)
    raise ValueError(f"unknown format {fmt!r}")


def load_fixture(name: str) -> RankDataset:
    """One of the bundled datasets listed in ``FIXTURES``."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    text = resources.files("tcarank").joinpath(f"fixtures/{name}.csv").read_text("utf-8")
    return parse_orderings(text)

