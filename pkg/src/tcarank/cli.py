"""Command-line front end.

Exit codes: 0 success, 2 I/O or usage error, 3 parse error, 4 data not
globally homogeneous (``ghc`` only).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .homogeneity import classify_scenario, homogeneity_report
from .io import ParseError, format_orderings, load_dataset
from .mixture import PeelConfig, flatten, group_report, peel
from .plotting import emit_svg
from .ranks import RankDataset, _format_weight, collapse_to_partial
from .report import build_report, score_rows
from .synthetic import faithful_block_dataset, inject_swap, random_rank_dataset
from .tca import NegaAnalysis, analyze_nega, biplot_coordinates
from .tsvd import DEFAULT_EXACT_LIMIT, DegenerateTableError

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_NOT_HOMOGENEOUS = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x: float) -> str:
    # repr is locale independent and round-trips
    return repr(float(x))


def _load(args) -> RankDataset:
    try:
        ds = load_dataset(args.input, args.format)
    except ParseError as e:
        raise CliError(f"{args.input}: {e}", EXIT_PARSE) from None
    except OSError as e:
        raise CliError(f"cannot read {args.input}: {e.strerror or e}", EXIT_IO) from None
    except UnicodeDecodeError as e:
        raise CliError(f"{args.input}: not UTF-8 text ({e.reason})", EXIT_PARSE) from None
    if args.top_k is not None:
        try:
            ds = collapse_to_partial(ds, args.top_k)
        except ValueError as e:
            raise CliError(f"--top-k: {e}", EXIT_PARSE) from None
    return ds


def _analysis(ds, args, k=None) -> NegaAnalysis:
    try:
        return analyze_nega(ds, k, args.method, args.exact_limit)
    except DegenerateTableError as e:
        raise CliError(f"cannot analyze {args.input}: {e}", EXIT_PARSE) from None


def _axis_pairs(k: int) -> list[tuple[int, int]]:
    if k == 1:
        return [(1, 1)]
    return [(a, a + 1) for a in range(1, k)]


def _score_csv(analysis: NegaAnalysis) -> str:
    return _csv_text(
        ["kind", "label", "axis", "score"],
        [(kind, lab, ax, _num(v)) for kind, lab, ax, v in score_rows(analysis)],
    )


def cmd_analyze(args) -> int:
    ds = _load(args)
    try:
        cfg = PeelConfig(
            outlier_threshold=args.outlier_threshold,
            max_depth=args.max_depth,
            axes_per_group=args.axes,
            method=args.method,
            exact_limit=args.exact_limit,
        )
    except ValueError as e:
        raise CliError(str(e), EXIT_IO) from None
    tree = peel(ds, cfg)
    out = Path(args.out_dir)
    doc = build_report(
        tree, __version__, {"path": Path(args.input).name, "format": args.format, "top_k": args.top_k}
    )
    try:
        _write_atomic(out / "report.json", doc.to_json())
        weights = dict(zip(range(ds.n), ds.weights))
        rows = [(lab, gid, _format_weight(weights[i])) for i, (lab, gid) in enumerate(flatten(tree))]
        _write_atomic(out / "assignments.csv", _csv_text(["pattern", "group", "weight"], rows))
        for g in tree.groups:
            _write_atomic(out / f"scores_{g.id}.csv", _score_csv(g.analysis))
            for x, y in _axis_pairs(len(g.analysis.axes)):
                bp = biplot_coordinates(g.analysis, x, y, title=f"{g.id}  GHC {g.ghc_percent:.2f}%")
                _write_atomic(out / f"biplot_{g.id}_{x}x{y}.svg", emit_svg(bp))
    except OSError as e:
        raise CliError(f"cannot write to {out}: {e.strerror or e}", EXIT_IO) from None
    n_groups, n_out = len(tree.groups), len(tree.outliers)
    print(f"{n_groups} groups, {n_out} outlier sets; reports in {out}")
    for leaf in tree.leaves:
        print()
        print(group_report(tree, leaf))
    return EXIT_OK


def cmd_ghc(args) -> int:
    ds = _load(args)
    analysis = _analysis(ds, args)
    scen = classify_scenario(analysis)
    if not scen.homogeneous:
        print(
            f"not globally homogeneous: {len(scen.v1_indices)} patterns "
            f"({100 * scen.v1_weight_fraction:.2f}% of weight) share the NEGA side of axis 1"
        )
        for i in scen.v1_indices:
            print(f"  {ds.labels[i]}")
        return EXIT_NOT_HOMOGENEOUS
    rep = homogeneity_report(ds, analysis=analysis)
    part = rep.partition
    print(f"lambda1 {rep.lambda1:.6f}")
    print(f"U(d) {rep.u_d:.6f}")
    print(f"GHC {rep.ghc_percent:.2f}")
    print(f"partition {part.describe(ds.items)} ({'faithful' if part.faithful else 'not faithful'})")
    print(f"faithful voters {len(rep.faithful_voters)} of {ds.n}")
    hist = rep.crossing_histogram()
    print("crossings " + ", ".join(f"{k}: {w:g}" for k, w in hist.items()))
    return EXIT_OK


def cmd_decompose(args) -> int:
    ds = _load(args)
    k_max = min(ds.n + 1, ds.d) - 1
    if args.k is not None and args.k > k_max:
        raise CliError(f"--k {args.k} exceeds min(I, J) - 1 = {k_max} for this input", EXIT_IO)
    analysis = _analysis(ds, args, args.k)
    print("lambda " + " ".join(f"{x:.4f}" for x in analysis.lambdas))
    print(classify_scenario(analysis).kind)
    out = Path(args.out_dir)
    try:
        _write_atomic(out / "scores.csv", _score_csv(analysis))
    except OSError as e:
        raise CliError(f"cannot write to {out}: {e.strerror or e}", EXIT_IO) from None
    return EXIT_OK


def cmd_simulate(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "random":
        ds = random_rank_dataset(rng, args.d, args.n, tie_prob=args.tie_prob)
    else:
        ds, blocks = faithful_block_dataset(rng, args.d, args.n)
        if args.kind == "swap":
            ds = inject_swap(ds, blocks, int(np.argmin(ds.weights)))
    text = format_orderings(ds)
    if args.output:
        try:
            _write_atomic(Path(args.output), text)
        except OSError as e:
            raise CliError(f"cannot write {args.output}: {e.strerror or e}", EXIT_IO) from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tcarank", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def data_args(sp):
        sp.add_argument("--input", required=True, help="rank data file")
        sp.add_argument("--format", choices=("orderings", "ranks"), default="orderings")
        sp.add_argument("--top-k", type=_positive_int, default=None,
                        help="keep only the first K choices (tie the rest)")
        sp.add_argument("--method", choices=("auto", "exact", "crisscross"), default="auto")
        sp.add_argument("--exact-limit", type=int, default=DEFAULT_EXACT_LIMIT)

    a = sub.add_parser("analyze", help="peel into homogeneous groups and write reports")
    data_args(a)
    a.add_argument("--outlier-threshold", type=float, default=0.02)
    a.add_argument("--max-depth", type=int, default=10)
    a.add_argument("--axes", type=_positive_int, default=3)
    a.add_argument("--out-dir", default="tcarank-out")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("ghc", help="global homogeneity coefficient of the whole input")
    data_args(g)
    g.set_defaults(func=cmd_ghc)

    d = sub.add_parser("decompose", help="dispersions and factor scores without peeling")
    data_args(d)
    d.add_argument("--k", type=_positive_int, default=None, help="number of axes")
    d.add_argument("--out-dir", default="tcarank-out")
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("simulate", help="write a seeded synthetic dataset")
    s.add_argument("--kind", choices=("random", "faithful", "swap"), default="random")
    s.add_argument("--d", type=_positive_int, default=4)
    s.add_argument("--n", type=_positive_int, default=10)
    s.add_argument("--tie-prob", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", default=None)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"tcarank: error: {e}", file=sys.stderr)
        return e.code
    except ValueError as e:
        print(f"tcarank: error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
