"""Command-line pipelines: corpus dumps in, CSV reports out.

Subcommands: macro, census, compare, timing, degrees, classes. Every
command is a file-to-file batch step; diagnostics (parse errors, skipped
threads) go to stderr, never into data files. Exit codes: 0 success,
1 input error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass, field
from functools import partial
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import CorpusParseError, ThreadMotifsError
from .expression_stats import (
    BinSpec,
    DEFAULT_RARITY_THRESHOLD,
    assign_bins,
    classify_expression,
    fit_null_model,
    z_scores,
)
from .graphs import build_reply_graph, build_user_graph, degree_sequences
from .macro_metrics import ecdf, lower_median, macro_record
from .motif_census import (
    MotifCensus,
    census_fast,
    census_naive,
    completion_fractions,
    get_class_table,
    motif_instances,
)
from .thread_model import (
    DELETED_SENTINEL,
    FilterPolicy,
    ThreadRecord,
    filter_corpus,
    parse_corpus,
    thread_lifetime,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONFIG = 2

MACRO_HEADER = (
    "thread_id,n_posts,n_users,responsiveness_median_s,"
    "reciprocity,op_betweenness,branching_factor"
).split(",")
ECDF_METRICS = (
    "responsiveness_median_s",
    "reciprocity",
    "op_betweenness",
    "branching_factor",
)
COMPARE_HEADER = (
    "bin,class,M,mu_null,sigma_null,se_null,N,mean_focus,sigma_focus,se_focus,"
    "z,label,reason"
).split(",")


@dataclass
class RunConfig:
    """Everything one pipeline run needs, resolved from CLI flags."""

    input_path: Path | None
    out_dir: Path | None
    policy: FilterPolicy = field(default_factory=FilterPolicy)
    bins: BinSpec = field(default_factory=BinSpec)
    census_mode: str = "fast"
    branching_mode: str = "internal"
    rarity_threshold: float = DEFAULT_RARITY_THRESHOLD
    jobs: int = 1


def _fmt(value) -> str:
    """Fixed 6-decimal rendering for reals; empty field for undefined."""
    return "" if value is None else f"{value:.6f}"


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _load_corpus(config: RunConfig) -> list[ThreadRecord]:
    """Parse and filter the input corpus, reporting problems on stderr."""
    errors: list[Exception] = []
    with open(config.input_path, encoding="utf-8") as fh:
        threads = list(parse_corpus(fh, on_error=errors.append))
    for err in errors:
        _diag(f"warning: skipped {err}")
    if errors:
        _diag(f"warning: {len(errors)} malformed line(s)/thread(s) skipped")
    filtered = filter_corpus(threads, config.policy)
    dropped = len(threads) - len(filtered)
    if dropped:
        _diag(f"info: filter dropped {dropped} of {len(threads)} threads")
    if not filtered:
        _diag("warning: no threads remain after filtering")
    return filtered


def _map_ordered(fn: Callable, items: Sequence, jobs: int) -> list:
    """Apply fn over items, optionally on a worker pool, preserving order."""
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with Pool(processes=jobs) as pool:
        chunk = max(1, len(items) // (jobs * 8))
        return list(pool.imap(fn, items, chunksize=chunk))


# Worker functions live at module level so they pickle for the pool.

def _census_worker(thread: ThreadRecord, mode: str):
    table = get_class_table()
    graph = build_user_graph(thread)
    census = census_fast(graph, table) if mode == "fast" else census_naive(graph, table)
    return thread.thread_id, thread.source, census


def _degree_worker(thread: ThreadRecord):
    return (
        thread.thread_id,
        degree_sequences(build_user_graph(thread)),
        degree_sequences(build_reply_graph(thread)),
    )


def _timing_worker(thread: ThreadRecord, class_name: str):
    table = get_class_table()
    cls = table.named(class_name)
    graph = build_user_graph(thread)
    t0, t1 = thread_lifetime(thread)
    pairs = motif_instances(graph, cls)
    fractions = completion_fractions(graph, cls, t0, t1)
    return thread.thread_id, [
        (graph.users[v], graph.users[w], frac)
        for (v, w), frac in zip(pairs, fractions)
    ]


def cmd_macro(config: RunConfig) -> int:
    """Write macro_metrics.csv and one ECDF CSV per metric."""
    threads = _load_corpus(config)
    worker = partial(macro_record, branching_mode=config.branching_mode)
    records = _map_ordered(worker, threads, config.jobs)
    rows = [
        (
            r.thread_id,
            r.n_posts,
            r.n_users,
            _fmt(r.responsiveness_median_s),
            _fmt(r.reciprocity),
            _fmt(r.op_betweenness),
            _fmt(r.branching_factor),
        )
        for r in records
    ]
    _write_csv(config.out_dir / "macro_metrics.csv", MACRO_HEADER, rows)
    for metric in ECDF_METRICS:
        samples = [
            getattr(r, metric) for r in records if getattr(r, metric) is not None
        ]
        path = config.out_dir / f"ecdf_{metric}.csv"
        if not samples:
            _diag(f"warning: no defined values for {metric}, ECDF is empty")
            _write_csv(path, ("value", "cum_fraction"), [])
            continue
        curve = ecdf(samples)
        _write_csv(
            path,
            ("value", "cum_fraction"),
            [(_fmt(v), _fmt(f)) for v, f in zip(curve.values, curve.fractions)],
        )
    return EXIT_OK


def census_header(class_names: Sequence[str]) -> list[str]:
    return ["thread_id", "source", "n_users", "bin"] + list(class_names)


def cmd_census(config: RunConfig) -> int:
    """Write census.csv: per-thread anchored class counts plus bin label."""
    threads = _load_corpus(config)
    table = get_class_table()
    worker = partial(_census_worker, mode=config.census_mode)
    results = _map_ordered(worker, threads, config.jobs)
    rows = []
    for thread_id, source, census in results:
        bin_index = config.bins.bin_of(census.n_users)
        label = "" if bin_index is None else config.bins.labels[bin_index]
        rows.append([thread_id, source, census.n_users, label, *census.counts])
    _write_csv(config.out_dir / "census.csv", census_header(table.names), rows)
    return EXIT_OK


def read_census_csv(path: Path, class_names: Sequence[str]) -> list[MotifCensus]:
    """Load censuses back from a census.csv, enforcing the exact schema."""
    expected = census_header(class_names)
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected:
            got = header or []
            for i, want in enumerate(expected):
                have = got[i] if i < len(got) else "<missing>"
                if have != want:
                    raise CorpusParseError(
                        1,
                        f"{path}: census schema mismatch at column {i + 1}: "
                        f"found {have!r}, expected {want!r}",
                    )
            raise CorpusParseError(1, f"{path}: census schema has extra columns")
        censuses = []
        for line_no, row in enumerate(reader, start=2):
            try:
                n_users = int(row[2])
                counts = tuple(int(c) for c in row[4:])
            except (IndexError, ValueError) as err:
                raise CorpusParseError(line_no, f"{path}: bad census row ({err})")
            if len(counts) != len(class_names):
                raise CorpusParseError(line_no, f"{path}: bad census row width")
            censuses.append(MotifCensus(counts, n_users))
    return censuses


def cmd_compare(focus_path: Path, baseline_path: Path, config: RunConfig) -> int:
    """Standardize a focus census file against a baseline one."""
    table = get_class_table()
    focus = read_census_csv(focus_path, table.names)
    baseline = read_census_csv(baseline_path, table.names)
    null = fit_null_model(assign_bins(baseline, config.bins))
    report = z_scores(assign_bins(focus, config.bins), null, table.names)
    expression = classify_expression(report, config.rarity_threshold)
    rows = []
    for cell, label in zip(report.cells, expression.cell_labels):
        rows.append(
            (
                cell.bin_label,
                cell.class_name,
                cell.m_baseline,
                _fmt(cell.mu_null),
                _fmt(cell.sigma_null),
                _fmt(cell.se_null),
                cell.n_focus,
                _fmt(cell.mean_focus),
                _fmt(cell.sigma_focus),
                _fmt(cell.se_focus),
                _fmt(cell.z),
                label,
                cell.reason or "",
            )
        )
    _write_csv(config.out_dir / "compare.csv", COMPARE_HEADER, rows)
    summary_rows = [
        (name, "+".join(sorted(expression.class_labels[name])))
        for name in table.names
    ]
    _write_csv(
        config.out_dir / "expression_summary.csv", ("class", "labels"), summary_rows
    )
    return EXIT_OK


def cmd_timing(config: RunConfig, class_name: str) -> int:
    """Write timing.csv: per-instance completion fractions plus their median."""
    threads = _load_corpus(config)
    worker = partial(_timing_worker, class_name=class_name)
    results = _map_ordered(worker, threads, config.jobs)
    rows = []
    fractions = []
    for thread_id, instances in results:
        for v_user, w_user, frac in instances:
            rows.append(("instance", thread_id, v_user, w_user, _fmt(frac)))
            fractions.append(frac)
    if fractions:
        rows.append(("median", "", "", "", _fmt(lower_median(fractions))))
    else:
        _diag(f"warning: no instances of {class_name} found, median undefined")
    _write_csv(
        config.out_dir / "timing.csv",
        ("kind", "thread_id", "v_user", "w_user", "fraction"),
        rows,
    )
    return EXIT_OK


def cmd_degrees(config: RunConfig) -> int:
    """Write per-node degrees and corpus-wide degree histograms."""
    threads = _load_corpus(config)
    results = _map_ordered(_degree_worker, threads, config.jobs)
    node_rows = []
    hist: dict[tuple[str, str, int], int] = {}
    for thread_id, user_report, reply_report in results:
        for report in (user_report, reply_report):
            for node, din, dout in zip(
                report.nodes, report.in_degrees, report.out_degrees
            ):
                node_rows.append((report.kind, f"{thread_id}:{node}", din, dout))
            for kind_label, histogram in (
                ("in", report.in_histogram()),
                ("out", report.out_histogram()),
            ):
                for degree, count in histogram.items():
                    key = (report.kind, kind_label, degree)
                    hist[key] = hist.get(key, 0) + count
    _write_csv(
        config.out_dir / "degrees.csv",
        ("graph", "node", "in_degree", "out_degree"),
        node_rows,
    )
    _write_csv(
        config.out_dir / "degree_hist.csv",
        ("graph", "degree_kind", "degree", "count"),
        [(g, k, d, c) for (g, k, d), c in sorted(hist.items())],
    )
    return EXIT_OK


def cmd_classes(out=None) -> int:
    """Print the full class table: name, member configs, and M/A/N counts."""
    out = out if out is not None else sys.stdout
    table = get_class_table()
    print("class,config1,config2,M,A,N", file=out)
    for cls in table.classes:
        configs = ["".join(c) for c in cls.configs]
        config2 = configs[1] if len(configs) == 2 else ""
        m, a, n = cls.man_counts
        print(f"{cls.name},{configs[0]},{config2},{m},{a},{n}", file=out)
    return EXIT_OK


def _add_corpus_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="line-delimited corpus dump")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument(
        "--min-extra-posts",
        type=int,
        default=5,
        help="keep threads with at least this many posts besides the root",
    )
    parser.add_argument(
        "--keep-deleted-root",
        action="store_true",
        help="keep threads whose root author matches the deleted sentinel",
    )
    parser.add_argument(
        "--deleted-sentinel",
        default=DELETED_SENTINEL,
        help="author marker for deleted accounts",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=0,
        help="worker processes (default: all processors)",
    )


def _add_bins_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--bins",
        default=None,
        help='node-count bin ranges, e.g. "1-5,6-10,11-15" (default: 1-5 .. 36-40)',
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threadmotifs",
        description="Thread-structure metrics and anchored triadic motif census.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("macro", help="per-thread macroscopic metrics and ECDFs")
    _add_corpus_args(p)
    p.add_argument(
        "--branching-mode",
        choices=("internal", "all"),
        default="internal",
        help="average replies over replied-to posts, or over all posts",
    )

    p = sub.add_parser("census", help="anchored triadic motif census per thread")
    _add_corpus_args(p)
    _add_bins_arg(p)
    p.add_argument("--census-mode", choices=("fast", "naive"), default="fast")

    p = sub.add_parser("compare", help="Z-scores of a focus census vs a baseline")
    p.add_argument("--focus", required=True, help="focus census.csv")
    p.add_argument("--baseline", required=True, help="baseline census.csv")
    p.add_argument("--out", required=True, help="output directory")
    _add_bins_arg(p)
    p.add_argument(
        "--rarity-threshold",
        type=float,
        default=DEFAULT_RARITY_THRESHOLD,
        help="mean count a class must exceed in some bin to be non-rare",
    )

    p = sub.add_parser("timing", help="completion fractions for one class")
    p.add_argument("class_name", help="anchored class name, e.g. 201-b")
    _add_corpus_args(p)

    p = sub.add_parser("degrees", help="degree sequences and histograms")
    _add_corpus_args(p)

    sub.add_parser("classes", help="print the 36-class table")
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    """Turn parsed flags into a RunConfig; raises ValueError on bad values."""
    policy = FilterPolicy(
        min_extra_posts=getattr(args, "min_extra_posts", 5),
        drop_deleted_root=not getattr(args, "keep_deleted_root", False),
        deleted_sentinel=getattr(args, "deleted_sentinel", DELETED_SENTINEL),
    )
    bins_text = getattr(args, "bins", None)
    bins = BinSpec.parse(bins_text) if bins_text else BinSpec()
    jobs = getattr(args, "jobs", 0)
    if jobs <= 0:
        jobs = os.cpu_count() or 1
    rarity = getattr(args, "rarity_threshold", DEFAULT_RARITY_THRESHOLD)
    if rarity < 0:
        raise ValueError("rarity threshold must be non-negative")
    return RunConfig(
        input_path=Path(args.input) if getattr(args, "input", None) else None,
        out_dir=Path(args.out) if getattr(args, "out", None) else None,
        policy=policy,
        bins=bins,
        census_mode=getattr(args, "census_mode", "fast"),
        branching_mode=getattr(args, "branching_mode", "internal"),
        rarity_threshold=rarity,
        jobs=jobs,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "classes":
        return cmd_classes()
    try:
        config = _resolve_config(args)
    except ValueError as err:
        _diag(f"error: {err}")
        return EXIT_CONFIG
    if args.command == "timing":
        # Validate the class before touching the input: bad names and the
        # edge-free class are configuration errors.
        try:
            cls = get_class_table().named(args.class_name)
        except KeyError as err:
            _diag(f"error: {err.args[0]}")
            return EXIT_CONFIG
        if not cls.has_edges:
            _diag(f"error: {cls.name} is an edge-free class, timing is undefined")
            return EXIT_CONFIG
    try:
        if config.out_dir is not None:
            os.makedirs(config.out_dir, exist_ok=True)
        if args.command == "macro":
            return cmd_macro(config)
        if args.command == "census":
            return cmd_census(config)
        if args.command == "compare":
            return cmd_compare(Path(args.focus), Path(args.baseline), config)
        if args.command == "timing":
            return cmd_timing(config, args.class_name)
        if args.command == "degrees":
            return cmd_degrees(config)
    except (OSError, ThreadMotifsError) as err:
        _diag(f"error: {err}")
        return EXIT_INPUT
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
