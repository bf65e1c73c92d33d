"""Command-line front end.

Thin by design: every subcommand parses arguments into a RunConfig, loads
inputs with the library's readers, calls one library operation, and writes
with the library's exporters, so any CLI result is reproducible from the
Python API. Exit codes: 0 success, 1 usage error, 2 data error (parse,
validation, degenerate input), 3 I/O failure.

Outputs are deterministic: rows come out in documented sort orders and
floats are printed with repr, so identical inputs give byte-identical
files. The one exception is bench, whose numbers are wall-clock readings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import correlation, lexsig, ranking, ratio, stats
from .errors import EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_USAGE, CorpusStatsError, UsageError
from .ingest import (
    DEFAULT_SEPARATOR,
    Document,
    TokenizerConfig,
    parse_frequency_list,
    parse_ngram_counts,
    read_corpus,
    tokenize,
)

JOBS_ENV_VAR = "CORPUSSTATS_JOBS"

DEFAULT_SEED = 42


@dataclass
class RunConfig:
    """Typed bag of everything a single CLI invocation needs."""

    command: str
    corpus: Path | None = None
    stats_path: Path | None = None
    freq_list: Path | None = None
    ngram: Path | None = None
    docs: list[Path] = field(default_factory=list)
    out: Path | None = None
    out_prefix: str | None = None
    curve_out: Path | None = None
    separator: str = DEFAULT_SEPARATOR
    lowercase: bool = True
    strip_edge_punctuation: bool = True
    keep_lemmatized: bool = False
    min_count: int = 0
    by: str | None = None
    scatter: bool = False
    overlap: tuple[int, int] | None = None
    checkpoints: list[int] = field(default_factory=list)
    fractional: bool = False
    diagnostic: bool = False
    rounding: str = "all"
    which: str = "tc"
    k: int = 5
    n_hat: int | None = None
    tc_as_df: bool = False
    normalized_tf: bool = False
    kernel: str = "both"
    sizes: list[int] = field(default_factory=list)
    trials: int = bench_mod.DEFAULT_TRIALS
    budget: float = bench_mod.DEFAULT_BUDGET_SECONDS
    extrapolate: list[int] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    jobs: int | None = None
    format: str = "tsv"

    def tokenizer(self) -> TokenizerConfig:
        return TokenizerConfig(
            lowercase=self.lowercase,
            strip_edge_punctuation=self.strip_edge_punctuation,
        )


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns exit codes."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _comma_ints(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corpusstats", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_tokenizer_flags(p):
        p.add_argument("--no-lowercase", dest="lowercase", action="store_false",
                       help="keep original letter case")
        p.add_argument("--keep-edge-punctuation", dest="strip_edge_punctuation",
                       action="store_false",
                       help="do not strip leading/trailing punctuation from tokens")

    p = sub.add_parser("count", help="count tc/df over a corpus into a stats table")
    p.add_argument("--corpus", required=True, type=Path,
                   help="directory of *.txt files, or one %%%%DOC%%%%-separated stream file")
    p.add_argument("--out", required=True, type=Path, help="stats table to write")
    p.add_argument("--separator", default=DEFAULT_SEPARATOR,
                   help="document separator line for stream mode")
    p.add_argument("--jobs", type=int, default=None,
                   help=f"worker threads (default: ${JOBS_ENV_VAR} or 1)")
    add_tokenizer_flags(p)

    p = sub.add_parser("rank", help="rank a stats table's terms")
    p.add_argument("--stats", required=True, type=Path, dest="stats_path")
    p.add_argument("--by", choices=["tc", "df"],
                   help="write the full ranking by this column")
    p.add_argument("--scatter", action="store_true",
                   help="write aligned (rank_tc, rank_df) pairs instead")
    p.add_argument("--overlap", nargs=2, type=int, metavar=("FROM", "TO"),
                   help="report tc-vs-df overlap within this closed rank window")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv",
                   help="output format for --overlap reports")

    p = sub.add_parser("correlate", help="rank correlation between the tc and df rankings")
    p.add_argument("--stats", required=True, type=Path, dest="stats_path")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--fractional", action="store_true",
                   help="use mid-rank (average) ranks instead of competition ranks")
    p.add_argument("--diagnostic", action="store_true",
                   help="also report the tie-naive 6*sum(d^2) Spearman shortcut")
    p.add_argument("--curve-out", type=Path, dest="curve_out",
                   help="also write a prefix-correlation curve here")
    p.add_argument("--checkpoints", default="",
                   help="comma-separated prefix sizes for --curve-out")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")

    p = sub.add_parser("ratio", help="histogram the per-term tc/df ratios")
    p.add_argument("--stats", required=True, type=Path, dest="stats_path")
    p.add_argument("--out-prefix", required=True, dest="out_prefix",
                   help="write PREFIX.<rounding>.tsv and PREFIX.<rounding>.summary.tsv")
    p.add_argument("--rounding", default="all",
                   choices=["two_decimals", "one_decimal", "integer", "all"])

    p = sub.add_parser("ffreq", help="frequency-of-frequencies for one input")
    p.add_argument("--stats", type=Path, dest="stats_path")
    p.add_argument("--freq-list", type=Path, dest="freq_list")
    p.add_argument("--ngram", type=Path)
    p.add_argument("--which", choices=["tc", "df"], default="tc",
                   help="which stats column to histogram (stats input only)")
    p.add_argument("--min-count", type=int, default=0, dest="min_count",
                   help="drop n-gram rows below this count")
    p.add_argument("--keep-lemmatized", action="store_true", dest="keep_lemmatized")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")

    p = sub.add_parser("lexsig", help="top-k tf-idf signature of each document")
    p.add_argument("--doc", action="append", type=Path, default=[], dest="docs",
                   help="document text file (repeatable)")
    p.add_argument("--stats", type=Path, dest="stats_path",
                   help="background model from a stats table")
    p.add_argument("--freq-list", type=Path, dest="freq_list",
                   help="background model from a tc-only frequency list")
    p.add_argument("--n-hat", type=int, dest="n_hat",
                   help="document-count estimate behind the background counts")
    p.add_argument("--tc-as-df", action="store_true", dest="tc_as_df",
                   help="ignore measured df and use min(tc, n) instead")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--normalized-tf", action="store_true", dest="normalized_tf")
    p.add_argument("--keep-lemmatized", action="store_true", dest="keep_lemmatized")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    add_tokenizer_flags(p)

    p = sub.add_parser("compare-sig",
                       help="signatures under measured df vs the tc-as-df proxy")
    p.add_argument("--doc", action="append", type=Path, default=[], dest="docs",
                   required=True, help="document text file (repeatable)")
    p.add_argument("--stats", required=True, type=Path, dest="stats_path")
    p.add_argument("--n-hat", type=int, dest="n_hat",
                   help="document-count estimate for the proxy model")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--normalized-tf", action="store_true", dest="normalized_tf")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    add_tokenizer_flags(p)

    p = sub.add_parser("bench", help="time the Kendall kernels and fit growth")
    p.add_argument("--kernel", choices=["naive", "fast", "both"], default="both")
    p.add_argument("--sizes", required=True,
                   help="comma-separated ascending sample sizes")
    p.add_argument("--trials", type=int, default=bench_mod.DEFAULT_TRIALS)
    p.add_argument("--budget", type=float, default=bench_mod.DEFAULT_BUDGET_SECONDS,
                   help="wall-clock budget per size cell, seconds")
    p.add_argument("--extrapolate", action="append", type=int, default=[],
                   help="predict seconds at this n from the fit (repeatable)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out-prefix", required=True, dest="out_prefix",
                   help="write PREFIX.<kernel>.tsv per kernel")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    for name in vars(args):
        if name == "command":
            continue
        value = getattr(args, name)
        if name == "overlap" and value is not None:
            value = (value[0], value[1])
        if name in ("checkpoints", "sizes") and isinstance(value, str):
            value = _comma_ints(value, f"--{name}")
        setattr(config, name, value)
    return config


def run(config: RunConfig) -> None:
    """Execute one configured invocation; raises on failure."""
    handler = _HANDLERS.get(config.command)
    if handler is None:
        raise UsageError(f"unknown command: {config.command!r}")
    handler(config)


def _effective_jobs(config: RunConfig) -> int:
    if config.jobs is not None:
        jobs = config.jobs
    else:
        raw = os.environ.get(JOBS_ENV_VAR, "1")
        try:
            jobs = int(raw)
        except ValueError:
            raise UsageError(f"{JOBS_ENV_VAR} must be an integer, got {raw!r}") from None
    if jobs < 1:
        raise UsageError(f"jobs must be >= 1, got {jobs}")
    return jobs


def _write_json(payload, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2))
        fh.write("\n")


def _write_tsv_rows(rows, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write("\t".join(str(cell) for cell in row))
            fh.write("\n")


def _cmd_count(config: RunConfig) -> None:
    documents = read_corpus(config.corpus, config.tokenizer(), config.separator)
    table = stats.compute_tc_df(documents, jobs=_effective_jobs(config))
    stats.write_stats(table, config.out)


def _cmd_rank(config: RunConfig) -> None:
    modes = sum([config.by is not None, config.scatter, config.overlap is not None])
    if modes != 1:
        raise UsageError("choose exactly one of --by, --scatter, --overlap")
    table = stats.read_stats(config.stats_path)
    if config.by is not None:
        ranking.write_ranked_list(ranking.ranked_by(table, config.by), config.out)
        return
    if config.scatter:
        ranking.write_rank_scatter(ranking.align_ranks(table), config.out)
        return
    lo, hi = config.overlap
    by_tc = ranking.ranked_by(table, "tc")
    by_df = ranking.ranked_by(table, "df")
    counts = ranking.ranking_overlap(by_tc, by_df, lo, hi)
    if config.format == "json":
        _write_json(
            {
                "from_rank": lo,
                "to_rank": hi,
                "union": counts.union_size,
                "intersection": counts.intersection_size,
            },
            config.out,
        )
    else:
        _write_tsv_rows(
            [
                ("from_rank", lo),
                ("to_rank", hi),
                ("union", counts.union_size),
                ("intersection", counts.intersection_size),
            ],
            config.out,
        )


def _report_rows(report: correlation.CorrelationReport) -> list[tuple[str, object]]:
    rows: list[tuple[str, object]] = [
        ("n", report.n),
        ("spearman_rho", repr(report.spearman_rho)),
        ("kendall_tau_a", repr(report.kendall_tau_a)),
        ("kendall_tau_b", repr(report.kendall_tau_b)),
        ("rho_estimated_from_tau", repr(report.rho_estimated_from_tau)),
        ("p_value_rho", repr(report.p_value_rho)),
        ("concordant", report.concordant),
        ("discordant", report.discordant),
        ("ties_x", report.ties_x),
        ("ties_y", report.ties_y),
        ("ties_xy", report.ties_xy),
    ]
    if report.spearman_rho_shortcut is not None:
        rows.append(("spearman_rho_shortcut", repr(report.spearman_rho_shortcut)))
    return rows


def _cmd_correlate(config: RunConfig) -> None:
    tc, df, _ = stats.read_stats_columns(config.stats_path)
    if config.fractional:
        x = correlation.fractional_rank(tc)
        y = correlation.fractional_rank(df)
    else:
        x = ranking.rank_values(tc)
        y = ranking.rank_values(df)
    report = correlation.correlation_report(x, y, diagnostic_shortcut=config.diagnostic)
    if config.format == "json":
        payload = {key: value for key, value in _report_rows(report)}
        # undo the repr stringification for JSON, which has real floats
        for key, value in list(payload.items()):
            if isinstance(value, str):
                payload[key] = float(value)
        _write_json(payload, config.out)
    else:
        _write_tsv_rows(_report_rows(report), config.out)
    if config.curve_out is not None or config.checkpoints:
        if config.curve_out is None or not config.checkpoints:
            raise UsageError("--curve-out and --checkpoints go together")
        order = np.lexsort((y, x))
        points = correlation.prefix_correlation_curve(x[order], y[order], config.checkpoints)
        correlation.write_curve(points, config.curve_out)


def _cmd_ratio(config: RunConfig) -> None:
    table = stats.read_stats(config.stats_path)
    if config.rounding == "all":
        roundings = list(ratio.Rounding)
    else:
        roundings = [ratio.Rounding(config.rounding)]
    for mode in roundings:
        hist = ratio.ratio_histogram(table, mode)
        ratio.write_histogram(hist, Path(f"{config.out_prefix}.{mode.value}.tsv"))
        ratio.write_ratio_summary(hist, Path(f"{config.out_prefix}.{mode.value}.summary.tsv"))


def _cmd_ffreq(config: RunConfig) -> None:
    sources = [
        ("--stats", config.stats_path),
        ("--freq-list", config.freq_list),
        ("--ngram", config.ngram),
    ]
    given = [(flag, path) for flag, path in sources if path is not None]
    if len(given) != 1:
        raise UsageError("choose exactly one of --stats, --freq-list, --ngram")
    flag, path = given[0]
    if flag == "--stats":
        histogram = stats.frequency_of_frequencies(stats.read_stats(path), config.which)
    else:
        if config.which != "tc":
            raise UsageError(f"--which df needs a stats table, not {flag}")
        if flag == "--freq-list":
            entries = parse_frequency_list(path, keep_lemmatized=config.keep_lemmatized)
        else:
            entries = parse_ngram_counts(path, min_count=config.min_count)
        histogram = stats.frequency_of_frequencies(entries, "tc")
    if config.format == "json":
        _write_json({str(count): histogram[count] for count in histogram}, config.out)
    else:
        _write_tsv_rows(
            [(count, histogram[count]) for count in sorted(histogram)], config.out
        )


def _load_docs(config: RunConfig) -> list[Document]:
    if not config.docs:
        raise UsageError("at least one --doc is required")
    docs = []
    tok = config.tokenizer()
    for path in config.docs:
        docs.append(Document(Path(path).stem, tokenize(Path(path).read_text("utf-8"), tok)))
    return docs


def _background_model(config: RunConfig) -> lexsig.BackgroundModel:
    if (config.stats_path is None) == (config.freq_list is None):
        raise UsageError("choose exactly one of --stats, --freq-list")
    if config.stats_path is not None:
        table = stats.read_stats(config.stats_path)
        mode = lexsig.DfMode.TC_AS_DF if config.tc_as_df else lexsig.DfMode.MEASURED_DF
        return lexsig.model_from_table(table, mode, config.n_hat)
    if config.n_hat is None:
        raise UsageError("--freq-list models need --n-hat (lists carry no document count)")
    entries = parse_frequency_list(config.freq_list, keep_lemmatized=config.keep_lemmatized)
    return lexsig.model_from_entries(entries, config.n_hat)


def _cmd_lexsig(config: RunConfig) -> None:
    docs = _load_docs(config)
    model = _background_model(config)
    signatures = [lexsig.lexical_signature(d, model, config.k, config.normalized_tf) for d in docs]
    if config.format == "json":
        payload = {
            sig.doc_id: [[term, weight] for term, weight in sig.terms] for sig in signatures
        }
        _write_json(payload, config.out)
    else:
        rows = []
        for sig in signatures:
            for term, weight in sig.terms:
                rows.append((sig.doc_id, term, repr(weight)))
        _write_tsv_rows(rows, config.out)


def _cmd_compare_sig(config: RunConfig) -> None:
    docs = _load_docs(config)
    table = stats.read_stats(config.stats_path)
    measured = lexsig.model_from_table(table, lexsig.DfMode.MEASURED_DF, config.n_hat)
    proxy = lexsig.model_from_table(table, lexsig.DfMode.TC_AS_DF, config.n_hat)
    rows = lexsig.compare_signatures(docs, measured, proxy, config.k, config.normalized_tf)
    if config.format == "json":
        payload = [
            {
                "doc": r.doc_id,
                "size_measured": r.size_a,
                "size_proxy": r.size_b,
                "overlap": r.overlap,
                "tau_b_shared": r.tau_b_shared,
                "displaced": r.displaced,
            }
            for r in rows
        ]
        _write_json(payload, config.out)
    else:
        _write_tsv_rows(
            [
                (
                    r.doc_id,
                    r.size_a,
                    r.size_b,
                    r.overlap,
                    "NA" if r.tau_b_shared is None else repr(r.tau_b_shared),
                    "true" if r.displaced else "false",
                )
                for r in rows
            ],
            config.out,
        )


def _cmd_bench(config: RunConfig) -> None:
    kernels = ["naive", "fast"] if config.kernel == "both" else [config.kernel]
    for kernel in kernels:
        curve = bench_mod.time_kernel(
            kernel,
            config.sizes,
            trials=config.trials,
            seed=config.seed,
            budget_seconds=config.budget,
        )
        if curve.fit is not None:
            for target in config.extrapolate:
                bench_mod.extrapolate(curve, target)
        bench_mod.write_curve(curve, Path(f"{config.out_prefix}.{kernel}.tsv"))


_HANDLERS = {
    "count": _cmd_count,
    "rank": _cmd_rank,
    "correlate": _cmd_correlate,
    "ratio": _cmd_ratio,
    "ffreq": _cmd_ffreq,
    "lexsig": _cmd_lexsig,
    "compare-sig": _cmd_compare_sig,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        run(config_from_args(args))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorpusStatsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
