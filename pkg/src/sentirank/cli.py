"""Command-line interface.

Subcommands::

    sentirank ingest --citations C.tsv --authorship A.tsv [--aliases X.tsv] -w WS
    sentirank score -w WS [--lexicon-entries E.tsv --lexicon-forms F.tsv] [--curate-df 0.5]
    sentirank rank -w WS --metric all [--damping 0.55] [--tie-policy fractional]
    sentirank compare WS/pagerank.tsv WS/s_pagerank.tsv [--rbd-p 0.9] [--depth K]
    sentirank report -w WS [--top 20]
    sentirank export-graph -w WS

Exit codes: 0 ok, 2 usage/input error, 3 analysis error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from sentirank import __version__
from sentirank.errors import SentirankError
from sentirank.metrics import METRICS
from sentirank.ranking import TIE_POLICIES, ComparisonReport, compare_scores, write_comparisons
from sentirank.tsvio import read_scores
from sentirank.workspace import Workspace, load_config, resolve_config

logger = logging.getLogger("sentirank")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentirank",
        description="Sentiment-aware citation metrics for ranking authors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("--config", type=Path, help="key = value settings file")
    sub = parser.add_subparsers(dest="command", required=True)

    def workspace_arg(p):
        p.add_argument("-w", "--workspace", type=Path, required=True, help="workspace directory")

    p = sub.add_parser("ingest", help="load, alias, and remove self-citations")
    workspace_arg(p)
    p.add_argument("--citations", type=Path, required=True)
    p.add_argument("--authorship", type=Path, required=True)
    p.add_argument("--aliases", type=Path)
    p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    p.add_argument("--skip-bad-lines", action="store_true",
                   help="skip malformed citation lines instead of failing")

    p = sub.add_parser("score", help="score pairs, aggregate articles and authors")
    workspace_arg(p)
    p.add_argument("--lexicon-entries", type=Path)
    p.add_argument("--lexicon-forms", type=Path)
    p.add_argument("--demo-lexicon", action="store_true", help="use the bundled demo lexicon")
    p.add_argument("--curate-df", type=float, default=None,
                   help="drop lemmas in at least this fraction of sentences")

    p = sub.add_parser("rank", help="compute metric scores and ranks")
    workspace_arg(p)
    p.add_argument("--metric", action="append", required=True,
                   help=f"metric name or 'all'; one of: {', '.join(METRICS)}")
    p.add_argument("--damping", type=float)
    p.add_argument("--tie-policy", choices=TIE_POLICIES)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--max-iterations", type=int)

    p = sub.add_parser("compare", help="Kendall tau-b and RBD between two score files")
    p.add_argument("scores_a", type=Path)
    p.add_argument("scores_b", type=Path)
    p.add_argument("--rbd-p", type=float)
    p.add_argument("--depth", type=int)
    p.add_argument("--out", type=Path, help="report TSV (default: <a>_vs_<b>.tsv beside A)")

    p = sub.add_parser("report", help="render tables, comparison matrix and figures")
    workspace_arg(p)
    p.add_argument("--top", type=int)
    p.add_argument("--rbd-p", type=float)
    p.add_argument("--depth", type=int)
    p.add_argument("--tie-policy", choices=TIE_POLICIES)
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("export-graph", help="write the author network as TSV and DOT")
    workspace_arg(p)

    p = sub.add_parser("status", help="list stages and flag stale ones")
    workspace_arg(p)

    p = sub.add_parser("synth", help="write a synthetic corpus with sentiment skew")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--records", type=int, default=20000)
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("build-lexicon", help="collapse a SentiWordNet dump to lexicon TSV")
    p.add_argument("sentiwordnet", type=Path)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("fetch-authors", help="fetch authorship TSV from a metadata API")
    p.add_argument("--ids", type=Path, required=True, help="file with one article id per line")
    p.add_argument("--cache", type=Path, required=True)
    p.add_argument("--api-url", default=None)
    p.add_argument("--id-prefix", default="")
    p.add_argument("--delay", type=float, default=1.0)
    return parser


def _settings(args) -> dict:
    file_config = load_config(args.config) if args.config else {}
    cli = {k: getattr(args, k, None) for k in
           ("damping", "tolerance", "max_iterations", "curate_df", "tie_policy", "rbd_p", "depth", "top")}
    return resolve_config(cli, file_config)


def cmd_ingest(args, cfg) -> int:
    from sentirank.pipeline import run_ingest

    ws = Workspace(args.workspace)
    with ws.lock():
        summary = run_ingest(ws, args.citations, args.authorship, args.aliases,
                             args.format, args.skip_bad_lines)
    print(summary)
    if summary.loaded and summary.kept == 0:
        print("warning: empty corpus after filtering", file=sys.stderr)
    return 0


def cmd_score(args, cfg) -> int:
    from sentirank.pipeline import run_score
    from sentirank.synthetic import demo_lexicon_paths

    entries, forms = args.lexicon_entries, args.lexicon_forms
    if args.demo_lexicon:
        entries, forms = demo_lexicon_paths()
    ws = Workspace(args.workspace)
    with ws.lock():
        pairs = run_score(ws, entries, forms, cfg["curate_df"])
    if ws.path("lexicon_rejected.tsv").exists() and entries is not None:
        print(f"lexicon validation report: {ws.path('lexicon_rejected.tsv')}", file=sys.stderr)
    print(f"scored {len(pairs)} citing/cited pairs")
    return 0


def cmd_rank(args, cfg) -> int:
    from sentirank.pipeline import run_rank

    ws = Workspace(args.workspace)
    with ws.lock():
        results = run_rank(ws, args.metric, cfg["damping"], cfg["tie_policy"],
                           cfg["tolerance"], cfg["max_iterations"])
    for name, values in results.items():
        print(f"{name}: {len(values)} entities -> {ws.path(name + '.tsv')}")
    return 0


def cmd_compare(args, cfg) -> int:
    a, b = read_scores(args.scores_a), read_scores(args.scores_b)
    report = compare_scores(a, b, args.scores_a.stem, args.scores_b.stem, cfg["rbd_p"], cfg["depth"])
    out = args.out or args.scores_a.with_name(f"{args.scores_a.stem}_vs_{args.scores_b.stem}.tsv")
    write_comparisons([report], out)
    print(_summary(report))
    return 0


def _summary(r: ComparisonReport) -> str:
    return (
        f"{r.metric_a} vs {r.metric_b}: n={r.n}  Kendall tau-b={r.tau:.4f} "
        f"(p={r.p_value:.3g})  RBD(p={r.rbd_p}, k={r.depth})={r.rbd:.4f}"
    )


def cmd_report(args, cfg) -> int:
    from sentirank.report import run_report

    ws = Workspace(args.workspace)
    with ws.lock():
        path = run_report(ws, cfg["top"], cfg["rbd_p"], cfg["depth"], cfg["tie_policy"],
                          figures=not args.no_figures)
    print(f"report written to {path}")
    return 0


def cmd_export_graph(args, cfg) -> int:
    from sentirank.pipeline import run_export_graph

    ws = Workspace(args.workspace)
    with ws.lock():
        net = run_export_graph(ws)
    print(f"{len(net.nodes)} authors, {len(net.edges)} edges -> {ws.path('author_network.dot')}")
    return 0


def cmd_status(args, cfg) -> int:
    ws = Workspace(args.workspace)
    stale = ws.stale_stages()
    for name in sorted(ws.stages):
        state = "STALE: " + "; ".join(stale[name]) if name in stale else "ok"
        print(f"{name}\t{state}")
    return 3 if stale else 0


def cmd_synth(args, cfg) -> int:
    import shutil

    from sentirank.corpus import write_authorship, write_citations
    from sentirank.synthetic import demo_lexicon_paths, generate

    records, table = generate(args.records, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    write_citations(records, args.out / "citations.tsv")
    write_authorship(table, args.out / "authorship.tsv")
    for src in demo_lexicon_paths():
        shutil.copyfile(src, args.out / src.name)
    print(f"wrote {len(records)} records, {len(table)} articles to {args.out}")
    return 0


def cmd_build_lexicon(args, cfg) -> int:
    from sentirank.sentiment import collapse_sentiwordnet, write_lexicon

    entries = collapse_sentiwordnet(args.sentiwordnet)
    write_lexicon(entries, args.out)
    print(f"wrote {len(entries)} lexicon entries to {args.out}")
    return 0


def cmd_fetch_authors(args, cfg) -> int:
    from sentirank.fetch import DEFAULT_API, fetch_authorship

    try:
        ids = [l.strip() for l in args.ids.read_text(encoding="utf-8").splitlines() if l.strip()]
    except FileNotFoundError:
        print(f"error: file not found: {args.ids}", file=sys.stderr)
        return 2
    out = fetch_authorship(ids, args.cache, api_url=args.api_url or DEFAULT_API,
                           id_prefix=args.id_prefix, delay=args.delay)
    print(f"authorship written to {out}")
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "score": cmd_score,
    "rank": cmd_rank,
    "compare": cmd_compare,
    "report": cmd_report,
    "export-graph": cmd_export_graph,
    "status": cmd_status,
    "synth": cmd_synth,
    "build-lexicon": cmd_build_lexicon,
    "fetch-authors": cmd_fetch_authors,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _settings(args)
        return COMMANDS[args.command](args, cfg)
    except SentirankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
