"""Markdown report, comparison table and figures for a ranked workspace."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

from sentirank import plotting
from sentirank.corpus import load_authorship
from sentirank.errors import AnalysisError
from sentirank.metrics import ARTICLE_METRICS, METRIC_LABELS, METRIC_PAIRS
from sentirank.pipeline import ranked_metrics
from sentirank.ranking import ComparisonReport, compare_scores, ranks_from_scores, write_comparisons
from sentirank.tsvio import format_real, read_scores
from sentirank.workspace import Workspace


def _cell(x: float) -> str:
    return format_real(x, 4) if x != int(x) or abs(x) >= 1e6 else str(int(x))


def _rank(r: float) -> str:
    return str(int(r)) if r == int(r) else f"{r:.1f}"


def pair_table(
    scores_a: Mapping[str, float],
    scores_b: Mapping[str, float],
    metric_a: str,
    metric_b: str,
    names: Mapping[str, str],
    top: int,
    tie_policy: str = "competition_min",
) -> list[str]:
    """Top-N by the first metric, then the second metric's remaining top-N."""
    shared = set(scores_a) & set(scores_b)
    la = ranks_from_scores({e: scores_a[e] for e in shared}, tie_policy)
    lb = ranks_from_scores({e: scores_b[e] for e in shared}, tie_policy)
    ra, rb = la.rank_of(), lb.rank_of()
    label_a, label_b = METRIC_LABELS[metric_a], METRIC_LABELS[metric_b]
    entity = "Article" if metric_a in ARTICLE_METRICS else "Author"
    lines = [
        f"| {entity} | {label_a} | {label_b} | Rank by {label_a} | Rank by {label_b} |",
        "|---|---:|---:|---:|---:|",
    ]

    def row(e: str) -> str:
        return (
            f"| {names.get(e, e)} | {_cell(scores_a[e])} | {_cell(scores_b[e])} "
            f"| {_rank(ra[e])} | {_rank(rb[e])} |"
        )

    head = [e for e in la.ids if ra[e] <= top]
    lines += [row(e) for e in head]
    rest = [e for e in lb.ids if rb[e] <= top and e not in set(head)]
    if rest:
        lines.append(f"| *Remaining in top {top} by {label_b}* | | | | |")
        lines += [row(e) for e in rest]
    return lines


def single_table(scores: Mapping[str, float], metric: str, names: Mapping[str, str], top: int,
                 tie_policy: str = "competition_min") -> list[str]:
    ranked = ranks_from_scores(scores, tie_policy)
    label = METRIC_LABELS[metric]
    lines = [f"| Entity | {label} | Rank |", "|---|---:|---:|"]
    lines += [
        f"| {names.get(e, e)} | {_cell(s)} | {_rank(r)} |" for e, s, r in ranked.entries if r <= top
    ]
    return lines


def comparison_lines(reports: Sequence[ComparisonReport]) -> list[str]:
    lines = ["| Metrics | n | Kendall tau | p-value | RBD |", "|---|---:|---:|---:|---:|"]
    for r in reports:
        lines.append(
            f"| {METRIC_LABELS[r.metric_a]} & {METRIC_LABELS[r.metric_b]} | {r.n} "
            f"| {r.tau:.3f} | {r.p_value:.3g} | {r.rbd:.3f} |"
        )
    return lines


def run_report(
    ws: Workspace,
    top: int = 20,
    rbd_p: float = 0.9,
    depth: int | None = None,
    tie_policy: str = "competition_min",
    figures: bool = True,
) -> Path:
    metrics = ranked_metrics(ws)
    scores = {m: read_scores(ws.path(f"{m}.tsv")) for m in metrics}
    names = dict(load_authorship(ws.path("authorship.tsv")).names)

    reports: list[ComparisonReport] = []
    paired: set[str] = set()
    sections: list[str] = []
    figure_files: list[str] = []
    for a, b in METRIC_PAIRS:
        if a not in scores or b not in scores:
            continue
        paired.update((a, b))
        try:
            rep = compare_scores(scores[a], scores[b], a, b, rbd_p, depth)
        except AnalysisError as exc:
            sections += [f"## {METRIC_LABELS[a]} vs {METRIC_LABELS[b]}", "", f"Not comparable: {exc}", ""]
            continue
        reports.append(rep)
        sections += [f"## {METRIC_LABELS[a]} vs {METRIC_LABELS[b]} (top {top})", ""]
        sections += pair_table(scores[a], scores[b], a, b, names, top, tie_policy)
        sections.append("")
        if figures:
            shared = sorted(set(scores[a]) & set(scores[b]))
            ra = ranks_from_scores({e: scores[a][e] for e in shared}, "fractional").rank_of()
            rb = ranks_from_scores({e: scores[b][e] for e in shared}, "fractional").rank_of()
            rel = f"figures/{a}_vs_{b}.png"
            plotting.rank_scatter(
                [ra[e] for e in shared], [rb[e] for e in shared],
                METRIC_LABELS[a], METRIC_LABELS[b], ws.path(rel),
            )
            figure_files.append(rel)
            sections += [f"![{METRIC_LABELS[a]} vs {METRIC_LABELS[b]}]({rel})", ""]
    for m in metrics:
        if m not in paired:
            sections += [f"## {METRIC_LABELS[m]} (top {top})", ""]
            sections += single_table(scores[m], m, names, top, tie_policy)
            sections.append("")

    out = ["# Author ranking report", ""]
    cfg = ws.manifest.get("config", {})
    damping = cfg.get("damping")
    settings = [f"RBD persistence p = {rbd_p}", f"depth = {depth or 'full list'}", f"ties: {tie_policy}"]
    if damping is not None:
        settings.insert(0, f"PageRank damping = {damping}")
    out += ["Settings: " + "; ".join(settings) + ".", ""]
    if reports:
        out += ["## Sentiment-aware metrics against their frequency counterparts", ""]
        out += comparison_lines(reports)
        out.append("")
        write_comparisons(reports, ws.path("comparisons.tsv"))
        if figures:
            rel = "figures/comparison.png"
            plotting.comparison_bars(
                [f"{METRIC_LABELS[r.metric_a]} / {METRIC_LABELS[r.metric_b]}" for r in reports],
                [r.tau for r in reports],
                [r.rbd for r in reports],
                ws.path(rel),
            )
            figure_files.append(rel)
            out += [f"![Comparison summary]({rel})", ""]
    out += sections
    path = ws.path("report.md")
    path.write_text("\n".join(out).rstrip("\n") + "\n", encoding="utf-8")

    outputs = ["report.md"] + (["comparisons.tsv"] if reports else []) + figure_files
    inputs = [f"{m}.tsv" for m in metrics] + ["authorship.tsv"]
    ws.record_stage("report", inputs, outputs, {"top": top, "rbd_p": rbd_p, "depth": depth})
    ws.save()
    return path
