"""Workspace stages: ingest -> score -> rank -> report, plus graph export.

Each ``run_*`` function reads its upstream files from the workspace,
writes its own outputs and records them in the manifest.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from sentirank.aggregation import (
    ArticleStats,
    AuthorProfile,
    article_stats_from_pairs,
    compute_author_profiles,
    compute_pair_scores,
    covered_pairs,
    write_article_stats,
    write_author_profiles,
)
from sentirank.corpus import (
    AliasMap,
    AuthorshipTable,
    Corpus,
    Pair,
    apply_alias_map,
    detect_self_citations,
    filter_self_citations,
    load_aliases,
    load_authorship,
    load_citations,
    self_citations_by_author,
    write_authorship,
    write_citations,
)
from sentirank.errors import InputError
from sentirank.metrics import (
    ARTICLE_METRICS,
    METRICS,
    AuthorNetwork,
    build_author_network,
    canonical_metric,
    compute_metric,
    network_to_dot,
    write_edge_list,
    write_scores,
)
from sentirank.ranking import ranks_from_scores, write_ranks
from sentirank.sentiment import NO_CURATION, build_curation, load_lexicon
from sentirank.tsvio import read_tsv, write_tsv
from sentirank.workspace import Workspace

logger = logging.getLogger(__name__)

CORPUS_FILES = ("corpus.tsv", "authorship.tsv", "articles.tsv")


@dataclass
class IngestSummary:
    loaded: int
    rejected: int
    kept: int
    removed_self: int
    self_pairs: int

    def __str__(self) -> str:
        return (
            f"loaded {self.loaded} records ({self.rejected} rejected at parse); "
            f"removed {self.removed_self} records in {self.self_pairs} self-citation pairs; "
            f"kept {self.kept}"
        )


def build_corpus(
    records, authorship: AuthorshipTable, aliases: AliasMap | None = None
) -> Corpus:
    """Alias -> detect -> filter, in that order."""
    if aliases is not None:
        authorship = apply_alias_map(authorship, aliases)
    pairs = detect_self_citations(records, authorship)
    return filter_self_citations(records, pairs, authorship)


def run_ingest(
    ws: Workspace,
    citations: str | Path,
    authorship: str | Path,
    aliases: str | Path | None = None,
    fmt: str = "tsv",
    skip_bad_lines: bool = False,
) -> IngestSummary:
    errors: list[str] | None = [] if skip_bad_lines else None
    records = load_citations(citations, fmt, errors)
    table = load_authorship(authorship)
    alias_map = load_aliases(aliases) if aliases else None
    corpus = build_corpus(records, table, alias_map)
    if records and not corpus.records:
        logger.warning("empty corpus after filtering")

    ws.root.mkdir(parents=True, exist_ok=True)
    write_citations(corpus.records, ws.path("corpus.tsv"))
    write_authorship(corpus.authorship, ws.path("authorship.tsv"))
    write_tsv(ws.path("articles.tsv"), ("article_id",), ((a,) for a in sorted(corpus.article_ids)))
    removed_by_pair: dict[Pair, int] = {}
    for r in records:
        if r.pair in corpus.self_citation_pairs:
            removed_by_pair[r.pair] = removed_by_pair.get(r.pair, 0) + 1
    write_tsv(
        ws.path("self_citations.tsv"),
        ("citing_id", "cited_id", "records_removed"),
        ((c, d, n) for (c, d), n in sorted(removed_by_pair.items())),
    )
    by_author = self_citations_by_author(corpus.self_citation_pairs, corpus.authorship)
    write_tsv(
        ws.path("self_citation_authors.tsv"),
        ("author_id", "pairs"),
        sorted(by_author.items(), key=lambda kv: (-kv[1], kv[0])),
    )
    if errors:
        write_tsv(ws.path("rejected_lines.tsv"), ("error",), ((e,) for e in errors))
    external = {"citations": citations, "authorship": authorship}
    if aliases:
        external["aliases"] = aliases
    outputs = CORPUS_FILES + ("self_citations.tsv", "self_citation_authors.tsv")
    ws.record_stage("ingest", [], outputs, {"format": fmt}, external)
    ws.save()
    return IngestSummary(
        len(records) + len(errors or ()),
        len(errors or ()),
        len(corpus.records),
        corpus.removed_count,
        len(corpus.self_citation_pairs),
    )


def load_workspace_corpus(ws: Workspace) -> Corpus:
    ws.require("ingest")
    records = load_citations(ws.path("corpus.tsv"))
    table = load_authorship(ws.path("authorship.tsv"))
    articles = {row["article_id"] for row in read_tsv(ws.path("articles.tsv"), ("article_id",))}
    return Corpus(tuple(records), table, frozenset(), 0, frozenset(articles))


def run_score(
    ws: Workspace,
    lexicon_entries: str | Path | None = None,
    lexicon_forms: str | Path | None = None,
    curate_df: float | None = None,
) -> dict[Pair, float]:
    corpus = load_workspace_corpus(ws)
    lexicon = None
    if lexicon_entries is not None:
        lexicon = load_lexicon(lexicon_entries, lexicon_forms)
        if lexicon.rejected:
            write_tsv(ws.path("lexicon_rejected.tsv"), ("problem",), ((r,) for r in lexicon.rejected))
    elif any(r.precomputed_score is None for r in corpus.records):
        raise InputError("corpus has unscored sentences; pass --lexicon-entries")
    curation = build_curation(corpus.records, lexicon, curate_df) if lexicon else NO_CURATION
    pair_scores = compute_pair_scores(corpus, lexicon, curation)
    pairs = corpus.pairs()
    write_tsv(
        ws.path("pair_scores.tsv"),
        ("citing_id", "cited_id", "sentences", "score"),
        ((c, d, len(pairs[(c, d)]), repr(s)) for (c, d), s in pair_scores.items()),
    )
    article_stats = article_stats_from_pairs(pair_scores)
    write_article_stats(article_stats, ws.path("article_stats.tsv"))
    _, profiles = author_level(pair_scores, corpus.authorship, corpus.article_ids)
    write_author_profiles(profiles, ws.path("author_profiles.tsv"))
    if curation.removed:
        write_tsv(ws.path("curated_lemmas.tsv"), ("lemma",), ((x,) for x in sorted(curation.removed)))
    external = {}
    if lexicon_entries is not None:
        external["lexicon_entries"] = lexicon_entries
    if lexicon_forms is not None:
        external["lexicon_forms"] = lexicon_forms
    ws.record_stage(
        "score",
        CORPUS_FILES,
        ("pair_scores.tsv", "article_stats.tsv", "author_profiles.tsv"),
        {"curate_df": curate_df},
        external,
    )
    ws.save()
    return pair_scores


def author_level(
    pair_scores: Mapping[Pair, float],
    authorship: AuthorshipTable,
    visible_articles,
) -> tuple[dict[str, ArticleStats], dict[str, AuthorProfile]]:
    """Article stats over pairs with full authorship, and author profiles."""
    stats = article_stats_from_pairs(covered_pairs(pair_scores, authorship))
    return stats, compute_author_profiles(stats, authorship, visible_articles)


def load_pair_scores(ws: Workspace, corpus: Corpus, need_sentiment: bool) -> dict[Pair, float]:
    if ws.has_stage("score"):
        ws.require("score")
        rows = read_tsv(ws.path("pair_scores.tsv"), ("citing_id", "cited_id", "score"))
        return {(r["citing_id"], r["cited_id"]): float(r["score"]) for r in rows}
    if need_sentiment:
        raise InputError("sentiment metrics need the score stage; run `score` first")
    return {pair: 0.0 for pair in corpus.pairs()}


@dataclass
class MetricInputs:
    article_stats: dict[str, ArticleStats]
    author_article_stats: dict[str, ArticleStats]
    profiles: dict[str, AuthorProfile]
    network: AuthorNetwork


def metric_inputs(pair_scores: Mapping[Pair, float], corpus: Corpus) -> MetricInputs:
    author_stats, profiles = author_level(pair_scores, corpus.authorship, corpus.article_ids)
    authors = [a for a, p in profiles.items() if p.np > 0]
    network = build_author_network(covered_pairs(pair_scores, corpus.authorship), corpus.authorship, authors)
    return MetricInputs(article_stats_from_pairs(pair_scores), author_stats, profiles, network)


def run_rank(
    ws: Workspace,
    metrics: Sequence[str],
    damping: float = 0.55,
    tie_policy: str = "competition_min",
    tolerance: float = 1e-10,
    max_iterations: int = 200,
) -> dict[str, dict[str, float]]:
    names = list(METRICS) if "all" in metrics else [canonical_metric(m) for m in metrics]
    needs_sentiment = any(m in ("snc", "s_aif", "sh", "s_pagerank", "article_snc") for m in names)
    corpus = load_workspace_corpus(ws)
    pair_scores = load_pair_scores(ws, corpus, needs_sentiment)
    inputs = metric_inputs(pair_scores, corpus)
    upstream = list(CORPUS_FILES) + (["pair_scores.tsv"] if ws.has_stage("score") else [])
    results = {}
    for name in names:
        scores = compute_metric(
            name,
            profiles=inputs.profiles,
            author_article_stats=inputs.author_article_stats,
            article_stats=inputs.article_stats,
            network=inputs.network,
            damping=damping,
            tolerance=tolerance,
            max_iterations=max_iterations,
        )
        id_col = "article_id" if name in ARTICLE_METRICS else "author_id"
        write_scores(scores.values, ws.path(f"{name}.tsv"), id_col)
        write_ranks(ranks_from_scores(scores.values, tie_policy), ws.path(f"{name}.ranks.tsv"), id_col)
        params = {"tie_policy": tie_policy}
        if name in ("pagerank", "s_pagerank"):
            params.update(damping=damping, tolerance=tolerance, max_iterations=max_iterations)
            if scores.params.get("converged") is False:
                logger.warning("%s did not converge; results flagged in manifest", name)
            params["converged"] = scores.params.get("converged", True)
        ws.record_stage(f"rank:{name}", upstream, (f"{name}.tsv", f"{name}.ranks.tsv"), params)
        results[name] = scores.values
    ws.save()
    return results


def run_export_graph(ws: Workspace) -> AuthorNetwork:
    corpus = load_workspace_corpus(ws)
    pair_scores = load_pair_scores(ws, corpus, need_sentiment=False)
    network = metric_inputs(pair_scores, corpus).network
    write_edge_list(network, ws.path("author_edges.tsv"))
    ws.path("author_network.dot").write_text(
        network_to_dot(network, corpus.authorship.names), encoding="utf-8"
    )
    upstream = list(CORPUS_FILES) + (["pair_scores.tsv"] if ws.has_stage("score") else [])
    ws.record_stage("export-graph", upstream, ("author_edges.tsv", "author_network.dot"))
    ws.save()
    return network


def ranked_metrics(ws: Workspace) -> list[str]:
    """Metrics with a fresh rank stage, in canonical order."""
    present = []
    for name in METRICS:
        stage = f"rank:{name}"
        if ws.has_stage(stage):
            ws.require(stage)
            present.append(name)
    if not present:
        raise InputError("nothing to report: no metrics have been ranked")
    return present

