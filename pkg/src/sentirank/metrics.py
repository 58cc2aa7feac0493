"""Author ranking metrics and their sentiment-aware counterparts.

PageRank with signed weights: each node's out-weights are normalized by
the sum of their absolute values, signs are kept in the transition term,
and the uniform ``(1 - d) / N`` injection is unchanged. A node whose
absolute out-weight is zero spreads its mass uniformly over all nodes.
Because every column of the transition operator has absolute sum at most
one, the update is a contraction for ``d < 1``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from sentirank.aggregation import ArticleStats, AuthorProfile
from sentirank.corpus import AuthorshipTable, Pair
from sentirank.errors import AnalysisError, InputError
from sentirank.tsvio import format_real, write_tsv

logger = logging.getLogger(__name__)

DEFAULT_DAMPING = 0.55
DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 200

AUTHOR_METRICS = ("nc", "snc", "aif", "s_aif", "h", "sh", "pagerank", "s_pagerank")
ARTICLE_METRICS = ("article_nc", "article_snc")
METRICS = AUTHOR_METRICS + ARTICLE_METRICS
METRIC_ALIASES = {"h_index": "h", "sh_index": "sh", "s-aif": "s_aif", "s-pagerank": "s_pagerank"}

# frequency metric -> its sentiment-aware counterpart
METRIC_PAIRS = (
    ("article_nc", "article_snc"),
    ("nc", "snc"),
    ("aif", "s_aif"),
    ("h", "sh"),
    ("pagerank", "s_pagerank"),
)

METRIC_LABELS = {
    "article_nc": "Article citations",
    "article_snc": "Article sentiment",
    "nc": "Citing articles",
    "snc": "Sentiment score",
    "aif": "AIF",
    "s_aif": "S-AIF",
    "h": "H-index",
    "sh": "S_h-index",
    "pagerank": "PageRank",
    "s_pagerank": "S-PageRank",
}


def canonical_metric(name: str) -> str:
    key = name.strip().lower()
    key = METRIC_ALIASES.get(key, key)
    if key not in METRICS:
        raise InputError(f"unknown metric {name!r}; valid: {', '.join(METRICS)}")
    return key


def aif(profile: AuthorProfile) -> float:
    if profile.np == 0:
        raise AnalysisError(f"undefined AIF for {profile.author_id}: no publications")
    return profile.nc / profile.np


def s_aif(profile: AuthorProfile) -> float:
    if profile.np == 0:
        raise AnalysisError(f"undefined S-AIF for {profile.author_id}: no publications")
    return profile.snc / profile.np


def h_index(citation_counts: Iterable[int]) -> int:
    """Largest h such that h publications have at least h citations each."""
    ordered = sorted(citation_counts, reverse=True)
    h = 0
    for index, c in enumerate(ordered, start=1):
        if c >= index:
            h = index
        else:
            break
    return h


def sh_index(sentiment_scores: Iterable[float]) -> int:
    """Largest s such that the top-s publications by sentiment each score >= s."""
    ordered = sorted(sentiment_scores, reverse=True)
    s = 0
    for index, v in enumerate(ordered, start=1):
        if v >= index:
            s = index
        else:
            break
    return s


@dataclass(frozen=True)
class EdgeWeight:
    count: int
    sentiment: float


@dataclass(frozen=True)
class AuthorNetwork:
    nodes: frozenset[str]
    edges: Mapping[tuple[str, str], EdgeWeight] = field(default_factory=dict)

    def __post_init__(self):
        for (u, v), w in self.edges.items():
            if u == v:
                raise InputError(f"self-loop on {u}")
            if w.count < 1:
                raise InputError(f"edge {u}->{v} has count {w.count}")
            if u not in self.nodes or v not in self.nodes:
                raise InputError(f"edge {u}->{v} touches an unknown node")


def build_author_network(
    pair_scores: Mapping[Pair, float],
    authorship: AuthorshipTable,
    extra_nodes: Iterable[str] = (),
) -> AuthorNetwork:
    """Directed citing-author -> cited-author graph.

    Every (citing, cited) pair adds 1 to the count and the pair score to
    the sentiment of each edge from a citing author to a cited author.
    """
    counts: dict[tuple[str, str], int] = {}
    sentiments: dict[tuple[str, str], list[float]] = {}
    nodes = set(extra_nodes)
    skipped = loops = 0
    for (citing, cited), score in pair_scores.items():
        a = authorship.authors_of(citing)
        b = authorship.authors_of(cited)
        if a is None or b is None:
            skipped += 1
            continue
        nodes.update(a)
        nodes.update(b)
        for u in a:
            for v in b:
                if u == v:
                    loops += 1
                    continue
                counts[(u, v)] = counts.get((u, v), 0) + 1
                sentiments.setdefault((u, v), []).append(score)
    if skipped:
        logger.warning("author network skipped %d pairs lacking authorship", skipped)
    if loops:
        logger.warning("author network dropped %d self-loop contributions", loops)
    edges = {
        e: EdgeWeight(counts[e], math.fsum(sentiments[e])) for e in sorted(counts)
    }
    return AuthorNetwork(frozenset(nodes), edges)


@dataclass(frozen=True)
class PageRankResult:
    scores: dict[str, float]
    iterations: int
    converged: bool
    damping: float
    weight_source: str
    residual: float


def pagerank(
    network: AuthorNetwork,
    weight_source: str = "count",
    damping: float = DEFAULT_DAMPING,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> PageRankResult:
    """Power iteration, stopping when the L1 change drops below ``tolerance``."""
    if not 0.0 < damping < 1.0:
        raise InputError(f"damping must lie in (0, 1), got {damping}")
    if weight_source not in ("count", "sentiment"):
        raise InputError(f"weight_source must be 'count' or 'sentiment', got {weight_source!r}")
    if not network.nodes:
        raise AnalysisError("PageRank of an empty network")
    names = sorted(network.nodes)
    index = {n: i for i, n in enumerate(names)}
    n = len(names)
    edges = list(network.edges.items())
    src = np.array([index[u] for (u, _), _ in edges], dtype=np.intp)
    dst = np.array([index[v] for (_, v), _ in edges], dtype=np.intp)
    if weight_source == "count":
        w = np.array([e.count for _, e in edges], dtype=float)
    else:
        w = np.array([e.sentiment for _, e in edges], dtype=float)
    out_abs = np.bincount(src, weights=np.abs(w), minlength=n)
    dangling = out_abs == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        trans = np.where(out_abs[src] > 0.0, w / out_abs[src], 0.0)

    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    converged = False
    residual = float("inf")
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        flow = np.bincount(dst, weights=trans * x[src], minlength=n)
        x_new = teleport + damping * (flow + x[dangling].sum() / n)
        residual = float(np.abs(x_new - x).sum())
        x = x_new
        if residual < tolerance:
            converged = True
            break
    if not converged:
        logger.warning(
            "PageRank did not converge in %d iterations (residual %.3g)", max_iterations, residual
        )
    return PageRankResult(
        {name: float(x[i]) for i, name in enumerate(names)},
        iterations,
        converged,
        damping,
        weight_source,
        residual,
    )


@dataclass(frozen=True)
class MetricScores:
    metric: str
    values: dict[str, float]
    params: dict[str, object] = field(default_factory=dict)


def author_article_values(
    profile: AuthorProfile, article_stats: Mapping[str, ArticleStats]
) -> tuple[list[int], list[float]]:
    """Citation counts and sentiment totals of each publication (0 if uncited)."""
    counts, sents = [], []
    for a in sorted(profile.publications):
        s = article_stats.get(a)
        counts.append(s.citation_count if s else 0)
        sents.append(s.total_sentiment if s else 0.0)
    return counts, sents


def compute_metric(
    metric: str,
    *,
    profiles: Mapping[str, AuthorProfile] | None = None,
    author_article_stats: Mapping[str, ArticleStats] | None = None,
    article_stats: Mapping[str, ArticleStats] | None = None,
    network: AuthorNetwork | None = None,
    damping: float = DEFAULT_DAMPING,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> MetricScores:
    """Score every ranked entity under one metric.

    Author metrics cover authors with at least one publication; article
    metrics cover every cited article.
    """
    metric = canonical_metric(metric)
    if metric in ARTICLE_METRICS:
        stats = article_stats or {}
        if metric == "article_nc":
            return MetricScores(metric, {a: float(s.citation_count) for a, s in stats.items()})
        return MetricScores(metric, {a: s.total_sentiment for a, s in stats.items()})

    authors = {a: p for a, p in (profiles or {}).items() if p.np > 0}
    if metric == "nc":
        return MetricScores(metric, {a: float(p.nc) for a, p in authors.items()})
    if metric == "snc":
        return MetricScores(metric, {a: p.snc for a, p in authors.items()})
    if metric == "aif":
        return MetricScores(metric, {a: aif(p) for a, p in authors.items()})
    if metric == "s_aif":
        return MetricScores(metric, {a: s_aif(p) for a, p in authors.items()})
    if metric in ("h", "sh"):
        stats = author_article_stats or {}
        values = {}
        for a, p in authors.items():
            counts, sents = author_article_values(p, stats)
            values[a] = float(h_index(counts) if metric == "h" else sh_index(sents))
        return MetricScores(metric, values)
    # pagerank / s_pagerank
    if network is None or not network.nodes:
        return MetricScores(metric, {}, {"damping": damping})
    result = pagerank(
        network,
        "count" if metric == "pagerank" else "sentiment",
        damping,
        tolerance,
        max_iterations,
    )
    params = {
        "damping": damping,
        "tolerance": tolerance,
        "max_iterations": max_iterations,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    return MetricScores(metric, result.scores, params)


def write_scores(scores: Mapping[str, float], path: str | Path, id_column: str = "author_id") -> None:
    write_tsv(path, (id_column, "score"), ((k, format_real(scores[k])) for k in sorted(scores)))


def write_edge_list(network: AuthorNetwork, path: str | Path) -> None:
    write_tsv(
        path,
        ("citing_author", "cited_author", "count", "sentiment"),
        ((u, v, w.count, format_real(w.sentiment)) for (u, v), w in sorted(network.edges.items())),
    )


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def network_to_dot(network: AuthorNetwork, names: Mapping[str, str] | None = None) -> str:
    """DOT digraph; edges labelled ``count(sentiment)``."""
    names = names or {}
    lines = ["digraph authors {"]
    for node in sorted(network.nodes):
        label = names.get(node, node)
        lines.append(f"  {_dot_id(node)} [label={_dot_id(label)}];")
    for (u, v), w in sorted(network.edges.items()):
        label = f"{w.count}({format_real(w.sentiment)})"
        lines.append(f"  {_dot_id(u)} -> {_dot_id(v)} [label={_dot_id(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

