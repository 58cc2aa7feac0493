"""Roll pair scores up to cited articles and to authors.

Every coauthor receives full credit for an article; sums use
``math.fsum`` so totals do not depend on record order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from sentirank.corpus import AuthorshipTable, Corpus, Pair
from sentirank.sentiment import NO_CURATION, CurationPolicy, Lexicon, Tagger, lexicon_tagger, score_pair
from sentirank.tsvio import format_real, write_tsv


@dataclass(frozen=True)
class ArticleStats:
    article_id: str
    pair_scores: Mapping[str, float] = field(default_factory=dict)  # citing id -> score

    @property
    def citing_articles(self) -> frozenset[str]:
        return frozenset(self.pair_scores)

    @property
    def citation_count(self) -> int:
        return len(self.pair_scores)

    @property
    def total_sentiment(self) -> float:
        return math.fsum(self.pair_scores.values())


@dataclass(frozen=True)
class AuthorProfile:
    author_id: str
    publications: frozenset[str]
    citing_count: int
    total_sentiment: float

    @property
    def np(self) -> int:
        return len(self.publications)

    @property
    def nc(self) -> int:
        return self.citing_count

    @property
    def snc(self) -> float:
        return self.total_sentiment


def compute_pair_scores(
    corpus: Corpus,
    lexicon: Lexicon | None,
    curation: CurationPolicy = NO_CURATION,
    tagger: Tagger = lexicon_tagger,
) -> dict[Pair, float]:
    """Score of every (citing, cited) pair, in order of first appearance."""
    return {
        pair: score_pair(recs, lexicon, curation, tagger)
        for pair, recs in corpus.pairs().items()
    }


def article_stats_from_pairs(pair_scores: Mapping[Pair, float]) -> dict[str, ArticleStats]:
    grouped: dict[str, dict[str, float]] = {}
    for (citing, cited), score in pair_scores.items():
        grouped.setdefault(cited, {})[citing] = score
    return {a: ArticleStats(a, grouped[a]) for a in sorted(grouped)}


def compute_article_stats(
    corpus: Corpus,
    lexicon: Lexicon | None,
    curation: CurationPolicy = NO_CURATION,
    tagger: Tagger = lexicon_tagger,
) -> dict[str, ArticleStats]:
    return article_stats_from_pairs(compute_pair_scores(corpus, lexicon, curation, tagger))


def covered_pairs(
    pair_scores: Mapping[Pair, float], authorship: AuthorshipTable
) -> dict[Pair, float]:
    """Pairs whose citing and cited articles both have authorship.

    Only these feed author-level metrics; the rest still count for articles.
    """
    return {
        p: s for p, s in pair_scores.items() if p[0] in authorship and p[1] in authorship
    }


def merge_article_stats(parts: Iterable[Mapping[str, ArticleStats]]) -> dict[str, ArticleStats]:
    """Combine stats computed on disjoint slices of the pair set."""
    merged: dict[str, dict[str, list[float]]] = {}
    for part in parts:
        for article, stats in part.items():
            slot = merged.setdefault(article, {})
            for citing, score in stats.pair_scores.items():
                slot.setdefault(citing, []).append(score)
    return {
        a: ArticleStats(a, {c: math.fsum(v) for c, v in merged[a].items()})
        for a in sorted(merged)
    }


def compute_author_profiles(
    article_stats: Mapping[str, ArticleStats],
    authorship: AuthorshipTable,
    visible_articles: Iterable[str] | None = None,
) -> dict[str, AuthorProfile]:
    """Per-author NP, NC and S-NC.

    Publications are the author's articles that appear anywhere in the
    corpus (``visible_articles``; defaults to the cited articles).
    """
    visible = set(article_stats) if visible_articles is None else set(visible_articles)
    profiles = {}
    for author, articles in sorted(authorship.articles_by_author().items()):
        pubs = frozenset(a for a in articles if a in visible)
        counts = [article_stats[a].citation_count for a in pubs if a in article_stats]
        sents = [article_stats[a].total_sentiment for a in sorted(pubs) if a in article_stats]
        profiles[author] = AuthorProfile(author, pubs, sum(counts), math.fsum(sents))
    return profiles


def write_article_stats(stats: Mapping[str, ArticleStats], path: str | Path) -> None:
    write_tsv(
        path,
        ("article_id", "citation_count", "total_sentiment"),
        ((a, s.citation_count, format_real(s.total_sentiment)) for a, s in sorted(stats.items())),
    )


def write_author_profiles(profiles: Mapping[str, AuthorProfile], path: str | Path) -> None:
    write_tsv(
        path,
        ("author_id", "np", "nc", "snc"),
        ((a, p.np, p.nc, format_real(p.snc)) for a, p in sorted(profiles.items())),
    )
