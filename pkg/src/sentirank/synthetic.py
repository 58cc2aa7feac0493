"""Synthetic citation corpus with a sentiment skew, for demos and benchmarks.

Each article gets a heavy-tailed popularity (how often it is cited) and an
independent reception bias (how favourably it is cited). Sentences are
built from the bundled demo lexicon, so the full text-scoring path runs.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from sentirank.corpus import AuthorshipTable, CitationRecord

_POSITIVE_ADJ = ["good", "effective", "novel", "robust", "accurate", "successful",
                 "excellent", "useful", "elegant", "promising", "efficient", "better", "best"]
_NEGATIVE_ADJ = ["poor", "limited", "difficult", "weak", "inaccurate", "expensive",
                 "noisy", "inconsistent", "worse", "wrong"]
_POSITIVE_NOUN = ["success", "improvement", "advantages", "accuracy", "strength"]
_NEGATIVE_NOUN = ["problems", "errors", "failure", "limitations", "drawbacks", "weakness"]
_NEUTRAL_NOUN = ["model", "method", "approach", "system", "data", "results", "corpus",
                 "features", "task", "parser", "translation", "analysis", "framework"]
_VERBS = ["propose", "use", "describe", "present", "introduce", "report", "apply"]


def demo_lexicon_paths() -> tuple[Path, Path]:
    """Paths of the bundled demo lexicon (entries, forms)."""
    base = resources.files("sentirank") / "data"
    return (
        Path(str(base / "demo_lexicon_entries.tsv")),
        Path(str(base / "demo_lexicon_forms.tsv")),
    )


def _sentence(rng: np.random.Generator, surname: str, year: int, p_positive: float,
              opinion_rate: float) -> str:
    noun = _NEUTRAL_NOUN[rng.integers(len(_NEUTRAL_NOUN))]
    other = _NEUTRAL_NOUN[rng.integers(len(_NEUTRAL_NOUN))]
    verb = _VERBS[rng.integers(len(_VERBS))]
    n_polar = rng.binomial(3, opinion_rate)
    words = []
    for _ in range(n_polar):
        positive = rng.random() < p_positive
        if rng.random() < 0.7:
            pool = _POSITIVE_ADJ if positive else _NEGATIVE_ADJ
        else:
            pool = _POSITIVE_NOUN if positive else _NEGATIVE_NOUN
        words.append(pool[rng.integers(len(pool))])
    polar = " ".join(words)
    return f"{surname} et al. ({year}) {verb} a {polar} {noun} for {other}.".replace("  ", " ")


def generate(
    n_records: int = 20000,
    seed: int = 7,
    bias_mean: float = 0.7,
    bias_sd: float = 1.0,
    citing_skew: float = 0.0,
    opinion_shape: tuple[float, float] = (0.3, 2.0),
) -> tuple[list[CitationRecord], AuthorshipTable]:
    """Citation sentences and authorship for a synthetic field.

    Roughly one article per six sentences and one author per two articles.
    """
    rng = np.random.default_rng(seed)
    n_articles = max(20, n_records // 6)
    n_authors = max(10, n_articles // 2)

    # shuffled so author id order carries no information about output
    productivity = 1.0 / rng.permutation(np.arange(1, n_authors + 1)) ** 0.8
    productivity /= productivity.sum()
    entries: dict[str, tuple[str, ...]] = {}
    names: dict[str, str] = {}
    article_ids = [f"S{i:05d}" for i in range(n_articles)]
    author_ids = [f"a{i:05d}" for i in range(n_authors)]
    for aid in author_ids:
        names[aid] = f"Author{aid[1:]}, {chr(65 + int(aid[1:]) % 26)}."
    for art in article_ids:
        k = 1 + rng.binomial(2, 0.4)
        chosen = rng.choice(n_authors, size=k, replace=False, p=productivity)
        entries[art] = tuple(author_ids[j] for j in chosen)

    popularity = rng.pareto(1.3, n_articles) + 0.05
    popularity /= popularity.sum()
    bias = rng.normal(bias_mean, bias_sd, n_articles)
    citing_weight = popularity ** citing_skew
    citing_weight /= citing_weight.sum()
    opinion = rng.beta(*opinion_shape, n_articles)
    years = rng.integers(1990, 2010, n_articles)

    records: list[CitationRecord] = []
    while len(records) < n_records:
        cited = int(rng.choice(n_articles, p=popularity))
        citing = int(rng.choice(n_articles, p=citing_weight))
        if citing == cited:
            continue
        pair_bias = bias[cited] + rng.normal(0.0, 0.6)
        p_positive = 1.0 / (1.0 + np.exp(-2.0 * pair_bias))
        surname = names[entries[article_ids[cited]][0]].split(",")[0]
        for _ in range(1 + rng.poisson(0.5)):
            text = _sentence(rng, surname, int(years[cited]), p_positive, opinion[cited])
            records.append(CitationRecord(article_ids[citing], article_ids[cited], text))
            if len(records) >= n_records:
                break
    return records, AuthorshipTable(entries, names)
