"""Lexicon-based scoring of citation sentences.

A sentence goes through tokenize -> POS filter -> lemmatize -> curate, and
each surviving lemma contributes ``pos_score - neg_score`` (neutrality is
weighted 0). Lemmas missing from the lexicon contribute nothing.
"""

from __future__ import annotations

import csv
import logging
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from sentirank.corpus import CitationRecord
from sentirank.errors import InputError

logger = logging.getLogger(__name__)

NOUN, ADJECTIVE, ADVERB, OTHER = "noun", "adjective", "adverb", "other"
SENTIMENT_POS = (ADJECTIVE, ADVERB, NOUN)  # also the tie-break preference order

_POS_ALIASES = {
    "noun": NOUN, "n": NOUN,
    "adjective": ADJECTIVE, "adj": ADJECTIVE, "a": ADJECTIVE, "s": ADJECTIVE,
    "adverb": ADVERB, "adv": ADVERB, "r": ADVERB,
    "other": OTHER, "v": OTHER, "verb": OTHER,
}

SUM_TOLERANCE = 1e-6

_CITATION_MARKER = re.compile(r"\[[\d\s,;–-]+\]|\([^()]*\b\d{4}[a-z]?\)")
_WORD = re.compile(r"[^\W\d_]+")


def normalize_pos(tag: str) -> str:
    """Map a POS label (our names, WordNet letters or Penn tags) to our set."""
    t = tag.strip()
    low = t.lower()
    if low in _POS_ALIASES:
        return _POS_ALIASES[low]
    up = t.upper()
    if up.startswith("NN"):
        return NOUN
    if up.startswith("JJ"):
        return ADJECTIVE
    if up.startswith("RB"):
        return ADVERB
    return OTHER


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    pos: str
    pos_score: float
    neg_score: float
    neu_score: float

    def __post_init__(self):
        for name in ("pos_score", "neg_score", "neu_score"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InputError(f"{self.lemma}/{self.pos}: {name}={v} outside [0, 1]")
        total = self.pos_score + self.neg_score + self.neu_score
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"{self.lemma}/{self.pos}: scores sum to {total}, not 1")

    @property
    def polarity(self) -> float:
        return self.pos_score - self.neg_score


@dataclass(frozen=True)
class Lexicon:
    entries: Mapping[tuple[str, str], LexiconEntry]
    forms: Mapping[tuple[str, str], str] = field(default_factory=dict)
    rejected: tuple[str, ...] = field(default=(), compare=False)

    @property
    def identity_fallback_only(self) -> bool:
        return not self.forms

    def lookup(self, lemma: str, pos: str) -> LexiconEntry | None:
        return self.entries.get((lemma, pos))

    def known(self, surface: str, pos: str) -> bool:
        return (surface, pos) in self.forms or (surface, pos) in self.entries

    def lemmatize(self, surface: str, pos: str) -> str:
        return self.forms.get((surface, pos), surface)

    def swapped(self) -> "Lexicon":
        """Copy with positivity and negativity exchanged on every entry."""
        entries = {
            k: LexiconEntry(e.lemma, e.pos, e.neg_score, e.pos_score, e.neu_score)
            for k, e in self.entries.items()
        }
        return Lexicon(entries, self.forms)


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    lemma: str


@dataclass(frozen=True)
class TokenizedSentence:
    tokens: tuple[Token, ...] = ()

    @property
    def retained_count(self) -> int:
        return len(self.tokens)

    @property
    def lemmas(self) -> tuple[str, ...]:
        return tuple(t.lemma for t in self.tokens)


@dataclass(frozen=True)
class CurationPolicy:
    """Lemmas dropped before scoring; ``threshold`` is kept for provenance."""

    removed: frozenset[str] = frozenset()
    threshold: float | None = None


NO_CURATION = CurationPolicy()

Tagger = Callable[[Sequence[str], Lexicon], Sequence[str]]


def lexicon_tagger(words: Sequence[str], lexicon: Lexicon) -> list[str]:
    """POS from lexicon membership, preferring adjective > adverb > noun."""
    tags = []
    for w in words:
        for pos in SENTIMENT_POS:
            if lexicon.known(w, pos):
                tags.append(pos)
                break
        else:
            tags.append(OTHER)
    return tags


def tokenize(sentence: str) -> list[str]:
    """Lowercased alphabetic tokens of length >= 2, citation markers removed."""
    text = _CITATION_MARKER.sub(" ", sentence)
    return [w for w in (m.lower() for m in _WORD.findall(text)) if len(w) >= 2]


def _parse_tagged(tagged_text: str) -> tuple[list[str], list[str]]:
    words, tags = [], []
    for item in tagged_text.split():
        surface, sep, tag = item.rpartition("/")
        if not sep:
            surface, tag = item, OTHER
        for w in tokenize(surface):
            words.append(w)
            tags.append(normalize_pos(tag))
    return words, tags


def preprocess(
    sentence: str,
    lexicon: Lexicon,
    curation: CurationPolicy = NO_CURATION,
    tagger: Tagger = lexicon_tagger,
    tagged_text: str | None = None,
) -> TokenizedSentence:
    if tagged_text is not None:
        words, tags = _parse_tagged(tagged_text)
    else:
        words = tokenize(sentence)
        tags = tagger(words, lexicon)
    tokens = []
    for word, pos in zip(words, tags):
        if pos not in SENTIMENT_POS:
            continue
        lemma = lexicon.lemmatize(word, pos)
        if lemma in curation.removed:
            continue
        tokens.append(Token(word, pos, lemma))
    return TokenizedSentence(tuple(tokens))


def curate_frequent_lemmas(
    sentences: Iterable[TokenizedSentence | Iterable[str]], threshold: float
) -> set[str]:
    """Lemmas whose document frequency across ``sentences`` is >= ``threshold``."""
    if not 0.0 < threshold <= 1.0:
        raise InputError(f"curation threshold must be in (0, 1], got {threshold}")
    df: Counter = Counter()
    n = 0
    for s in sentences:
        lemmas = s.lemmas if isinstance(s, TokenizedSentence) else s
        df.update(set(lemmas))
        n += 1
    if n == 0:
        raise InputError("curation needs at least one sentence")
    return {lemma for lemma, c in df.items() if c / n >= threshold}


def build_curation(
    records: Iterable[CitationRecord],
    lexicon: Lexicon,
    threshold: float | None,
    tagger: Tagger = lexicon_tagger,
) -> CurationPolicy:
    """Curation policy computed globally over every text-bearing record."""
    if threshold is None:
        return NO_CURATION
    sentences = [
        preprocess(r.sentence_text or "", lexicon, NO_CURATION, tagger, r.tagged_text)
        for r in records
        if r.precomputed_score is None
    ]
    if not sentences:
        return CurationPolicy(frozenset(), threshold)
    removed = curate_frequent_lemmas(sentences, threshold)
    logger.info("curation at df>=%g removes %d lemmas", threshold, len(removed))
    return CurationPolicy(frozenset(removed), threshold)


def score_sentence(tok: TokenizedSentence, lexicon: Lexicon) -> float:
    values = []
    for t in tok.tokens:
        entry = lexicon.lookup(t.lemma, t.pos)
        if entry is not None:
            values.append(entry.pos_score - entry.neg_score)
    return math.fsum(values)


def score_record(
    record: CitationRecord,
    lexicon: Lexicon | None,
    curation: CurationPolicy = NO_CURATION,
    tagger: Tagger = lexicon_tagger,
) -> float:
    """Precomputed score if present, otherwise the lexicon score of the text."""
    if record.precomputed_score is not None:
        return record.precomputed_score
    if lexicon is None:
        raise InputError(
            f"record {record.citing_id}->{record.cited_id} needs a lexicon to be scored"
        )
    tok = preprocess(record.sentence_text or "", lexicon, curation, tagger, record.tagged_text)
    return score_sentence(tok, lexicon)


def score_pair(
    records: Iterable[CitationRecord],
    lexicon: Lexicon | None,
    curation: CurationPolicy = NO_CURATION,
    tagger: Tagger = lexicon_tagger,
) -> float:
    """Sum of sentence scores over all citation sentences of one pair."""
    records = list(records)
    if len({r.pair for r in records}) > 1:
        raise InputError("score_pair got records from more than one (citing, cited) pair")
    return math.fsum(score_record(r, lexicon, curation, tagger) for r in records)


def _rows(path: Path, first_col: str) -> list[tuple[int, list[str]]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            rows = [(reader.line_num, r) for r in reader if any(c.strip() for c in r)]
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    if rows and rows[0][1] and rows[0][1][0].strip().lower() == first_col:
        rows = rows[1:]
    return rows


def load_lexicon(entries_path: str | Path, forms_path: str | Path | None = None) -> Lexicon:
    """Load and validate a collapsed lexicon plus an optional forms table.

    Rows whose scores violate the unit-sum constraint (beyond 1e-6) or
    fall outside [0, 1] are rejected and listed in ``Lexicon.rejected``.
    Small rounding drift within tolerance is renormalized away.
    """
    entries_path = Path(entries_path)
    entries: dict[tuple[str, str], LexiconEntry] = {}
    rejected: list[str] = []
    for lineno, row in _rows(entries_path, "lemma"):
        where = f"{entries_path}:{lineno}"
        if len(row) < 5:
            rejected.append(f"{where}: expected 5 fields, got {len(row)}")
            continue
        lemma, pos = row[0].strip().lower(), normalize_pos(row[1])
        try:
            p, n, z = (float(x) for x in row[2:5])
        except ValueError:
            rejected.append(f"{where}: non-numeric score")
            continue
        total = p + n + z
        if abs(total - 1.0) > SUM_TOLERANCE:
            rejected.append(f"{where}: {lemma}/{pos} scores sum to {total:g}")
            continue
        if min(p, n, z) < 0.0 or max(p, n, z) > 1.0:
            rejected.append(f"{where}: {lemma}/{pos} score outside [0, 1]")
            continue
        p, n = p / total, n / total
        entries[(lemma, pos)] = LexiconEntry(lemma, pos, p, n, max(0.0, 1.0 - p - n))
    if rejected:
        logger.warning("lexicon: rejected %d rows", len(rejected))
    if not entries:
        raise InputError(f"{entries_path}: no valid lexicon entries")
    forms: dict[tuple[str, str], str] = {}
    if forms_path is not None:
        forms_path = Path(forms_path)
        for lineno, row in _rows(forms_path, "surface"):
            if len(row) < 3:
                raise InputError(f"{forms_path}:{lineno}: expected 3 fields, got {len(row)}")
            forms[(row[0].strip().lower(), normalize_pos(row[1]))] = row[2].strip().lower()
    return Lexicon(entries, forms, tuple(rejected))


def write_lexicon(entries: Iterable[LexiconEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("lemma\tpos\tpos_score\tneg_score\tneu_score\n")
        for e in sorted(entries, key=lambda e: (e.lemma, e.pos)):
            fh.write(f"{e.lemma}\t{e.pos}\t{e.pos_score!r}\t{e.neg_score!r}\t{e.neu_score!r}\n")


def collapse_sentiwordnet(path: str | Path) -> list[LexiconEntry]:
    """Collapse a SentiWordNet 3.0 dump to one triple per (lemma, POS).

    Each sense contributes its (pos, neg, 1 - pos - neg) triple; the
    triples are averaged over senses and renormalized to sum to 1. Verbs
    are dropped since they never survive the POS filter.
    """
    sums: dict[tuple[str, str], list[float]] = defaultdict(lambda: [0.0, 0.0, 0.0, 0])
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.startswith("#") or not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) < 5 or not cols[0].strip():
                continue
            pos = normalize_pos(cols[0])
            if pos not in SENTIMENT_POS:
                continue
            try:
                p, n = float(cols[2]), float(cols[3])
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-numeric score")
            for term in cols[4].split():
                lemma = term.rsplit("#", 1)[0].lower()
                acc = sums[(lemma, pos)]
                acc[0] += p
                acc[1] += n
                acc[2] += 1.0 - p - n
                acc[3] += 1
    out = []
    for (lemma, pos), (p, n, z, k) in sums.items():
        p, n, z = p / k, n / k, z / k
        total = p + n + z
        p, n = p / total, n / total
        out.append(LexiconEntry(lemma, pos, p, n, max(0.0, 1.0 - p - n)))
    return out
