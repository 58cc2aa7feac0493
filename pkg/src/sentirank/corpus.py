"""Corpus data model: citation records, authorship, aliases, self-citations.

Files are UTF-8 TSV with a header row (or JSONL for citations). Empty
strings and absent fields both mean "missing".
"""

from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from sentirank.errors import InputError

logger = logging.getLogger(__name__)

CITATION_FIELDS = ("citing_id", "cited_id", "sentence_text", "precomputed_score")
OPTIONAL_CITATION_FIELDS = ("source_tag", "tagged_text")
AUTHORSHIP_FIELDS = ("article_id", "author_id", "author_name")
ALIAS_FIELDS = ("variant", "canonical")

Pair = tuple[str, str]


@dataclass(frozen=True)
class CitationRecord:
    """One citation sentence from ``citing_id`` to ``cited_id``.

    ``tagged_text`` optionally carries pre-tagged tokens (``word/TAG``,
    whitespace separated) that bypass the built-in tagger.
    """

    citing_id: str
    cited_id: str
    sentence_text: str | None = None
    precomputed_score: float | None = None
    source_tag: str | None = None
    tagged_text: str | None = None

    def __post_init__(self):
        if not self.citing_id or not self.cited_id:
            raise InputError("citing_id and cited_id must be non-empty")
        if self.citing_id == self.cited_id:
            raise InputError(f"self-pair: {self.citing_id} cites itself")
        if self.sentence_text is None and self.precomputed_score is None:
            raise InputError(
                f"record {self.citing_id}->{self.cited_id} has neither text nor score"
            )

    @property
    def pair(self) -> Pair:
        return (self.citing_id, self.cited_id)


@dataclass(frozen=True)
class AuthorshipTable:
    entries: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    names: Mapping[str, str] = field(default_factory=dict)
    duplicates_collapsed: int = field(default=0, compare=False)

    def __post_init__(self):
        for article, authors in self.entries.items():
            if not authors:
                raise InputError(f"article {article} has no authors")
            if len(set(authors)) != len(authors):
                raise InputError(f"article {article} lists an author twice")

    def authors_of(self, article_id: str) -> tuple[str, ...] | None:
        return self.entries.get(article_id)

    def __contains__(self, article_id: object) -> bool:
        return article_id in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def name_of(self, author_id: str) -> str:
        return self.names.get(author_id, author_id)

    def articles_by_author(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for article in sorted(self.entries):
            for author in self.entries[article]:
                out.setdefault(author, []).append(article)
        return out


@dataclass(frozen=True)
class AliasMap:
    """Variant author id (or display name) -> canonical author id."""

    merges: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        merges = {v: c for v, c in self.merges.items() if v != c}
        object.__setattr__(self, "merges", merges)
        for variant, canonical in merges.items():
            if canonical in merges:
                raise InputError(
                    f"alias chain: {variant} -> {canonical} -> {merges[canonical]}"
                )

    def canonical(self, author_id: str, name: str | None = None) -> str:
        if author_id in self.merges:
            return self.merges[author_id]
        if name is not None and name in self.merges:
            return self.merges[name]
        return author_id

    def __len__(self) -> int:
        return len(self.merges)


@dataclass(frozen=True)
class Corpus:
    """A sealed snapshot of citation records after self-citation removal.

    ``article_ids`` holds every article seen before filtering, so that
    removing self-citations never shrinks an author's publication set.
    """

    records: tuple[CitationRecord, ...]
    authorship: AuthorshipTable = field(default_factory=AuthorshipTable)
    self_citation_pairs: frozenset[Pair] = frozenset()
    removed_count: int = 0
    article_ids: frozenset[str] = frozenset()

    def __len__(self) -> int:
        return len(self.records)

    def pairs(self) -> dict[Pair, list[CitationRecord]]:
        """Records grouped by (citing, cited), in order of first appearance."""
        grouped: dict[Pair, list[CitationRecord]] = {}
        for rec in self.records:
            grouped.setdefault(rec.pair, []).append(rec)
        return grouped

    def is_covered(self, pair: Pair) -> bool:
        """True when both articles of ``pair`` have authorship."""
        return pair[0] in self.authorship and pair[1] in self.authorship


def _missing(value) -> bool:
    return value is None or (isinstance(value, str) and value.strip() == "")


def _parse_score(raw, where: str) -> float | None:
    if _missing(raw):
        return None
    try:
        score = float(raw)
    except (TypeError, ValueError):
        raise InputError(f"{where}: field 'precomputed_score': not a number: {raw!r}")
    if score != score or score in (float("inf"), float("-inf")):
        raise InputError(f"{where}: field 'precomputed_score': not finite: {raw!r}")
    return score


def _record_from_fields(row: Mapping, where: str) -> CitationRecord:
    for name in ("citing_id", "cited_id"):
        if _missing(row.get(name)):
            raise InputError(f"{where}: field '{name}' is empty")
    citing = str(row["citing_id"]).strip()
    cited = str(row["cited_id"]).strip()
    if citing == cited:
        raise InputError(f"{where}: self-pair {citing} -> {cited}")
    text = row.get("sentence_text")
    text = None if _missing(text) else str(text)
    score = _parse_score(row.get("precomputed_score"), where)
    if text is None and score is None:
        raise InputError(f"{where}: record has neither sentence_text nor precomputed_score")
    tag = row.get("source_tag")
    tagged = row.get("tagged_text")
    return CitationRecord(
        citing,
        cited,
        text,
        score,
        None if _missing(tag) else str(tag),
        None if _missing(tagged) else str(tagged),
    )


def _read_tsv(path: Path) -> tuple[list[str] | None, list[tuple[int, list[str]]]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            rows = [(reader.line_num, row) for row in reader]
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8 ({exc})")
    if not rows:
        return None, []
    header = [h.strip() for h in rows[0][1]]
    body = [(n, r) for n, r in rows[1:] if any(cell.strip() for cell in r)]
    return header, body


def _require_columns(header: Sequence[str], required: Iterable[str], path: Path) -> None:
    missing = [c for c in required if c not in header]
    if missing:
        raise InputError(f"{path}:1: header lacks column(s) {', '.join(missing)}")


def load_citations(
    path: str | Path, format: str = "tsv", errors: list[str] | None = None
) -> list[CitationRecord]:
    """Load citation records from TSV or JSONL, preserving file order.

    Malformed lines raise :class:`InputError` naming the line and field,
    unless an ``errors`` list is supplied, in which case messages are
    appended to it and the line is skipped.
    """
    path = Path(path)
    if format not in ("tsv", "jsonl"):
        raise InputError(f"unknown citations format {format!r}; expected tsv or jsonl")
    records: list[CitationRecord] = []

    def handle(fields: Mapping, where: str) -> None:
        try:
            records.append(_record_from_fields(fields, where))
        except InputError as exc:
            if errors is None:
                raise
            errors.append(str(exc))

    if format == "tsv":
        header, body = _read_tsv(path)
        if header is None:
            logger.warning("%s: empty citations file", path)
            return records
        _require_columns(header, CITATION_FIELDS[:2], path)
        for lineno, row in body:
            if len(row) > len(header):
                msg = f"{path}:{lineno}: {len(row)} fields, header has {len(header)}"
                if errors is None:
                    raise InputError(msg)
                errors.append(msg)
                continue
            handle(dict(zip(header, row)), f"{path}:{lineno}")
    else:
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except FileNotFoundError:
            raise InputError(f"file not found: {path}")
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise InputError(f"{where}: expected a JSON object")
            except (json.JSONDecodeError, InputError) as exc:
                msg = str(exc) if isinstance(exc, InputError) else f"{where}: bad JSON ({exc.msg})"
                if errors is None:
                    raise InputError(msg)
                errors.append(msg)
                continue
            handle(obj, where)
    logger.info("loaded %d citation records from %s", len(records), path)
    return records


def write_citations(records: Iterable[CitationRecord], path: str | Path) -> None:
    """Write records as TSV, full-precision scores (round-trips exactly)."""
    cols = CITATION_FIELDS + OPTIONAL_CITATION_FIELDS
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(cols) + "\n")
        for r in records:
            score = "" if r.precomputed_score is None else repr(r.precomputed_score)
            cells = [r.citing_id, r.cited_id, r.sentence_text or "", score,
                     r.source_tag or "", r.tagged_text or ""]
            fh.write("\t".join(_clean(c) for c in cells) + "\n")


def _clean(cell: str) -> str:
    return cell.replace("\t", " ").replace("\r", " ").replace("\n", " ")


def load_authorship(path: str | Path) -> AuthorshipTable:
    """Load ``article_id, author_id, author_name`` rows; row order is author order."""
    path = Path(path)
    header, body = _read_tsv(path)
    if header is None or not body:
        logger.warning("%s: no authorship data", path)
        return AuthorshipTable()
    _require_columns(header, AUTHORSHIP_FIELDS[:2], path)
    entries: dict[str, list[str]] = {}
    names: dict[str, str] = {}
    duplicates = 0
    for lineno, row in body:
        fields = dict(zip(header, row))
        article = (fields.get("article_id") or "").strip()
        author = (fields.get("author_id") or "").strip()
        if not article:
            raise InputError(f"{path}:{lineno}: field 'article_id' is empty")
        if not author:
            raise InputError(f"{path}:{lineno}: article {article} row has no author")
        authors = entries.setdefault(article, [])
        if author in authors:
            duplicates += 1
            continue
        authors.append(author)
        name = (fields.get("author_name") or "").strip()
        if name:
            names.setdefault(author, name)
    if duplicates:
        logger.warning("%s: collapsed %d duplicate (article, author) rows", path, duplicates)
    return AuthorshipTable({a: tuple(v) for a, v in entries.items()}, names, duplicates)


def write_authorship(table: AuthorshipTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(AUTHORSHIP_FIELDS) + "\n")
        for article in sorted(table.entries):
            for author in table.entries[article]:
                fh.write(f"{article}\t{author}\t{_clean(table.name_of(author))}\n")


def load_aliases(path: str | Path) -> AliasMap:
    path = Path(path)
    header, body = _read_tsv(path)
    if header is None:
        return AliasMap()
    _require_columns(header, ALIAS_FIELDS, path)
    merges: dict[str, str] = {}
    for lineno, row in body:
        fields = dict(zip(header, row))
        variant = (fields.get("variant") or "").strip()
        canonical = (fields.get("canonical") or "").strip()
        if not variant or not canonical:
            raise InputError(f"{path}:{lineno}: empty variant or canonical")
        if merges.get(variant, canonical) != canonical:
            raise InputError(f"{path}:{lineno}: {variant} mapped to two canonical ids")
        merges[variant] = canonical
    return AliasMap(merges)


def apply_alias_map(table: AuthorshipTable, aliases: AliasMap) -> AuthorshipTable:
    """Replace variant authors by canonical ids, collapsing per-article duplicates."""
    if not len(aliases):
        return table
    entries: dict[str, tuple[str, ...]] = {}
    names: dict[str, str] = {}
    for article, authors in table.entries.items():
        merged: list[str] = []
        for author in authors:
            canon = aliases.canonical(author, table.names.get(author))
            if canon not in merged:
                merged.append(canon)
            names[canon] = table.names.get(canon, canon)
        entries[article] = tuple(merged)
    return AuthorshipTable(entries, names, table.duplicates_collapsed)


def detect_self_citations(
    records: Iterable[CitationRecord], authorship: AuthorshipTable
) -> set[Pair]:
    """Pairs whose citing and cited articles share at least one author.

    Pairs lacking authorship on either side cannot be judged; they are
    skipped and counted in a coverage warning.
    """
    flagged: set[Pair] = set()
    seen: set[Pair] = set()
    uncovered = 0
    for rec in records:
        pair = rec.pair
        if pair in seen:
            continue
        seen.add(pair)
        citing = authorship.authors_of(pair[0])
        cited = authorship.authors_of(pair[1])
        if citing is None or cited is None:
            uncovered += 1
            continue
        if not set(citing).isdisjoint(cited):
            flagged.add(pair)
    if uncovered:
        logger.warning(
            "self-citation check skipped %d of %d pairs lacking authorship", uncovered, len(seen)
        )
    return flagged


def self_citations_by_author(pairs: Iterable[Pair], authorship: AuthorshipTable) -> Counter:
    """Number of flagged pairs in which each author sits on both sides."""
    counts: Counter = Counter()
    for citing, cited in pairs:
        a = authorship.authors_of(citing) or ()
        b = set(authorship.authors_of(cited) or ())
        for author in a:
            if author in b:
                counts[author] += 1
    return counts


def filter_self_citations(
    records: Iterable[CitationRecord] | Corpus,
    pairs: Iterable[Pair],
    authorship: AuthorshipTable | None = None,
) -> Corpus:
    """Drop every record belonging to a flagged pair and seal the result."""
    pairs = frozenset(pairs)
    if isinstance(records, Corpus):
        prior = records
        authorship = authorship if authorship is not None else prior.authorship
        pairs = pairs | prior.self_citation_pairs
        article_ids = prior.article_ids
        removed_before = prior.removed_count
        records = prior.records
    else:
        records = tuple(records)
        article_ids = frozenset(a for r in records for a in r.pair)
        removed_before = 0
    kept = tuple(r for r in records if r.pair not in pairs)
    removed = len(records) - len(kept)
    if removed:
        logger.info("removed %d self-citation records", removed)
    if records and not kept:
        logger.warning("empty corpus after filtering")
    return Corpus(
        kept,
        authorship if authorship is not None else AuthorshipTable(),
        pairs,
        removed_before + removed,
        article_ids,
    )
