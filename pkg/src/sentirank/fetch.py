"""Optional adapter: fetch article authors from a scholarly-metadata HTTP API.

Responses are cached as JSON per article under ``cache_dir/papers`` and the
result is written as an authorship TSV the pipeline can ingest. Nothing
else in the package touches the network.
"""

from __future__ import annotations

import json
import logging
import re
import time
from pathlib import Path
from typing import Iterable

from sentirank.tsvio import write_tsv

logger = logging.getLogger(__name__)

DEFAULT_API = "https://api.semanticscholar.org/graph/v1/paper/{id}"


def _cache_name(article_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", article_id) + ".json"


def authors_from_payload(payload: dict) -> list[tuple[str, str]]:
    """(author_id, name) pairs; falls back to the name when no id is given."""
    out = []
    for author in payload.get("authors") or []:
        name = (author.get("name") or "").strip()
        aid = author.get("authorId") or name
        if aid:
            out.append((str(aid), name))
    return out


def fetch_authorship(
    article_ids: Iterable[str],
    cache_dir: str | Path,
    session=None,
    api_url: str = DEFAULT_API,
    id_prefix: str = "",
    delay: float = 0.0,
    timeout: float = 30.0,
) -> Path:
    """Write ``cache_dir/authorship.tsv`` for ``article_ids``.

    ``id_prefix`` is prepended to each id in the request (e.g. ``"ACL:"``).
    Articles the service cannot resolve are listed in ``missing.tsv``.
    """
    cache = Path(cache_dir)
    (cache / "papers").mkdir(parents=True, exist_ok=True)
    if session is None:
        import requests

        session = requests.Session()
    rows, missing = [], []
    for article in sorted(set(article_ids)):
        cached = cache / "papers" / _cache_name(article)
        if cached.exists():
            payload = json.loads(cached.read_text(encoding="utf-8"))
        else:
            resp = session.get(
                api_url.format(id=id_prefix + article),
                params={"fields": "authors"},
                timeout=timeout,
            )
            if resp.status_code == 404:
                payload = {"authors": []}
            else:
                resp.raise_for_status()
                payload = resp.json()
            cached.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
            if delay:
                time.sleep(delay)
        authors = authors_from_payload(payload)
        if not authors:
            missing.append(article)
        seen = set()
        for aid, name in authors:
            if aid not in seen:
                seen.add(aid)
                rows.append((article, aid, name))
    if missing:
        logger.warning("no authors found for %d articles", len(missing))
    write_tsv(cache / "missing.tsv", ("article_id",), ((m,) for m in missing))
    out = cache / "authorship.tsv"
    write_tsv(out, ("article_id", "author_id", "author_name"), rows)
    return out
