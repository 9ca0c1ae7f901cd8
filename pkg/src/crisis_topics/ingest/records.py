"""Record types for raw and cleaned corpus entries, plus JSONL loading.

A corpus file is JSONL with one record per line. Field names match the
attributes of :class:`RawRecord`; unknown fields are ignored so archives with
extra platform metadata load unchanged.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ..errors import CorpusFormatError
from ..ioutil import canonical_json

logger = logging.getLogger(__name__)

KINDS = ("post", "comment")


@dataclass(frozen=True)
class RawRecord:
    """One post or comment as archived, before any cleaning."""

    id: str
    kind: str
    subreddit: str
    author_hash: str
    created_utc: int
    body: str
    score: int = 0
    deleted: bool = False
    parent_id: str | None = None
    link_id: str | None = None
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CorpusFormatError(f"unknown record kind {self.kind!r}")


@dataclass(frozen=True)
class UrlMention:
    """A normalized URL occurrence tied back to its source record."""

    url: str
    domain: str
    source_id: str


@dataclass(frozen=True)
class CleanDoc:
    """A retained record after markup stripping, emoji conversion, and URL
    extraction. ``tokens`` are the whitespace words of ``text``; the
    stopword-filtered modeling tokens are produced separately by
    :func:`crisis_topics.ingest.vocab.tokenize`."""

    id: str
    kind: str
    text: str
    tokens: tuple[str, ...]
    token_count: int
    urls: tuple[UrlMention, ...]
    subreddit: str
    created_utc: int
    link_id: str | None = None


@dataclass
class CorpusLoad:
    """Result of :func:`load_corpus`: records in file order plus counters."""

    records: list[RawRecord]
    counts: dict[str, int] = field(default_factory=dict)
    skipped: int = 0

    def by_kind(self, kind: str) -> list[RawRecord]:
        return [r for r in self.records if r.kind == kind]


_REQUIRED_FIELDS = ("id", "kind", "subreddit", "author_hash", "created_utc", "body")


def _record_from_obj(obj: dict, line_number: int) -> RawRecord:
    missing = [name for name in _REQUIRED_FIELDS if name not in obj]
    if missing:
        raise CorpusFormatError(
            f"line {line_number}: missing fields {missing}", line_number
        )
    kind = obj["kind"]
    if kind not in KINDS:
        raise CorpusFormatError(
            f"line {line_number}: unknown kind {kind!r}", line_number
        )
    if kind == "comment" and not obj.get("link_id"):
        raise CorpusFormatError(
            f"line {line_number}: comment without link_id", line_number
        )
    return RawRecord(
        id=str(obj["id"]),
        kind=kind,
        subreddit=str(obj["subreddit"]),
        author_hash=str(obj["author_hash"]),
        created_utc=int(obj["created_utc"]),
        body=str(obj["body"]),
        score=int(obj.get("score", 0)),
        deleted=bool(obj.get("deleted", False)),
        parent_id=obj.get("parent_id"),
        link_id=obj.get("link_id"),
        title=obj.get("title"),
    )


def load_corpus(
    path: str | Path,
    format: str = "jsonl",
    lenient: bool = False,
    window: tuple[int, int] | None = None,
) -> CorpusLoad:
    """Load archived records from a JSONL file, preserving file order.

    Malformed lines raise :class:`CorpusFormatError` naming the line number;
    with ``lenient=True`` they are skipped and counted instead. ``window``
    optionally keeps only records whose ``created_utc`` falls inside the
    closed epoch-second interval.
    """
    if format != "jsonl":
        raise CorpusFormatError(f"unsupported corpus format {format!r}")
    path = Path(path)
    if not path.is_file():
        raise CorpusFormatError(f"corpus file not found: {path}")

    records: list[RawRecord] = []
    skipped = 0
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise CorpusFormatError(
                        f"line {line_number}: record is not an object", line_number
                    )
                record = _record_from_obj(obj, line_number)
                if record.id in seen_ids:
                    raise CorpusFormatError(
                        f"line {line_number}: duplicate id {record.id!r}", line_number
                    )
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                if lenient:
                    logger.warning("skipping malformed line %d: %s", line_number, exc)
                    skipped += 1
                    continue
                raise CorpusFormatError(
                    f"line {line_number}: {exc}", line_number
                ) from exc
            except CorpusFormatError:
                if lenient:
                    logger.warning("skipping malformed line %d", line_number)
                    skipped += 1
                    continue
                raise
            if window is not None and not (window[0] <= record.created_utc <= window[1]):
                continue
            seen_ids.add(record.id)
            records.append(record)

    counts = {kind: 0 for kind in KINDS}
    for record in records:
        counts[record.kind] += 1
    logger.info(
        "loaded %d posts and %d comments from %s (skipped %d)",
        counts["post"], counts["comment"], path, skipped,
    )
    return CorpusLoad(records=records, counts=counts, skipped=skipped)


def write_clean_docs(docs: Iterable[CleanDoc], path: str | Path) -> None:
    """Write cleaned docs as JSONL with a stable field order."""
    lines = []
    for doc in docs:
        lines.append(json.dumps({
            "id": doc.id,
            "kind": doc.kind,
            "text": doc.text,
            "tokens": list(doc.tokens),
            "token_count": doc.token_count,
            "urls": [
                {"url": u.url, "domain": u.domain, "source_id": u.source_id}
                for u in doc.urls
            ],
            "subreddit": doc.subreddit,
            "created_utc": doc.created_utc,
            "link_id": doc.link_id,
        }, ensure_ascii=False, sort_keys=True))
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_clean_docs(path: str | Path) -> list[CleanDoc]:
    docs = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            docs.append(CleanDoc(
                id=obj["id"],
                kind=obj["kind"],
                text=obj["text"],
                tokens=tuple(obj["tokens"]),
                token_count=obj["token_count"],
                urls=tuple(
                    UrlMention(u["url"], u["domain"], u["source_id"])
                    for u in obj["urls"]
                ),
                subreddit=obj["subreddit"],
                created_utc=obj["created_utc"],
                link_id=obj.get("link_id"),
            ))
    return docs


def corpus_content_hash(docs: Iterable[CleanDoc]) -> str:
    """Stable hash over doc ids and texts, used to key embedding caches."""
    import hashlib

    digest = hashlib.sha256()
    for doc in docs:
        digest.update(doc.id.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(doc.text.encode("utf-8"))
        digest.update(b"\x01")
    return digest.hexdigest()
