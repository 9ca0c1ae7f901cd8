"""Text cleaning: markup stripping, URL extraction, emoji conversion.

The retention gate in :func:`preprocess` runs URL extraction on the raw body
first (markdown link targets would be unrecoverable after markup stripping),
then strips markup, converts emojis, and applies the minimum word count. The
word count is taken over whitespace-delimited words of the cleaned text,
before any stopword removal.
"""

from __future__ import annotations

import html
import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from urllib.parse import urlsplit, urlunsplit

from .records import CleanDoc, RawRecord, UrlMention

logger = logging.getLogger(__name__)

DELETION_PLACEHOLDERS = ("[deleted]", "[removed]")

# Markdown links/images: keep the anchor text, drop the target.
_MD_LINK_RE = re.compile(r"!?\[([^\]]*)\]\(([^)\s]+)(?:\s+\"[^\"]*\")?\)")
_BARE_URL_RE = re.compile(r"https?://[^\s<>\"\\]+", re.IGNORECASE)
_HTML_TAG_RE = re.compile(r"</?[a-zA-Z][^>]*>")
_HEADING_RE = re.compile(r"^\s{0,3}#{1,6}\s*", re.MULTILINE)
_BLOCKQUOTE_RE = re.compile(r"^\s{0,3}>\s?", re.MULTILINE)
_CODE_FENCE_RE = re.compile(r"```+|~~~+")
_EMPHASIS_RE = re.compile(r"(\*\*|__|\*|~~)")
_WORD_UNDERSCORE_RE = re.compile(r"\b_([^_]+)_\b")
_HRULE_RE = re.compile(r"^\s{0,3}(-{3,}|\*{3,})\s*$", re.MULTILINE)
_WHITESPACE_RE = re.compile(r"\s+")


def strip_markup(text: str) -> str:
    """Remove HTML tags and markdown markers; links keep their anchor text.

    Total over arbitrary strings; output has single-space separated words.
    """
    if not text:
        return ""
    text = html.unescape(text)
    text = _MD_LINK_RE.sub(lambda m: m.group(1), text)
    text = _HTML_TAG_RE.sub(" ", text)
    text = _CODE_FENCE_RE.sub(" ", text)
    text = _HEADING_RE.sub("", text)
    text = _BLOCKQUOTE_RE.sub("", text)
    text = _HRULE_RE.sub(" ", text)
    text = _EMPHASIS_RE.sub("", text)
    text = _WORD_UNDERSCORE_RE.sub(lambda m: m.group(1), text)
    text = text.replace("`", "")
    return _WHITESPACE_RE.sub(" ", text).strip()


def normalize_url(raw: str) -> str:
    """Lowercase scheme and host, strip the fragment, keep path and query."""
    raw = raw.rstrip(".,;:!?)]}>'\"")
    parts = urlsplit(raw)
    return urlunsplit((
        parts.scheme.lower(),
        parts.netloc.lower(),
        parts.path,
        parts.query,
        "",
    ))


def url_domain(url: str) -> str:
    """Host of the URL, lowercased, with a leading ``www.`` stripped."""
    host = urlsplit(url).hostname or ""
    return host[4:] if host.startswith("www.") else host


def extract_urls(text: str, source_id: str = "") -> tuple[str, list[UrlMention]]:
    """Capture every absolute URL (bare or markdown target) and remove it.

    Mentions keep their order of appearance and duplicates; uniqueness is a
    corpus-level aggregation concern. Markdown links collapse to their anchor
    text so the remaining string composes cleanly with :func:`strip_markup`.
    """
    mentions: list[tuple[int, UrlMention]] = []

    def _mention(position: int, raw: str) -> None:
        url = normalize_url(raw)
        mentions.append((position, UrlMention(url, url_domain(url), source_id)))

    def _md_repl(match: re.Match) -> str:
        target = match.group(2)
        if target.lower().startswith(("http://", "https://")):
            _mention(match.start(), target)
            return match.group(1)
        return match.group(0)

    text = _MD_LINK_RE.sub(_md_repl, text)

    def _bare_repl(match: re.Match) -> str:
        _mention(match.start(), match.group(0))
        return " "

    text = _BARE_URL_RE.sub(_bare_repl, text)
    ordered = [m for _, m in sorted(mentions, key=lambda pair: pair[0])]
    return _WHITESPACE_RE.sub(" ", text).strip(), ordered


# Codepoint ranges treated as emoji when absent from the lookup table.
_EMOJI_RANGES = (
    (0x1F300, 0x1FAFF),
    (0x1F000, 0x1F2FF),
    (0x2600, 0x27BF),
    (0x2B00, 0x2BFF),
    (0x1F1E6, 0x1F1FF),
    (0xFE00, 0xFE0F),
    (0x200D, 0x200D),
    (0x20E3, 0x20E3),
)


def _is_emoji_codepoint(char: str) -> bool:
    point = ord(char)
    return any(lo <= point <= hi for lo, hi in _EMOJI_RANGES)


@dataclass
class EmojiTable:
    """Lookup from emoji codepoint sequences to textual short names.

    Unknown emoji map to the generic token ``emoji`` so the emotional-signal
    slot survives without an unbounded table. Zero-width joiners and
    variation selectors not consumed by a table entry are dropped.
    """

    names: dict[str, str]
    unknown_token: str = "emoji"

    def __post_init__(self):
        self._max_len = max((len(k) for k in self.names), default=1)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "EmojiTable":
        """Parse ``codepoints<TAB>shortname`` lines; codepoints are
        space-separated hex values."""
        names = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            codepoints, _, short_name = line.partition("\t")
            if not short_name:
                raise ValueError(f"emoji table line missing shortname: {line!r}")
            sequence = "".join(chr(int(cp, 16)) for cp in codepoints.split())
            names[sequence] = short_name.strip()
        return cls(names)

    @classmethod
    def bundled(cls) -> "EmojiTable":
        ref = resources.files("crisis_topics.ingest") / "data" / "emoji_table.tsv"
        with resources.as_file(ref) as path:
            return cls.from_tsv(path)


def convert_emojis(text: str, table: EmojiTable) -> str:
    """Replace each emoji with its space-delimited short name token."""
    if not text:
        return ""
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        matched = False
        # Longest-first so multi-codepoint sequences win over their prefixes.
        for length in range(min(table._max_len, n - i), 0, -1):
            candidate = text[i:i + length]
            if candidate in table.names:
                out.append(f" {table.names[candidate]} ")
                i += length
                matched = True
                break
        if matched:
            continue
        char = text[i]
        if _is_emoji_codepoint(char):
            if char in ("‍", "️", "︎", "⃣"):
                pass  # formatting codepoints carry no signal on their own
            else:
                out.append(f" {table.unknown_token} ")
        else:
            out.append(char)
        i += 1
    return _WHITESPACE_RE.sub(" ", "".join(out)).strip()


@dataclass(frozen=True)
class Rejection:
    """A record dropped by :func:`preprocess`, with the reason."""

    id: str
    kind: str
    reason: str  # too_short | deleted | empty


def preprocess(
    record: RawRecord,
    table: EmojiTable,
    min_words: int = 10,
) -> CleanDoc | Rejection:
    """Clean one record, returning a :class:`CleanDoc` when retained.

    Posts contribute their title ahead of the body. Deletion placeholders
    count as deleted regardless of the record flag.
    """
    body = record.body or ""
    if record.deleted or body.strip().lower() in DELETION_PLACEHOLDERS:
        return Rejection(record.id, record.kind, "deleted")

    raw = body
    if record.kind == "post" and record.title:
        raw = f"{record.title}\n{body}"

    text, mentions = extract_urls(raw, source_id=record.id)
    text = strip_markup(text)
    text = convert_emojis(text, table)

    words = tuple(text.split())
    if not words:
        return Rejection(record.id, record.kind, "empty")
    if len(words) < min_words:
        return Rejection(record.id, record.kind, "too_short")

    return CleanDoc(
        id=record.id,
        kind=record.kind,
        text=text,
        tokens=words,
        token_count=len(words),
        urls=tuple(mentions),
        subreddit=record.subreddit,
        created_utc=record.created_utc,
        link_id=record.link_id,
    )
