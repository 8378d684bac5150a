"""Parsing, cleaning, filtering and statistics for article/summary corpora.

The wire format is line-delimited JSON (UTF-8, one record per line) with
keys ``id``, ``source``, ``url``, ``title``, ``article``, ``summary``.
Only ``article`` and ``summary`` are mandatory on input.
"""

from __future__ import annotations

import json
import re
import statistics
from dataclasses import dataclass
from typing import Callable, Iterable

from .text import word_tokenize

SOURCES = ("bbc", "dw", "other")

Tokenizer = Callable[[str], list]

# Lines beginning with one of these markers are treated as picture captions
# and dropped during cleaning. Extend per scrape via the cleaning API.
DEFAULT_CAPTION_MARKERS: tuple[str, ...] = (
    "تصویر:",  # تصویر:
    "تصویر کا ذریعہ",  # تصویر کا ذریعہ
    "تصویر کا کیپشن",  # تصویر کا کیپشن
    "Image:",
    "Photo:",
    "Caption:",
)

_URL_SCHEME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9+.\-]*://\S*")
_URL_WWW_RE = re.compile(r"(?<!\S)www\.\S*")
_INLINE_WS_RE = re.compile(r"[ \t ]+")
_BLANK_RUN_RE = re.compile(r"\n{2,}")


class RecordParseError(ValueError):
    """Malformed input line; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class Record:
    """One article/summary pair with provenance metadata."""

    id: str
    article: str
    summary: str
    source: str = "other"
    url: str | None = None
    title: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "url": self.url,
            "title": self.title,
            "article": self.article,
            "summary": self.summary,
        }


def parse_records(stream: Iterable[str]) -> list[Record]:
    """Parse a line-delimited record stream, in input order.

    Records missing an ``id`` get the zero-padded 0-based record index.
    Raises :class:`RecordParseError` for unparseable lines, missing
    ``article``/``summary`` fields, bad ``source`` values and duplicate ids.
    """
    records: list[Record] = []
    seen_ids: dict[str, int] = {}
    index = 0
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordParseError(lineno, f"invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise RecordParseError(lineno, "record is not an object")
        for key in ("article", "summary"):
            if key not in obj:
                raise RecordParseError(lineno, f"missing field {key!r}")
            if not isinstance(obj[key], str):
                raise RecordParseError(lineno, f"field {key!r} is not a string")
        source = obj.get("source", "other")
        if source not in SOURCES:
            raise RecordParseError(lineno, f"unknown source {source!r}")
        rec_id = obj.get("id")
        if rec_id is None:
            rec_id = f"{index:06d}"
        rec_id = str(rec_id)
        if rec_id in seen_ids:
            raise RecordParseError(lineno, f"duplicate id {rec_id!r} (first seen on line {seen_ids[rec_id]})")
        seen_ids[rec_id] = lineno
        records.append(
            Record(
                id=rec_id,
                article=obj["article"],
                summary=obj["summary"],
                source=source,
                url=obj.get("url"),
                title=obj.get("title", "") or "",
            )
        )
        index += 1
    return records


def write_records(records: Iterable[Record], fh) -> None:
    for rec in records:
        fh.write(json.dumps(rec.to_dict(), ensure_ascii=False) + "\n")


def clean_text(raw: str, caption_markers: tuple[str, ...] = DEFAULT_CAPTION_MARKERS) -> str:
    """Remove URLs and caption lines, collapse whitespace. Idempotent.

    URLs are scheme://... spans and www.-prefixed spans. A line that starts
    with a caption marker once URLs and surrounding whitespace are removed
    is dropped entirely; checking the cleaned form keeps the pass stable
    when a URL precedes the marker. Runs of blank lines collapse to a
    single blank line so paragraph boundaries survive cleaning.
    """
    out_lines: list[str] = []
    for line in raw.split("\n"):
        line = _URL_SCHEME_RE.sub("", line)
        line = _URL_WWW_RE.sub("", line)
        line = _INLINE_WS_RE.sub(" ", line).strip()
        if line and any(line.startswith(m) for m in caption_markers):
            continue
        out_lines.append(line)
    text = "\n".join(out_lines)
    text = _BLANK_RUN_RE.sub("\n\n", text)
    return text.strip()


def compression_ratio(rec: Record, tok: Tokenizer = word_tokenize) -> float:
    """Summary-to-article token ratio as a percent."""
    article_tokens = len(tok(rec.article))
    if article_tokens == 0:
        raise ValueError(f"record {rec.id!r}: article has no tokens")
    summary_tokens = len(tok(rec.summary))
    if summary_tokens == 0:
        raise ValueError(f"record {rec.id!r}: summary has no tokens")
    return 100.0 * summary_tokens / article_tokens


@dataclass
class FilterResult:
    kept: list[Record]
    removed: list[Record]


def filter_corpus(
    records: list[Record],
    max_ratio_pct: float = 50.0,
    tok: Tokenizer = word_tokenize,
) -> FilterResult:
    """Partition records: ratios strictly above the threshold are removed.

    Both partitions preserve input order.
    """
    if max_ratio_pct <= 0:
        raise ValueError("max_ratio_pct must be > 0")
    kept: list[Record] = []
    removed: list[Record] = []
    for rec in records:
        if compression_ratio(rec, tok) > max_ratio_pct:
            removed.append(rec)
        else:
            kept.append(rec)
    return FilterResult(kept, removed)


@dataclass(frozen=True)
class StatSummary:
    min: float
    max: float
    mean: float
    median: float

    def to_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "mean": self.mean, "median": self.median}


@dataclass(frozen=True)
class CorpusStats:
    count: int
    article_tokens: StatSummary
    summary_tokens: StatSummary
    compression_ratio_pct: StatSummary

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "article_tokens": self.article_tokens.to_dict(),
            "summary_tokens": self.summary_tokens.to_dict(),
            "compression_ratio_pct": self.compression_ratio_pct.to_dict(),
        }


def _summarize(values: list[float]) -> StatSummary:
    # median_low: for even counts, the lower of the two middle values.
    return StatSummary(
        min=float(min(values)),
        max=float(max(values)),
        mean=sum(values) / len(values),
        median=float(statistics.median_low(values)),
    )


def corpus_stats(records: list[Record], tok: Tokenizer = word_tokenize) -> CorpusStats:
    """Word-token statistics over articles, summaries and their ratio."""
    if not records:
        raise ValueError("cannot compute statistics of an empty corpus")
    article_counts: list[float] = []
    summary_counts: list[float] = []
    ratios: list[float] = []
    for rec in records:
        a = len(tok(rec.article))
        s = len(tok(rec.summary))
        if a == 0:
            raise ValueError(f"record {rec.id!r}: article has no tokens")
        article_counts.append(float(a))
        summary_counts.append(float(s))
        ratios.append(100.0 * s / a)
    return CorpusStats(
        count=len(records),
        article_tokens=_summarize(article_counts),
        summary_tokens=_summarize(summary_counts),
        compression_ratio_pct=_summarize(ratios),
    )
