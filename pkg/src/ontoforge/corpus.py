"""Corpus loading, normalization, tokenization, and year partitioning."""

from __future__ import annotations

import datetime as dt
import json
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from ontoforge.errors import CorpusError

REQUIRED_FIELDS = ("id", "date", "body")


@dataclass(frozen=True)
class Document:
    """A single news article with a publication date."""

    id: str
    date: dt.date
    title: str = ""
    body: str = ""
    source: str | None = None

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be non-empty")
        if not self.body:
            raise CorpusError(f"document {self.id!r}: body must be non-empty")


@dataclass(frozen=True)
class Corpus:
    """An immutable collection of documents with pairwise-distinct ids."""

    documents: tuple[Document, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for doc in self.documents:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id: {doc.id!r}")
            seen.add(doc.id)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)


@dataclass(frozen=True)
class Partition:
    """All documents of one corpus whose dates fall in a single year."""

    key: int
    documents: tuple[Document, ...]

    def __post_init__(self):
        for doc in self.documents:
            if doc.date.year != self.key:
                raise CorpusError(
                    f"document {doc.id!r} dated {doc.date} does not belong to partition {self.key}"
                )

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)


def _parse_date(raw: str) -> dt.date:
    try:
        return dt.date.fromisoformat(raw)
    except ValueError:
        pass
    # Full ISO timestamps are accepted; only the calendar date is kept.
    try:
        return dt.datetime.fromisoformat(raw).date()
    except ValueError:
        raise CorpusError(f"invalid ISO-8601 date: {raw!r}") from None


def load_corpus(path: str | Path, fmt: str = "jsonl") -> Corpus:
    """Load a corpus file: UTF-8, one JSON object per line.

    Each record needs "id", "date" (ISO-8601), and "body"; "title" and
    "source" are optional. Errors report the offending line number.
    """
    if fmt != "jsonl":
        raise CorpusError(f"unsupported corpus format: {fmt!r}")
    path = Path(path)
    documents: list[Document] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: malformed JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise CorpusError(f"{path}: line {lineno}: record is not an object")
            for name in REQUIRED_FIELDS:
                if name not in record or record[name] in ("", None):
                    raise CorpusError(f"{path}: line {lineno}: missing required field {name!r}")
            try:
                doc = Document(
                    id=str(record["id"]),
                    date=_parse_date(str(record["date"])),
                    title=str(record.get("title") or ""),
                    body=str(record["body"]),
                    source=record.get("source"),
                )
            except CorpusError as exc:
                raise CorpusError(f"{path}: line {lineno}: {exc}") from None
            if doc.id in seen:
                raise CorpusError(f"{path}: line {lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            documents.append(doc)
    return Corpus(documents=tuple(documents))


def partition_by_year(corpus: Corpus) -> list[Partition]:
    """Split a corpus into per-year partitions, sorted ascending by year.

    Partitions are pairwise disjoint and jointly cover the corpus; years
    with no documents yield no partition.
    """
    by_year: dict[int, list[Document]] = {}
    for doc in corpus:
        by_year.setdefault(doc.date.year, []).append(doc)
    return [Partition(key=year, documents=tuple(by_year[year])) for year in sorted(by_year)]


def _strip_edge_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Lowercase whitespace tokenization with edge punctuation stripped.

    Interior punctuation survives, so numeric tokens like "6.1" are kept
    whole; tokens that are pure punctuation are dropped.
    """
    tokens = []
    for raw in text.split():
        token = _strip_edge_punct(raw).lower()
        if token:
            tokens.append(token)
    return tokens


def document_tokens(doc: Document, include_titles: bool = True) -> list[str]:
    """Token sequence of one document, title first when included."""
    text = f"{doc.title} {doc.body}" if include_titles and doc.title else doc.body
    return tokenize(text)


def token_stream(documents: Iterable[Document], include_titles: bool = True) -> list[list[str]]:
    """Per-document token sequences for a corpus or partition."""
    return [document_tokens(doc, include_titles=include_titles) for doc in documents]
