"""Document ingestion and tokenization.

Documents arrive as plain UTF-8 text files listed in a manifest CSV with
header ``file,date,source``.  Dates are ISO ``YYYY-MM-DD``; ``source`` is
``ECB``, ``FED`` or any free label.
"""

from __future__ import annotations

import csv
import datetime as dt
import itertools
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import EmptyInputError, FormatError, IngestionError, ValidationError

logger = logging.getLogger(__name__)

MANIFEST_HEADER = ("file", "date", "source")
KNOWN_SOURCES = ("ECB", "FED")


def tokenize(text: str) -> list[str]:
    """Split ``text`` into lowercase runs of alphabetic characters.

    Digits, punctuation, whitespace and symbols separate tokens and are
    dropped.

    >>> tokenize("Good, GOOD bad!")
    ['good', 'good', 'bad']
    >>> tokenize("revised up by 0.1 percentage points")
    ['revised', 'up', 'by', 'percentage', 'points']
    """
    # lowercase first so every emitted run is alphabetic after case mapping
    return [
        "".join(run)
        for is_alpha, run in itertools.groupby(text.lower(), key=str.isalpha)
        if is_alpha
    ]


def normalize_source(label: str) -> str:
    label = label.strip()
    if not label:
        raise ValidationError("empty source label")
    if label.upper() in KNOWN_SOURCES:
        return label.upper()
    return label


@dataclass(frozen=True)
class Document:
    id: str
    source: str
    date: dt.date
    text: str
    tokens: tuple[str, ...] = field(repr=False)

    @property
    def token_count(self) -> int:
        return len(self.tokens)

    @property
    def month(self) -> tuple[int, int]:
        return (self.date.year, self.date.month)

    @classmethod
    def from_text(
        cls,
        id: str,
        source: str,
        date: dt.date | str,
        text: str,
        normalizer: Callable[[str], list[str]] | None = None,
    ) -> "Document":
        if isinstance(date, str):
            date = parse_date(date)
        tokens = (normalizer or tokenize)(text)
        return cls(id=id, source=normalize_source(source), date=date, text=text, tokens=tuple(tokens))


def parse_date(value: str) -> dt.date:
    try:
        return dt.date.fromisoformat(value.strip())
    except ValueError:
        raise ValidationError(f"unparseable date {value!r} (expected YYYY-MM-DD)") from None


@dataclass(frozen=True)
class ManifestRow:
    file: str
    date: dt.date
    source: str
    line: int


def read_manifest(path: str | PathLike) -> list[ManifestRow]:
    rows: list[ManifestRow] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path}: empty manifest") from None
        header = [h.strip().lstrip("﻿").lower() for h in header]
        if tuple(header) != MANIFEST_HEADER:
            raise FormatError(
                f"{path}: expected header {','.join(MANIFEST_HEADER)!r}, got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            file, date, source = (c.strip() for c in row)
            if file in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate manifest entry {file!r}")
            seen.add(file)
            try:
                rows.append(ManifestRow(file, parse_date(date), normalize_source(source), lineno))
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise EmptyInputError(f"{path}: manifest has no rows")
    return rows


@dataclass(frozen=True)
class CorpusSummary:
    n_documents: dict[str, int]
    mean_tokens: dict[str, float]

    def format(self) -> str:
        return ", ".join(
            f"{src}: {n} docs, mean {self.mean_tokens[src]:.1f} tokens"
            for src, n in self.n_documents.items()
        )


def summarize(docs: Iterable[Document]) -> CorpusSummary:
    counts: dict[str, int] = defaultdict(int)
    tokens: dict[str, int] = defaultdict(int)
    for d in docs:
        counts[d.source] += 1
        tokens[d.source] += d.token_count
    order = sorted(counts)
    return CorpusSummary(
        n_documents={s: counts[s] for s in order},
        mean_tokens={s: tokens[s] / counts[s] for s in order},
    )


def sort_documents(docs: Iterable[Document]) -> list[Document]:
    return sorted(docs, key=lambda d: (d.source, d.date, d.id))


def ingest_corpus(
    root: str | PathLike,
    manifest: str | PathLike,
    normalizer: Callable[[str], list[str]] | None = None,
    workers: int | None = None,
) -> list[Document]:
    """Read and tokenize every document listed in ``manifest``.

    File paths in the manifest are relative to ``root``.  The document id is
    the manifest path.  The result is sorted by ``(source, date, id)`` so it
    does not depend on filesystem or thread scheduling order.
    """
    root = Path(root)
    rows = read_manifest(manifest)

    def load(row: ManifestRow) -> Document:
        path = root / row.file
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise IngestionError(f"{manifest}:{row.line}: file not found: {row.file}") from None
        except (OSError, UnicodeDecodeError) as exc:
            raise IngestionError(f"{manifest}:{row.line}: cannot read {row.file}: {exc}") from None
        return Document.from_text(row.file, row.source, row.date, text, normalizer)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            docs = list(pool.map(load, rows))
    else:
        docs = [load(r) for r in rows]

    docs = sort_documents(docs)
    logger.info("ingested %s", summarize(docs).format())
    return docs


def write_manifest(rows: Sequence[tuple[str, str, str]], path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MANIFEST_HEADER)
        w.writerows(rows)
