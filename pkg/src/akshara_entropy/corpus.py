"""Corpus ingestion and round-robin partitioning of articles into books.

The article at within-volume position ``m`` goes to book ``m mod n_books``, so
every book samples the whole alphabetical range of every volume.

Manifest format, one article per line::

    <volume-label>\\t<ordinal>\\t<path>

Relative paths resolve against the manifest's directory.  Blank lines and
lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .letterstats import FrequencyTable
from .segmenter import Letter, iter_letters, normalize

N_BOOKS = 20


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Article:
    ordinal: int
    text: str
    source_id: str = ""


@dataclass
class Book:
    index: int
    letters: list[Letter] = field(default_factory=list)
    counts: Counter = field(default_factory=Counter)
    sources: list[str] = field(default_factory=list)

    @property
    def total_letters(self) -> int:
        return len(self.letters)

    def extend(self, letters: Sequence[Letter], source_id: str = "") -> None:
        self.letters.extend(letters)
        self.counts.update(letters)
        self.sources.append(source_id)


@dataclass(frozen=True)
class ManifestEntry:
    volume: str
    ordinal: int
    path: Path


def read_manifest(path: str | os.PathLike) -> list[ManifestEntry]:
    path = Path(path)
    base = path.parent
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ManifestError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
            volume, ordinal, rel = parts
            try:
                m = int(ordinal)
            except ValueError:
                raise ManifestError(f"line {lineno}: ordinal {ordinal!r} is not an integer") from None
            if m < 0:
                raise ManifestError(f"line {lineno}: negative ordinal {m}")
            entries.append(ManifestEntry(volume, m, base / rel))
    return entries


def load_articles(entries: Iterable[ManifestEntry]) -> list[Article]:
    articles = []
    for e in entries:
        try:
            text = e.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ManifestError(f"cannot read article {e.path}: {exc.strerror}") from exc
        articles.append(Article(e.ordinal, text, f"{e.volume}:{e.ordinal}"))
    return articles


def _segment_letters(args: tuple[str, bool]) -> list[Letter]:
    text, nfc = args
    return list(iter_letters(normalize(text) if nfc else text))


def partition(
    articles: Sequence[Article],
    n_books: int = N_BOOKS,
    *,
    nfc: bool = False,
    workers: int = 1,
) -> list[Book]:
    """Assign each article to book ``ordinal % n_books``, keeping ingestion order."""
    if n_books < 1:
        raise ValueError("n_books must be at least 1")
    books = [Book(t) for t in range(n_books)]
    jobs = [(a.text, nfc) for a in articles]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            streams = list(pool.map(_segment_letters, jobs, chunksize=16))
    else:
        streams = [_segment_letters(j) for j in jobs]
    for a, letters in zip(articles, streams):
        books[a.ordinal % n_books].extend(letters, a.source_id)
    return books


def count_letters(book: Book) -> FrequencyTable:
    return FrequencyTable.from_counts(book.counts)


def split_books(
    books: Sequence[Book], frequency: Sequence[int] | None = None
) -> tuple[list[Book], list[Book]]:
    """Frequency books and entropy books; default is the first half vs the rest."""
    if frequency is None:
        frequency = range(len(books) // 2 or 1)
    chosen = set(frequency)
    unknown = chosen - {b.index for b in books}
    if unknown:
        raise ValueError(f"no such books: {sorted(unknown)}")
    freq = [b for b in books if b.index in chosen]
    rest = [b for b in books if b.index not in chosen]
    return freq, rest
