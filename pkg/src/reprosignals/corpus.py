"""Labeled-corpus data model, manifest parsing and text loading.

A manifest is a UTF-8 CSV with the header ``id,title,label,source,text_path,n_pages``.
Relative ``text_path`` values resolve against the manifest's directory. Text files
are expected to come from a layout-preserving extractor that writes a form feed at
each page break.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from pathlib import Path

MANIFEST_HEADER = ["id", "title", "label", "source", "text_path", "n_pages"]


class CorpusError(ValueError):
    """Raised for any manifest or article-text validation failure."""


class Label(IntEnum):
    IRREPRODUCIBLE = 0
    REPRODUCIBLE = 1


class Source(str, Enum):
    BROWN = "brown"
    RETRACTION_DB = "retraction_db"
    ACM_BADGED = "acm_badged"
    OTHER = "other"


@dataclass(frozen=True)
class ArticleRecord:
    id: str
    title: str
    label: Label
    source: Source
    text_path: Path
    n_pages: int | None = None


@dataclass(frozen=True)
class Corpus:
    articles: tuple[ArticleRecord, ...]
    label_counts: dict[str, int] = field(compare=False)
    source_counts: dict[str, int] = field(compare=False)

    @classmethod
    def from_records(cls, records) -> "Corpus":
        articles = tuple(sorted(records, key=lambda r: r.id))
        seen = set()
        for rec in articles:
            if rec.id in seen:
                raise CorpusError(f"duplicate id {rec.id!r}")
            seen.add(rec.id)
        labels = Counter(rec.label for rec in articles)
        sources = Counter(rec.source for rec in articles)
        return cls(
            articles=articles,
            label_counts={
                "reproducible": labels[Label.REPRODUCIBLE],
                "irreproducible": labels[Label.IRREPRODUCIBLE],
            },
            source_counts={s.value: sources[s] for s in Source},
        )

    def __len__(self) -> int:
        return len(self.articles)

    def __iter__(self):
        return iter(self.articles)


def _parse_row(lineno: int, row: dict[str, str], base: Path) -> ArticleRecord:
    def fail(fieldname, msg):
        raise CorpusError(f"manifest row {lineno}, field {fieldname!r}: {msg}")

    rec_id = (row.get("id") or "").strip()
    if not rec_id:
        fail("id", "empty id")

    label_tok = (row.get("label") or "").strip()
    if label_tok not in ("0", "1"):
        fail("label", f"unknown label token {label_tok!r} (expected 0 or 1)")

    source_tok = (row.get("source") or "").strip()
    try:
        source = Source(source_tok)
    except ValueError:
        fail("source", f"unknown source {source_tok!r}")

    path_tok = (row.get("text_path") or "").strip()
    if not path_tok:
        fail("text_path", "empty path")
    text_path = Path(path_tok)
    if not text_path.is_absolute():
        text_path = base / text_path
    if not text_path.is_file():
        fail("text_path", f"unreadable text file {str(text_path)!r}")

    pages_tok = (row.get("n_pages") or "").strip()
    n_pages = None
    if pages_tok:
        try:
            n_pages = int(pages_tok)
        except ValueError:
            fail("n_pages", f"not an integer: {pages_tok!r}")
        if n_pages <= 0:
            fail("n_pages", f"must be positive, got {n_pages}")

    return ArticleRecord(
        id=rec_id,
        title=row.get("title") or "",
        label=Label(int(label_tok)),
        source=source,
        text_path=text_path,
        n_pages=n_pages,
    )


def load_manifest(path) -> Corpus:
    """Parse and validate a manifest CSV into a :class:`Corpus` sorted by id."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CorpusError(f"cannot read manifest {str(path)!r}: {exc.strerror}") from exc
    try:
        content = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"manifest {str(path)!r} is not valid UTF-8") from exc

    reader = csv.DictReader(io.StringIO(content, newline=""))
    if reader.fieldnames != MANIFEST_HEADER:
        raise CorpusError(
            f"manifest {str(path)!r}: header must be {','.join(MANIFEST_HEADER)!r}, "
            f"got {','.join(reader.fieldnames or [])!r}"
        )

    base = path.parent
    records = []
    seen = {}
    # header is line 1
    for lineno, row in enumerate(reader, start=2):
        if None in row:
            raise CorpusError(f"manifest row {lineno}: too many fields")
        if any(v is None for v in row.values()):
            raise CorpusError(f"manifest row {lineno}: too few fields")
        rec = _parse_row(lineno, row, base)
        if rec.id in seen:
            raise CorpusError(
                f"manifest row {lineno}, field 'id': duplicate id {rec.id!r} "
                f"(first seen on row {seen[rec.id]})"
            )
        seen[rec.id] = lineno
        records.append(rec)
    return Corpus.from_records(records)


def dump_manifest(corpus: Corpus, path, relative_to=None) -> None:
    """Write ``corpus`` as a manifest; paths are made relative to ``relative_to`` when possible."""
    path = Path(path)
    base = Path(relative_to) if relative_to is not None else path.parent
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MANIFEST_HEADER)
    for rec in corpus.articles:
        try:
            text_path = rec.text_path.relative_to(base).as_posix()
        except ValueError:
            text_path = str(rec.text_path)
        writer.writerow([
            rec.id,
            rec.title,
            int(rec.label),
            rec.source.value,
            text_path,
            "" if rec.n_pages is None else rec.n_pages,
        ])
    path.write_text(buf.getvalue(), encoding="utf-8", newline="")


def read_text(record: ArticleRecord) -> str:
    """Return the article's full text exactly as stored (form feeds included).

    CRLF line endings are left untouched here; downstream segmentation treats
    ``\\r`` as whitespace.
    """
    try:
        raw = record.text_path.read_bytes()
    except OSError as exc:
        raise CorpusError(f"{record.id}: cannot read {str(record.text_path)!r}: {exc.strerror}") from exc
    if not raw:
        raise CorpusError(f"{record.id}: empty text")
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"{record.id}: invalid UTF-8 at byte {exc.start}") from exc
