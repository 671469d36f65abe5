"""Inverted indexes over paragraph content and record metadata.

Content indexing follows the paragraph-as-record model: every blank-line
delimited paragraph of a document is an independently retrievable record
with its own postings.  Tokens are stored case-preserved; query-time
folding and stemming happen in the evaluator so one index serves every
flag combination.

Index files carry a 4-byte magic and a version byte; the format is
private and rebuildable from the archived texts at any time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import StorageError
from .records import TemplateRecord, parse_template, render_template
from .textproc import ParagraphizedText, tokenize

MAGIC = b"LCIX"
VERSION = 1

# gap between concatenated value streams so phrases never match across
# two different titles or authors
_STREAM_GAP = 2


@dataclass
class ContentIndex:
    doc_id: int
    paragraphs: tuple[str, ...]                    # paragraph texts by ordinal
    token_counts: tuple[int, ...]                  # tokens per paragraph
    postings: dict[str, dict[int, tuple[int, ...]]]  # token -> ordinal -> positions

    @property
    def paragraph_count(self) -> int:
        return len(self.paragraphs)


def build_content_index(paragraphized: ParagraphizedText) -> ContentIndex:
    postings: dict[str, dict[int, list[int]]] = {}
    counts: list[int] = []
    for para in paragraphized.paragraphs:
        tokens = tokenize(para.text, case_sensitive=True)
        counts.append(len(tokens))
        for position, token in enumerate(tokens):
            postings.setdefault(token, {}).setdefault(para.ordinal, []).append(position)
    frozen = {
        token: {ordinal: tuple(pos) for ordinal, pos in by_para.items()}
        for token, by_para in postings.items()
    }
    return ContentIndex(
        doc_id=paragraphized.doc_id,
        paragraphs=tuple(paragraphized.texts()),
        token_counts=tuple(counts),
        postings=frozen,
    )


@dataclass
class MetadataIndex:
    # field -> token -> record id -> positions within the field stream
    postings: dict[str, dict[str, dict[int, tuple[int, ...]]]] = field(default_factory=dict)
    records: dict[int, TemplateRecord] = field(default_factory=dict)

    def copy(self) -> "MetadataIndex":
        return MetadataIndex(
            postings={
                f: {t: dict(by_rec) for t, by_rec in by_tok.items()}
                for f, by_tok in self.postings.items()
            },
            records=dict(self.records),
        )


def _field_streams(record: TemplateRecord) -> dict[str, list[str]]:
    title_parts = [record.title]
    if record.subtitle:
        title_parts.append(record.subtitle)
    if record.alternate_title:
        title_parts.append(record.alternate_title)
    return {
        "title": title_parts,
        "author": list(record.authors),
        "subject": list(record.subjects),
        "genre": list(record.genres),
    }


def index_record(idx: MetadataIndex, record: TemplateRecord) -> None:
    """Add (or replace) one record's postings in place."""
    if record.id in idx.records:
        remove_record(idx, record.id)
    idx.records[record.id] = record

    streams = _field_streams(record)
    any_stream: list[str] = []
    for parts in streams.values():
        any_stream.extend(parts)
    streams["any"] = any_stream

    for field_name, parts in streams.items():
        table = idx.postings.setdefault(field_name, {})
        position = 0
        for part in parts:
            tokens = tokenize(part, case_sensitive=True)
            for token in tokens:
                by_rec = table.setdefault(token, {})
                by_rec[record.id] = by_rec.get(record.id, ()) + (position,)
                position += 1
            position += _STREAM_GAP

def remove_record(idx: MetadataIndex, record_id: int) -> None:
    idx.records.pop(record_id, None)
    for table in idx.postings.values():
        dead = []
        for token, by_rec in table.items():
            by_rec.pop(record_id, None)
            if not by_rec:
                dead.append(token)
        for token in dead:
            del table[token]


# -- persistence ---------------------------------------------------------------

def _encode(payload: dict) -> bytes:
    body = json.dumps(payload, ensure_ascii=False, sort_keys=True)
    return MAGIC + bytes([VERSION]) + b"\n" + body.encode("utf-8")


def _decode(raw: bytes, source: str) -> dict:
    if raw[:4] != MAGIC:
        raise StorageError(f"{source} is not an index file", code="bad-index-magic")
    if raw[4] != VERSION:
        raise StorageError(
            f"{source} has index version {raw[4]}, expected {VERSION}; rebuild with reindex",
            code="bad-index-version")
    return json.loads(raw[6:].decode("utf-8"))


def content_index_bytes(idx: ContentIndex) -> bytes:
    return _encode({
        "doc_id": idx.doc_id,
        "paragraphs": list(idx.paragraphs),
        "token_counts": list(idx.token_counts),
        "postings": {
            token: {str(ordinal): list(pos) for ordinal, pos in by_para.items()}
            for token, by_para in idx.postings.items()
        },
    })


def content_index_from_bytes(raw: bytes, source: str = "<bytes>") -> ContentIndex:
    data = _decode(raw, source)
    return ContentIndex(
        doc_id=data["doc_id"],
        paragraphs=tuple(data["paragraphs"]),
        token_counts=tuple(data["token_counts"]),
        postings={
            token: {int(ordinal): tuple(pos) for ordinal, pos in by_para.items()}
            for token, by_para in data["postings"].items()
        },
    )


def metadata_index_bytes(idx: MetadataIndex) -> bytes:
    return _encode({
        "records": {str(rid): render_template(rec) for rid, rec in idx.records.items()},
        "postings": {
            field_name: {
                token: {str(rid): list(pos) for rid, pos in by_rec.items()}
                for token, by_rec in table.items()
            }
            for field_name, table in idx.postings.items()
        },
    })


def metadata_index_from_bytes(raw: bytes, source: str = "<bytes>") -> MetadataIndex:
    data = _decode(raw, source)
    return MetadataIndex(
        records={int(rid): parse_template(text) for rid, text in data["records"].items()},
        postings={
            field_name: {
                token: {int(rid): tuple(pos) for rid, pos in by_rec.items()}
                for token, by_rec in table.items()
            }
            for field_name, table in data["postings"].items()
        },
    )


def save_content_index(idx: ContentIndex, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(content_index_bytes(idx))


def load_content_index(path: Path) -> ContentIndex:
    return content_index_from_bytes(path.read_bytes(), str(path))


def save_metadata_index(idx: MetadataIndex, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(metadata_index_bytes(idx))


def load_metadata_index(path: Path) -> MetadataIndex:
    return metadata_index_from_bytes(path.read_bytes(), str(path))
