"""Data-root layout and the catalogue store.

Everything the catalogue owns lives under one directory:

    records/<id>.tpl              template records, one per file
    texts/<dir-slug>/<id>-<title-slug>.txt   canonical archived texts
    indexes/metadata.idx          metadata inverted index
    indexes/content/<id>.idx      per-document paragraph indexes
    authorities/*.tsv             author/publisher/time-period lists
    vocabularies/*.txt            subject/genre terms
    collections.txt               configured collection roots
    bookcases/*.json              user bookcases
    outbox.log                    key-hint outbox

Reads are served from immutable in-memory snapshots; every mutation goes
through the single writer, which stages files, keeps rollback copies and
publishes the new in-memory state only once all writes landed.  A fault
anywhere mid-write restores every touched file, so no partial artifacts
survive.  Cross-process exclusion uses a lockfile at the data root.
"""

from __future__ import annotations

import os
import threading
import time
from pathlib import Path
from typing import Callable

from .errors import LockBusyError, NotFoundError, StorageError
from .index import (
    ContentIndex,
    MetadataIndex,
    build_content_index,
    content_index_bytes,
    index_record,
    load_content_index,
    load_metadata_index,
    metadata_index_bytes,
    remove_record,
)
from .records import (
    AuthorityList,
    DEFAULT_COLLECTIONS,
    TemplateRecord,
    Vocabulary,
    archive_path_for,
    parse_template,
    render_template,
)
from .textproc import segment

DEFAULT_TIME_PERIODS = tuple(f"{c}00-{c}99" for c in range(14, 20))

Checkpoint = Callable[[str], None]


def _no_checkpoint(stage: str) -> None:
    return None


class FileLock:
    """Exclusive writer lockfile; stale only if the process died mid-write."""

    def __init__(self, path: Path, timeout: float = 10.0, poll: float = 0.05):
        self.path = path
        self.timeout = timeout
        self.poll = poll

    def acquire(self) -> None:
        deadline = time.monotonic() + self.timeout
        while True:
            try:
                fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                os.write(fd, str(os.getpid()).encode())
                os.close(fd)
                return
            except FileExistsError:
                if time.monotonic() >= deadline:
                    raise LockBusyError(
                        f"another writer holds {self.path}; remove the file if stale")
                time.sleep(self.poll)

    def release(self) -> None:
        try:
            self.path.unlink()
        except FileNotFoundError:
            pass

    def __enter__(self) -> "FileLock":
        self.acquire()
        return self

    def __exit__(self, *exc) -> None:
        self.release()


class _Staging:
    """Tracks file writes so a failed transaction can be undone."""

    def __init__(self) -> None:
        self._undo: list[tuple[Path, bytes | None]] = []

    def write(self, path: Path, data: bytes) -> None:
        prior = path.read_bytes() if path.exists() else None
        self._undo.append((path, prior))
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    def delete(self, path: Path) -> None:
        if path.exists():
            self._undo.append((path, path.read_bytes()))
            path.unlink()

    def rollback(self) -> None:
        for path, prior in reversed(self._undo):
            if prior is None:
                if path.exists():
                    path.unlink()
            else:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_bytes(prior)


class CatalogueStore:
    """Single-writer, many-reader view of one data root."""

    def __init__(self, data_root: Path | str, lock_timeout: float = 10.0):
        self.root = Path(data_root)
        self.lock_timeout = lock_timeout
        self._write_lock = threading.RLock()
        self._init_layout()
        self.authorities = self._load_authorities()
        self.vocabularies = self._load_vocabularies()
        self.collections = self._load_collections()
        self._records: dict[int, TemplateRecord] = {}
        self._content: dict[int, ContentIndex] = {}
        self._metadata = MetadataIndex()
        self._load_catalogue()

    # -- layout ------------------------------------------------------------

    def _init_layout(self) -> None:
        for sub in ("records", "texts", "indexes/content", "authorities",
                    "vocabularies", "bookcases"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    def _authority_path(self, kind: str) -> Path:
        return self.root / "authorities" / f"{kind}s.tsv"

    def _vocabulary_path(self, kind: str) -> Path:
        return self.root / "vocabularies" / f"{kind}s.txt"

    def _record_path(self, record_id: int) -> Path:
        return self.root / "records" / f"{record_id}.tpl"

    def text_path(self, record: TemplateRecord) -> Path:
        return self.root / "texts" / archive_path_for(record)

    def _content_index_path(self, record_id: int) -> Path:
        return self.root / "indexes" / "content" / f"{record_id}.idx"

    def _metadata_index_path(self) -> Path:
        return self.root / "indexes" / "metadata.idx"

    def _load_authorities(self) -> dict[str, AuthorityList]:
        out = {}
        for kind in ("author", "publisher", "time-period"):
            path = self._authority_path(kind)
            if path.exists():
                out[kind] = AuthorityList.load(path, kind)
            else:
                out[kind] = AuthorityList(kind=kind)
                if kind == "time-period":
                    for period in DEFAULT_TIME_PERIODS:
                        out[kind].add(period)
                out[kind].save(path)
        return out

    def _load_vocabularies(self) -> dict[str, Vocabulary]:
        out = {}
        for kind in ("subject", "genre"):
            path = self._vocabulary_path(kind)
            if path.exists():
                out[kind] = Vocabulary.load(path, kind)
            else:
                out[kind] = Vocabulary(kind=kind)
                out[kind].save(path)
        return out

    def _load_collections(self) -> tuple[str, ...]:
        path = self.root / "collections.txt"
        if not path.exists():
            path.write_text("\n".join(DEFAULT_COLLECTIONS) + "\n", encoding="utf-8")
            return DEFAULT_COLLECTIONS
        roots = [line for line in path.read_text(encoding="utf-8").splitlines()
                 if line and not line.startswith("#")]
        return tuple(roots) or DEFAULT_COLLECTIONS

    def _load_catalogue(self) -> None:
        rebuilt = MetadataIndex()
        for path in sorted((self.root / "records").glob("*.tpl")):
            record = parse_template(path.read_text(encoding="utf-8"))
            self._records[record.id] = record
            index_record(rebuilt, record)
        self._metadata = rebuilt
        meta_path = self._metadata_index_path()
        if meta_path.exists():
            # the record files are authoritative; the persisted index is a
            # cache usable only while it covers exactly the same records
            try:
                cached = load_metadata_index(meta_path)
                if set(cached.records) == set(self._records):
                    self._metadata = cached
            except StorageError:
                pass
        for record in self._records.values():
            idx_path = self._content_index_path(record.id)
            if idx_path.exists():
                try:
                    idx = load_content_index(idx_path)
                    if idx.doc_id == record.id:
                        self._content[record.id] = idx
                        continue
                except StorageError:
                    pass
            self._content[record.id] = build_content_index(
                segment(self.canonical_text(record.id), record.id))

    # -- read side -----------------------------------------------------------

    @property
    def records(self) -> dict[int, TemplateRecord]:
        return self._records

    @property
    def metadata_index(self) -> MetadataIndex:
        return self._metadata

    def record(self, record_id: int) -> TemplateRecord:
        try:
            return self._records[record_id]
        except KeyError:
            raise NotFoundError(f"no record {record_id}", code="unknown-record") from None

    def content_index(self, record_id: int) -> ContentIndex:
        try:
            return self._content[record_id]
        except KeyError:
            raise NotFoundError(f"no indexed text {record_id}", code="unknown-record") from None

    def canonical_text(self, record_id: int) -> str:
        path = self.text_path(self.record(record_id))
        try:
            return path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise StorageError(f"archived text missing for record {record_id}") from None

    def next_id(self) -> int:
        return max(self._records, default=0) + 1

    def find_by_url(self, url: str) -> TemplateRecord | None:
        for record in self._records.values():
            if record.url == url:
                return record
        return None

    def has_paragraph(self, doc_id: int, ordinal: int) -> bool:
        idx = self._content.get(doc_id)
        return idx is not None and 0 <= ordinal < idx.paragraph_count

    def paragraph_text(self, doc_id: int, ordinal: int) -> str:
        idx = self.content_index(doc_id)
        if not 0 <= ordinal < idx.paragraph_count:
            raise NotFoundError(
                f"document {doc_id} has no paragraph {ordinal}", code="unknown-paragraph")
        return idx.paragraphs[ordinal]

    # -- write side ----------------------------------------------------------

    def upsert(self, record: TemplateRecord, canonical_text: str,
               checkpoint: Checkpoint = _no_checkpoint) -> Path:
        """Archive text, rebuild indexes and persist the record atomically."""
        with self._write_lock, FileLock(self.root / ".writer.lock", self.lock_timeout):
            staging = _Staging()
            try:
                content_idx = build_content_index(segment(canonical_text, record.id))
                new_meta = self._metadata.copy()
                index_record(new_meta, record)

                old = self._records.get(record.id)
                text_path = self.text_path(record)
                if old is not None and self.text_path(old) != text_path:
                    staging.delete(self.text_path(old))
                staging.write(text_path, canonical_text.encode("utf-8"))
                checkpoint("archived")

                tmp_content = dict(self._content)
                tmp_content[record.id] = content_idx
                self._save_content_index(staging, content_idx)
                checkpoint("content-indexed")

                self._save_metadata_index(staging, new_meta)
                checkpoint("metadata-indexed")

                staging.write(self._record_path(record.id),
                              render_template(record).encode("utf-8"))
                checkpoint("record-persisted")
            except BaseException:
                staging.rollback()
                raise

            records = dict(self._records)
            records[record.id] = record
            self._records = records
            self._content = tmp_content
            self._metadata = new_meta
            return text_path

    def remove(self, record_id: int,
               tombstone: Callable[[int], None] | None = None) -> None:
        """Drop a record, its text and its indexes; tell bookcases to tombstone."""
        with self._write_lock, FileLock(self.root / ".writer.lock", self.lock_timeout):
            record = self.record(record_id)
            staging = _Staging()
            try:
                new_meta = self._metadata.copy()
                remove_record(new_meta, record_id)
                staging.delete(self.text_path(record))
                staging.delete(self._content_index_path(record_id))
                staging.delete(self._record_path(record_id))
                self._save_metadata_index(staging, new_meta)
            except BaseException:
                staging.rollback()
                raise
            records = dict(self._records)
            records.pop(record_id, None)
            content = dict(self._content)
            content.pop(record_id, None)
            self._records = records
            self._content = content
            self._metadata = new_meta
        if tombstone is not None:
            tombstone(record_id)

    def reindex(self) -> tuple[int, int]:
        """Rebuild every index from the archived canonical texts."""
        with self._write_lock, FileLock(self.root / ".writer.lock", self.lock_timeout):
            staging = _Staging()
            content: dict[int, ContentIndex] = {}
            meta = MetadataIndex()
            paragraphs = 0
            try:
                for record in self._records.values():
                    idx = build_content_index(
                        segment(self.canonical_text(record.id), record.id))
                    content[record.id] = idx
                    paragraphs += idx.paragraph_count
                    self._save_content_index(staging, idx)
                    index_record(meta, record)
                self._save_metadata_index(staging, meta)
            except BaseException:
                staging.rollback()
                raise
            self._content = content
            self._metadata = meta
            return len(content), paragraphs

    def _save_content_index(self, staging: _Staging, idx: ContentIndex) -> None:
        staging.write(self._content_index_path(idx.doc_id), content_index_bytes(idx))

    def _save_metadata_index(self, staging: _Staging, idx: MetadataIndex) -> None:
        staging.write(self._metadata_index_path(), metadata_index_bytes(idx))

    # -- authority / vocabulary registration ---------------------------------

    def register_authority(self, kind: str, key: str, display: str | None = None) -> None:
        with self._write_lock:
            self.authorities[kind].add(key, display)
            self.authorities[kind].save(self._authority_path(kind))

    def register_term(self, kind: str, term: str) -> None:
        with self._write_lock:
            self.vocabularies[kind].add(term)
            self.vocabularies[kind].save(self._vocabulary_path(kind))
