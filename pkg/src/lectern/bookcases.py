"""User-owned bookcases: keyed collections of book links and bookmarks.

A bookcase is a named, key-protected container of ordered bookshelves;
shelves hold links to catalogued books and bookmarks (saved content-search
hits).  Bookcases, shelves and items can carry sanitized HTML annotations.
Publishing freezes a bookcase behind an opaque id so anyone can read it
and nobody can change it until the owner unpublishes.

Keys are stored only as salted scrypt hashes.  Unlock tokens live in
memory and expire; several may be outstanding for one bookcase, and
locking the bookcase revokes them all.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import threading
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .errors import (
    AnnotationTooLarge,
    AuthError,
    NameTakenError,
    NotFoundError,
    ReadOnlyError,
    TokenError,
)
from .records import slugify
from .sanitize import sanitize_html

EXCERPT_LENGTH = 70
MAX_ANNOTATION_BYTES = 64 * 1024
TOMBSTONE_NOTE = "source removed"

# scrypt cost parameters; configurable so tests can run with light settings
DEFAULT_KEY_PARAMS = {"n": 2 ** 14, "r": 8, "p": 1}


@dataclass
class ShelfItem:
    item_id: str
    kind: str  # book | bookmark
    doc_id: int
    ordinal: int | None = None
    query: str | None = None
    excerpt: str | None = None
    annotation: str = ""
    tombstoned: bool = False


@dataclass
class Bookshelf:
    shelf_id: str
    label: str
    annotation: str = ""
    items: list[ShelfItem] = field(default_factory=list)


@dataclass
class Bookcase:
    name: str
    key_hash: dict
    hint: str
    hint_contact: str
    annotation: str = ""
    shelves: list[Bookshelf] = field(default_factory=list)
    published: bool = False
    published_id: str | None = None
    counter: int = 0  # feeds shelf/item id generation


def _hash_key(key: str, params: dict, salt: bytes | None = None) -> dict:
    salt = salt if salt is not None else os.urandom(16)
    digest = hashlib.scrypt(key.encode("utf-8"), salt=salt, dklen=32, **params)
    return {"algo": "scrypt", "salt": salt.hex(), "hash": digest.hex(), **params}


def _verify_key(key: str, stored: dict) -> bool:
    params = {k: stored[k] for k in ("n", "r", "p")}
    digest = hashlib.scrypt(
        key.encode("utf-8"), salt=bytes.fromhex(stored["salt"]), dklen=32, **params)
    return secrets.compare_digest(digest.hex(), stored["hash"])


class BookcaseStore:
    """Persistence plus the full lifecycle of bookcases.

    paragraph_resolver(doc_id, ordinal) must return the paragraph's text
    (ordinal None checks only that the document exists, returning "").
    """

    def __init__(self, directory: Path | str, outbox_path: Path | str,
                 paragraph_resolver: Callable[[int, int | None], str],
                 token_ttl_seconds: float = 24 * 3600.0,
                 key_params: dict | None = None,
                 clock: Callable[[], float] = time.time):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.outbox_path = Path(outbox_path)
        self.resolve_paragraph = paragraph_resolver
        self.token_ttl = token_ttl_seconds
        self.key_params = dict(key_params or DEFAULT_KEY_PARAMS)
        self.clock = clock
        self._lock = threading.RLock()
        self._tokens: dict[str, tuple[str, float]] = {}  # token -> (name, expiry)
        self._cases: dict[str, Bookcase] = {}
        self._load()

    # -- persistence --------------------------------------------------------

    def _path(self, name: str) -> Path:
        digest = hashlib.sha1(name.encode("utf-8")).hexdigest()[:8]
        return self.directory / f"{slugify(name) or 'case'}-{digest}.json"

    def _load(self) -> None:
        for path in sorted(self.directory.glob("*.json")):
            data = json.loads(path.read_text(encoding="utf-8"))
            shelves = [
                Bookshelf(
                    shelf_id=s["shelf_id"], label=s["label"],
                    annotation=s.get("annotation", ""),
                    items=[ShelfItem(**item) for item in s.get("items", [])],
                )
                for s in data.get("shelves", [])
            ]
            case = Bookcase(
                name=data["name"], key_hash=data["key_hash"], hint=data["hint"],
                hint_contact=data["hint_contact"],
                annotation=data.get("annotation", ""), shelves=shelves,
                published=data.get("published", False),
                published_id=data.get("published_id"),
                counter=data.get("counter", 0),
            )
            self._cases[case.name] = case

    def _save(self, case: Bookcase) -> None:
        path = self._path(case.name)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(asdict(case), ensure_ascii=False, indent=1),
                       encoding="utf-8")
        os.replace(tmp, path)

    # -- lifecycle ------------------------------------------------------------

    def create(self, name: str, key: str, hint: str = "", hint_contact: str = "") -> Bookcase:
        if not name or not name.strip():
            raise ValueError("bookcase name must be nonempty")
        if not key:
            raise AuthError("bookcase key must be nonempty", code="empty-key")
        with self._lock:
            if name in self._cases:
                raise NameTakenError(f"bookcase name {name!r} is taken")
            case = Bookcase(
                name=name, key_hash=_hash_key(key, self.key_params),
                hint=hint, hint_contact=hint_contact)
            self._cases[name] = case
            self._save(case)
            return case

    def unlock(self, name: str, key: str) -> str:
        with self._lock:
            case = self._cases.get(name)
            if case is None or not _verify_key(key, case.key_hash):
                raise AuthError("unknown bookcase name or wrong key")
            token = secrets.token_urlsafe(24)
            self._tokens[token] = (name, self.clock() + self.token_ttl)
            return token

    def lock(self, token: str) -> None:
        """Lock the bookcase: every outstanding token for it is revoked."""
        with self._lock:
            name = self._authenticate(token)
            self._tokens = {
                t: (n, exp) for t, (n, exp) in self._tokens.items() if n != name
            }

    def token_expiry(self, token: str) -> float:
        with self._lock:
            self._authenticate(token)
            return self._tokens[token][1]

    def _authenticate(self, token: str) -> str:
        entry = self._tokens.get(token)
        if entry is None:
            raise TokenError("unknown or revoked token")
        name, expiry = entry
        if self.clock() >= expiry:
            del self._tokens[token]
            raise TokenError("token expired")
        return name

    def _writable(self, token: str, name: str | None = None) -> Bookcase:
        owner = self._authenticate(token)
        if name is not None and owner != name:
            raise TokenError(f"token does not unlock bookcase {name!r}")
        case = self._cases[owner]
        if case.published:
            raise ReadOnlyError("published bookcases are read-only; unpublish first")
        return case

    # -- content --------------------------------------------------------------

    def add_shelf(self, token: str, label: str, name: str | None = None) -> str:
        if not label or not label.strip():
            raise ValueError("shelf label must be nonempty")
        with self._lock:
            case = self._writable(token, name)
            case.counter += 1
            shelf_id = f"{hashlib.sha1(case.name.encode()).hexdigest()[:8]}.{case.counter}"
            case.shelves.append(Bookshelf(shelf_id=shelf_id, label=label))
            self._save(case)
            return shelf_id

    def _find_shelf(self, shelf_id: str) -> tuple[Bookcase, Bookshelf]:
        for case in self._cases.values():
            for shelf in case.shelves:
                if shelf.shelf_id == shelf_id:
                    return case, shelf
        raise NotFoundError(f"no shelf {shelf_id!r}", code="unknown-shelf")

    def add_item(self, token: str, shelf_id: str, kind: str, doc_id: int,
                 ordinal: int | None = None, query: str | None = None) -> ShelfItem:
        if kind not in ("book", "bookmark"):
            raise ValueError(f"item kind must be book or bookmark, got {kind!r}")
        if kind == "bookmark" and ordinal is None:
            raise ValueError("bookmarks need a paragraph ordinal")
        with self._lock:
            case, shelf = self._find_shelf(shelf_id)
            writable = self._writable(token, case.name)
            # resolve the reference now; raises NotFoundError when dangling
            text = self.resolve_paragraph(doc_id, ordinal if kind == "bookmark" else None)
            excerpt = text[:EXCERPT_LENGTH] if kind == "bookmark" else None
            writable.counter += 1
            item = ShelfItem(
                item_id=f"{shelf_id}.{writable.counter}", kind=kind, doc_id=doc_id,
                ordinal=ordinal if kind == "bookmark" else None,
                query=query, excerpt=excerpt)
            shelf.items.append(item)
            self._save(writable)
            return item

    def annotate(self, token: str, target: str, text: str,
                 name: str | None = None, target_id: str | None = None) -> str:
        """Sanitize and store an annotation on a bookcase, shelf or item."""
        clean = sanitize_html(text)
        if len(clean.encode("utf-8")) > MAX_ANNOTATION_BYTES:
            raise AnnotationTooLarge(
                f"annotation exceeds {MAX_ANNOTATION_BYTES} bytes after sanitizing")
        with self._lock:
            case = self._writable(token, name)
            if target == "bookcase":
                case.annotation = clean
            elif target == "shelf":
                shelf = next((s for s in case.shelves if s.shelf_id == target_id), None)
                if shelf is None:
                    raise NotFoundError(f"no shelf {target_id!r}", code="unknown-shelf")
                shelf.annotation = clean
            elif target == "item":
                item = next((i for s in case.shelves for i in s.items
                             if i.item_id == target_id), None)
                if item is None:
                    raise NotFoundError(f"no item {target_id!r}", code="unknown-item")
                item.annotation = clean
            else:
                raise ValueError(f"unknown annotation target {target!r}")
            self._save(case)
            return clean

    # -- publishing -------------------------------------------------------------

    def publish(self, token: str, name: str | None = None) -> str:
        with self._lock:
            owner = self._authenticate(token)
            if name is not None and owner != name:
                raise TokenError(f"token does not unlock bookcase {name!r}")
            case = self._cases[owner]
            if not case.published:
                case.published = True
                case.published_id = secrets.token_urlsafe(9)
                self._save(case)
            return case.published_id

    def unpublish(self, token: str, name: str | None = None) -> None:
        with self._lock:
            owner = self._authenticate(token)
            if name is not None and owner != name:
                raise TokenError(f"token does not unlock bookcase {name!r}")
            case = self._cases[owner]
            case.published = False
            case.published_id = None
            self._save(case)

    def list_published(self) -> list[dict]:
        with self._lock:
            return [
                {"published_id": c.published_id, "name": c.name}
                for c in self._cases.values() if c.published
            ]

    def view_published(self, published_id: str) -> dict:
        with self._lock:
            for case in self._cases.values():
                if case.published and case.published_id == published_id:
                    return self.render(case)
        raise NotFoundError(f"no published bookcase {published_id!r}",
                            code="unknown-published-id")

    def view_own(self, token: str) -> dict:
        with self._lock:
            case = self._cases[self._authenticate(token)]
            return self.render(case)

    def render(self, case: Bookcase) -> dict:
        """Read-only view; never includes key material."""
        return {
            "name": case.name,
            "annotation": case.annotation,
            "published": case.published,
            "published_id": case.published_id,
            "shelves": [
                {
                    "shelf_id": shelf.shelf_id,
                    "label": shelf.label,
                    "annotation": shelf.annotation,
                    "items": [
                        {
                            "item_id": item.item_id,
                            "kind": item.kind,
                            "doc_id": item.doc_id,
                            "ordinal": item.ordinal,
                            "query": item.query,
                            "excerpt": item.excerpt,
                            "annotation": item.annotation,
                            "tombstoned": item.tombstoned,
                            "note": TOMBSTONE_NOTE if item.tombstoned else None,
                        }
                        for item in shelf.items
                    ],
                }
                for shelf in case.shelves
            ],
        }

    # -- key hints ---------------------------------------------------------------

    def request_hint(self, name: str) -> str:
        """Append the stored hint (never the key) to the outbox; returns a receipt id."""
        with self._lock:
            case = self._cases.get(name)
            if case is None:
                raise NotFoundError(f"no bookcase named {name!r}", code="unknown-name")
            delivery_id = secrets.token_hex(8)
            stamp = datetime.now(timezone.utc).isoformat()
            line = "\t".join((
                stamp, delivery_id, case.hint_contact,
                json.dumps(f"bookcase {case.name}: {case.hint}", ensure_ascii=False),
            ))
            self.outbox_path.parent.mkdir(parents=True, exist_ok=True)
            with self.outbox_path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")
            return delivery_id

    # -- catalogue integration ------------------------------------------------------

    def tombstone_doc(self, doc_id: int) -> None:
        """Mark every item referencing a removed document, keeping the item."""
        with self._lock:
            for case in self._cases.values():
                dirty = False
                for shelf in case.shelves:
                    for item in shelf.items:
                        if item.doc_id == doc_id and not item.tombstoned:
                            item.tombstoned = True
                            dirty = True
                if dirty:
                    self._save(case)

    def exists(self, name: str) -> bool:
        with self._lock:
            return name in self._cases
