"""Acquisition pipeline: fetch, extract, confirm, archive, index, catalogue.

A curator points the harvester at a URL; it fetches the document (http/s
only, bounded redirects, robots-aware, distinctive user agent), extracts
what descriptive metadata it can, and prepares a draft record for the
curator to confirm or override.  Ingest then runs the whole tail -
policy check, reformat, archive, content and metadata indexing, record
persistence - atomically: a failure at any stage leaves nothing behind.

Link checking probes every record's original URL and only reports; the
archive exists precisely because remote links rot, so nothing is ever
auto-deleted.
"""

from __future__ import annotations

import io
import zipfile
from dataclasses import dataclass
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from html.parser import HTMLParser
from urllib import robotparser
from urllib.parse import urljoin, urlsplit

import requests

from .errors import (
    EmptyCollectionError,
    FetchTimeout,
    HttpStatusError,
    NetworkError,
    PolicyRejectedError,
    RecordInvalidError,
    RedirectLimitError,
    RedirectLoopError,
    RobotsDisallowedError,
    UnsupportedSchemeError,
)
from .records import (
    TemplateRecord,
    archive_path_for,
    evaluate_policy,
    render_template,
    validate_record,
)
from .search import export_descriptor
from .storage import CatalogueStore, Checkpoint, _no_checkpoint
from .textproc import decode_utf8, reformat

USER_AGENT = "lectern-harvester/0.1 (collection curator; respects robots.txt)"
DEFAULT_TIMEOUT = 30.0
MAX_REDIRECTS = 5
TITLE_LIMIT = 120


@dataclass(frozen=True)
class FetchResult:
    url: str
    status: int
    mime_type: str
    length_bytes: int
    last_modified: datetime | None
    body: bytes
    final_url: str


@dataclass(frozen=True)
class ExtractedMetadata:
    title: str | None
    mime_type: str
    length_bytes: int
    last_modified: datetime | None


def _sniff_mime(body: bytes) -> str:
    head = body[:1024].lstrip().lower()
    if head.startswith((b"<!doctype html", b"<html")):
        return "text/html"
    if body.startswith(b"%PDF-"):
        return "application/pdf"
    if body.startswith(b"PK\x03\x04"):
        return "application/zip"
    if body.startswith(b"\x1f\x8b"):
        return "application/gzip"
    try:
        body.decode("utf-8")
        return "text/plain"
    except UnicodeDecodeError:
        return "application/octet-stream"


class _RobotsCache:
    def __init__(self, timeout: float, user_agent: str):
        self.timeout = timeout
        self.user_agent = user_agent
        self._parsers: dict[str, robotparser.RobotFileParser] = {}

    def allowed(self, url: str) -> bool:
        origin = "{0.scheme}://{0.netloc}".format(urlsplit(url))
        parser = self._parsers.get(origin)
        if parser is None:
            parser = robotparser.RobotFileParser()
            try:
                resp = requests.get(origin + "/robots.txt", timeout=self.timeout,
                                    headers={"User-Agent": self.user_agent})
                if resp.status_code == 200:
                    parser.parse(resp.text.splitlines())
                else:
                    parser.allow_all = True
            except requests.RequestException:
                parser.allow_all = True
            self._parsers[origin] = parser
        return parser.can_fetch(self.user_agent, url)


def fetch(url: str, *, timeout: float = DEFAULT_TIMEOUT,
          max_redirects: int = MAX_REDIRECTS,
          user_agent: str = USER_AGENT,
          robots: _RobotsCache | None = None) -> FetchResult:
    """GET a remote document with bounded redirects and faithful headers."""
    scheme = urlsplit(url).scheme.lower()
    if scheme not in ("http", "https"):
        raise UnsupportedSchemeError(f"only http(s) URLs are fetchable, got {url!r}")
    if robots is None:
        robots = _RobotsCache(timeout, user_agent)
    if not robots.allowed(url):
        raise RobotsDisallowedError(f"robots.txt forbids fetching {url}")

    seen = {url}
    current = url
    redirects = 0
    while True:
        try:
            resp = requests.get(current, timeout=timeout, allow_redirects=False,
                                headers={"User-Agent": user_agent})
        except requests.Timeout:
            raise FetchTimeout(f"timed out after {timeout}s fetching {current}") from None
        except requests.RequestException as exc:
            raise NetworkError(f"fetching {current}: {exc}") from None

        if resp.status_code in (301, 302, 303, 307, 308):
            location = resp.headers.get("Location")
            if not location:
                raise HttpStatusError(resp.status_code, current)
            redirects += 1
            if redirects > max_redirects:
                raise RedirectLimitError(
                    f"{url} redirected more than {max_redirects} times")
            current = urljoin(current, location)
            if current in seen:
                raise RedirectLoopError(f"{url} redirects in a loop via {current}")
            seen.add(current)
            continue

        if not 200 <= resp.status_code < 300:
            raise HttpStatusError(resp.status_code, current)

        body = resp.content
        content_type = resp.headers.get("Content-Type", "")
        mime = content_type.split(";", 1)[0].strip().lower() or _sniff_mime(body)
        last_modified = None
        if "Last-Modified" in resp.headers:
            try:
                last_modified = parsedate_to_datetime(resp.headers["Last-Modified"])
            except (TypeError, ValueError):
                pass
        return FetchResult(
            url=url, status=resp.status_code, mime_type=mime,
            length_bytes=len(body), last_modified=last_modified,
            body=body, final_url=current)


class _TitleParser(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.depth = 0
        self.chunks: list[str] = []
        self.done = False

    def handle_starttag(self, tag, attrs):
        if tag == "title" and not self.done:
            self.depth += 1

    def handle_endtag(self, tag):
        if tag == "title" and self.depth:
            self.depth -= 1
            self.done = True

    def handle_data(self, data):
        if self.depth and not self.done:
            self.chunks.append(data)


def extract_metadata(fr: FetchResult) -> ExtractedMetadata:
    """Pull title/date/size/type guesses out of a fetched document."""
    title: str | None = None
    if fr.mime_type == "text/html":
        parser = _TitleParser()
        parser.feed(decode_utf8(fr.body))
        raw = " ".join("".join(parser.chunks).split())
        title = raw or None
    elif fr.mime_type == "text/plain":
        text = decode_utf8(fr.body)
        for line in text.splitlines():
            if line.strip():
                title = line.strip()[:TITLE_LIMIT]
                break
    return ExtractedMetadata(
        title=title, mime_type=fr.mime_type,
        length_bytes=fr.length_bytes, last_modified=fr.last_modified)


@dataclass
class DraftRecord:
    """Machine-filled record plus the curator's selections."""

    record: TemplateRecord
    license: str = "public-domain"
    complete: bool = True


@dataclass
class IngestOverrides:
    authors: tuple[str, ...] = ()
    directory: str = ""
    reformat_method: str | None = None
    title: str | None = None
    publisher: str | None = None
    subjects: tuple[str, ...] = ()
    genres: tuple[str, ...] = ()
    note: str | None = None
    year_conceived: int | None = None
    year_published: int | None = None
    record_id: int | None = None
    license: str = "public-domain"
    complete: bool = True
    register_authorities: bool = True


@dataclass(frozen=True)
class LinkReportRow:
    url: str
    status: int | None
    ok: bool
    checked_at: str


class Harvester:
    def __init__(self, store: CatalogueStore, *, timeout: float = DEFAULT_TIMEOUT,
                 user_agent: str = USER_AGENT):
        self.store = store
        self.timeout = timeout
        self.user_agent = user_agent
        self.robots = _RobotsCache(timeout, user_agent)

    def prepare_draft(self, url: str, overrides: IngestOverrides) -> tuple[DraftRecord, FetchResult]:
        """Fetch and extract, then merge curator overrides into a draft."""
        fr = fetch(url, timeout=self.timeout, user_agent=self.user_agent,
                   robots=self.robots)
        extracted = extract_metadata(fr)
        existing = self.store.find_by_url(url)
        if overrides.record_id is not None:
            record_id = overrides.record_id
        elif existing is not None:
            record_id = existing.id  # re-ingest replaces in place
        else:
            record_id = self.store.next_id()
        record = TemplateRecord(
            id=record_id,
            title=overrides.title or extracted.title or "",
            url=url,
            directory=overrides.directory,
            authors=tuple(overrides.authors),
            mime_type=extracted.mime_type,
            reformat_method=overrides.reformat_method or "already-delimited",
            publisher=overrides.publisher,
            subjects=tuple(overrides.subjects),
            genres=tuple(overrides.genres),
            note=overrides.note,
            year_conceived=overrides.year_conceived or 0,
            year_published=overrides.year_published or 0,
            size_bytes=extracted.length_bytes,
        )
        return DraftRecord(record=record, license=overrides.license,
                           complete=overrides.complete), fr

    def ingest(self, url: str, overrides: IngestOverrides,
               checkpoint: Checkpoint = _no_checkpoint) -> tuple[TemplateRecord, str]:
        """Run the full pipeline; returns the record and its archive path."""
        draft, fr = self.prepare_draft(url, overrides)
        checkpoint("fetched")
        checkpoint("extracted")

        decision = evaluate_policy(fr.mime_type, draft.license, draft.complete)
        if not decision.accepted:
            raise PolicyRejectedError(list(decision.reasons))
        checkpoint("policy-checked")

        record = draft.record
        if overrides.register_authorities:
            for key in record.authors:
                if not self.store.authorities["author"].resolve(key):
                    self.store.register_authority("author", key)
            if record.publisher and not self.store.authorities["publisher"].resolve(record.publisher):
                self.store.register_authority("publisher", record.publisher)
            for term in record.subjects:
                if not self.store.vocabularies["subject"].resolve(term):
                    self.store.register_term("subject", term)
            for term in record.genres:
                if not self.store.vocabularies["genre"].resolve(term):
                    self.store.register_term("genre", term)

        violations = validate_record(record, self.store.authorities,
                                     self.store.vocabularies, self.store.collections)
        if violations:
            raise RecordInvalidError(violations)

        canonical = reformat(fr.body, record.reformat_method)
        checkpoint("reformatted")

        self.store.upsert(record, canonical, checkpoint=checkpoint)
        return record, archive_path_for(record)

    def check_links(self) -> list[LinkReportRow]:
        """Probe every record's original URL; report only, delete nothing."""
        rows = []
        for record in sorted(self.store.records.values(), key=lambda r: r.id):
            rows.append(self._probe(record.url))
        return rows

    def _probe(self, url: str) -> LinkReportRow:
        stamp = datetime.now(timezone.utc).isoformat()
        scheme = urlsplit(url).scheme.lower()
        if scheme not in ("http", "https"):
            return LinkReportRow(url=url, status=None, ok=False, checked_at=stamp)
        headers = {"User-Agent": self.user_agent}
        status: int | None = None
        try:
            resp = requests.head(url, timeout=self.timeout, headers=headers,
                                  allow_redirects=True)
            status = resp.status_code
            if status in (405, 501):
                resp = requests.get(url, timeout=self.timeout, headers=headers)
                status = resp.status_code
        except requests.RequestException:
            try:
                resp = requests.get(url, timeout=self.timeout, headers=headers)
                status = resp.status_code
            except requests.RequestException:
                status = None
        ok = status is not None and 200 <= status < 300
        return LinkReportRow(url=url, status=status, ok=ok, checked_at=stamp)


# -- instant libraries -----------------------------------------------------------

def build_instant_library(store: CatalogueStore, collection: str,
                          service_base: str) -> tuple[bytes, str]:
    """Deterministic zip of one collection's texts, records and descriptors."""
    prefix = collection.strip().lower()
    if not prefix:
        raise EmptyCollectionError("collection prefix must be nonempty")
    chosen = [
        record for record in store.records.values()
        if archive_path_for(record).split("/", 1)[0].startswith(prefix)
    ]
    if not chosen:
        raise EmptyCollectionError(f"no archived texts under collection {collection!r}")
    chosen.sort(key=lambda r: r.id)

    entries: list[tuple[str, bytes]] = []
    for record in chosen:
        entries.append((f"texts/{archive_path_for(record)}",
                        store.canonical_text(record.id).encode("utf-8")))
        entries.append((f"records/{record.id}.tpl",
                        render_template(record).encode("utf-8")))
        entries.append((f"descriptors/{record.id}.src",
                        export_descriptor(record, service_base).encode("utf-8")))
    entries.sort(key=lambda e: e[0])

    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        for name, data in entries:
            info = zipfile.ZipInfo(filename=name, date_time=(1980, 1, 1, 0, 0, 0))
            info.external_attr = 0o644 << 16
            info.compress_type = zipfile.ZIP_DEFLATED
            zf.writestr(info, data)
    manifest = "".join(f"{len(data)}\t{name}\n" for name, data in entries)
    return buf.getvalue(), manifest
