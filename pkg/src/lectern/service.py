"""HTTP facade over the catalogue, search, typesetting and bookcases.

API routes speak JSON; archived texts, PDFs, zips and descriptor files
are served as raw bytes.  Every error body is structured as
{"error": {"code": ..., "message": ...}}.  Static assets and robots.txt
are excluded from hit statistics.
"""

from __future__ import annotations

import hmac
from datetime import datetime, timezone
from threading import Lock

from starlette.applications import Starlette
from starlette.requests import Request
from starlette.responses import JSONResponse, PlainTextResponse, Response
from starlette.routing import Mount, Route

from . import __version__
from .bookcases import BookcaseStore
from .config import ServiceConfig
from .errors import (
    AnnotationTooLarge,
    AuthError,
    EmptyCollectionError,
    EncodingError,
    FetchError,
    InvalidMediaType,
    LecternError,
    LockBusyError,
    NameTakenError,
    NotFoundError,
    PolicyRejectedError,
    QueryError,
    ReadOnlyError,
    RecordInvalidError,
    StorageError,
    TypesetError,
)
from .harvest import Harvester, IngestOverrides, build_instant_library
from .pdfgen import TypesetOptions, typeset
from .query import parse_query
from .records import render_template, slugify
from .search import (
    adjacent_paragraph,
    export_descriptor,
    search_content,
    search_metadata,
)
from .storage import CatalogueStore

TOKEN_HEADER = "X-Bookcase-Token"

ROBOTS_BODY = "User-agent: *\nDisallow: /search\nDisallow: /content-search\n"

_STATUS_BY_ERROR = (
    (QueryError, 400),
    (TypesetError, 422),
    (AnnotationTooLarge, 422),
    (PolicyRejectedError, 422),
    (RecordInvalidError, 422),
    (InvalidMediaType, 422),
    (EncodingError, 422),
    (NameTakenError, 409),
    (ReadOnlyError, 409),
    (AuthError, 401),
    (NotFoundError, 404),
    (EmptyCollectionError, 404),
    (LockBusyError, 503),
    (FetchError, 502),
    (StorageError, 500),
)


def _error_status(exc: LecternError) -> int:
    for klass, status in _STATUS_BY_ERROR:
        if isinstance(exc, klass):
            return status
    return 500


def _error_response(code: str, message: str, status: int) -> JSONResponse:
    return JSONResponse({"error": {"code": code, "message": message}}, status_code=status)


class HitCounter:
    """Per-endpoint, per-UTC-day request counts; monotone within a day."""

    def __init__(self) -> None:
        self._lock = Lock()
        self._counts: dict[str, dict[str, int]] = {}

    def hit(self, endpoint: str) -> None:
        day = datetime.now(timezone.utc).date().isoformat()
        with self._lock:
            per_day = self._counts.setdefault(day, {})
            per_day[endpoint] = per_day.get(endpoint, 0) + 1

    def snapshot(self) -> dict[str, dict[str, int]]:
        with self._lock:
            return {day: dict(counts) for day, counts in self._counts.items()}


class Api:
    def __init__(self, config: ServiceConfig):
        config.require_service()
        self.config = config
        self.store = CatalogueStore(config.data_root)
        self.bookcases = BookcaseStore(
            config.data_root / "bookcases",
            config.outbox_path,
            paragraph_resolver=self._resolve_paragraph,
            token_ttl_seconds=config.token_expiry_hours * 3600.0,
        )
        self.harvester = Harvester(self.store, timeout=config.fetch_timeout)
        self.counter = HitCounter()

    def _resolve_paragraph(self, doc_id: int, ordinal: int | None) -> str:
        if ordinal is None:
            self.store.record(doc_id)
            return ""
        return self.store.paragraph_text(doc_id, ordinal)

    # -- plumbing -------------------------------------------------------------

    def routes(self) -> list:
        def counted(pattern: str, handler, methods: list[str]) -> Route:
            async def endpoint(request: Request, _h=handler, _p=pattern):
                self.counter.hit(_p)
                try:
                    return await _h(request)
                except LecternError as exc:
                    return _error_response(exc.code, str(exc), _error_status(exc))
                except ValueError as exc:
                    return _error_response("bad-request", str(exc), 400)
            return Route(pattern, endpoint, methods=methods)

        routes = [
            counted("/search", self.handle_search, ["GET"]),
            counted("/content-search", self.handle_content_search, ["POST", "GET"]),
            counted("/browse/authors", self.handle_browse_authors, ["GET"]),
            counted("/browse/titles/{letter}", self.handle_browse_titles, ["GET"]),
            counted("/browse/files", self.handle_browse_files, ["GET"]),
            counted("/texts/{id:int}", self.handle_text, ["GET"]),
            counted("/texts/{id:int}/pdf", self.handle_typeset, ["GET"]),
            counted("/texts/{id:int}/paragraphs/{ordinal:int}", self.handle_paragraph, ["GET"]),
            counted("/bookcases", self.handle_create_bookcase, ["POST"]),
            counted("/bookcases/unlock", self.handle_unlock, ["POST"]),
            counted("/bookcases/hint", self.handle_hint, ["POST"]),
            counted("/bookcases/{name}/lock", self.handle_lock, ["POST"]),
            counted("/bookcases/{name}/shelves", self.handle_add_shelf, ["POST"]),
            counted("/bookcases/{name}/annotations", self.handle_annotate, ["POST"]),
            counted("/bookcases/{name}/publish", self.handle_publish, ["POST"]),
            counted("/bookcases/{name}/unpublish", self.handle_unpublish, ["POST"]),
            counted("/shelves/{shelf_id}/items", self.handle_add_item, ["POST"]),
            counted("/published", self.handle_published_list, ["GET"]),
            counted("/published/{published_id}", self.handle_published_view, ["GET"]),
            counted("/downloads/{filename}", self.handle_download, ["GET"]),
            counted("/stats", self.handle_stats, ["GET"]),
            counted("/admin/ingest", self.handle_admin_ingest, ["POST"]),
            Route("/robots.txt", self.handle_robots, methods=["GET"]),
        ]
        if self.config.ui_root and self.config.ui_root.is_dir():
            from starlette.staticfiles import StaticFiles
            routes.append(Mount("/ui", app=StaticFiles(
                directory=self.config.ui_root, html=True), name="ui"))
        return routes

    @staticmethod
    async def _body(request: Request) -> dict:
        try:
            data = await request.json()
        except Exception:
            raise QueryError("request body must be JSON", code="bad-body") from None
        if not isinstance(data, dict):
            raise QueryError("request body must be a JSON object", code="bad-body")
        return data

    @staticmethod
    def _flag(params, name: str) -> bool:
        return params.get(name, "").lower() in ("1", "true", "yes", "on")

    # -- search and browse ------------------------------------------------------

    async def handle_search(self, request: Request) -> JSONResponse:
        params = request.query_params
        q = params.get("q", "")
        output = params.get("output", "titles-authors-links")
        query = parse_query(q).with_flags(
            case_sensitive=self._flag(params, "case_sensitive"),
            stemmed=self._flag(params, "stemmed"))
        hits = search_metadata(self.store.metadata_index, query, output)
        if request.headers.get(TOKEN_HEADER) and output != "titles":
            for hit in hits:
                hit["links"]["add_to_bookcase"] = "/shelves/{shelf_id}/items"
        return JSONResponse({"query": q, "output": output, "total": len(hits), "hits": hits})

    async def handle_content_search(self, request: Request) -> JSONResponse:
        if request.method == "GET":
            # convenience echo of the endpoint contract for descriptor users
            return JSONResponse({
                "endpoint": "/content-search", "method": "POST",
                "fields": ["q", "docs", "sort", "case_sensitive", "stemmed"]})
        data = await self._body(request)
        q = data.get("q", "")
        docs = data.get("docs", [])
        if not isinstance(docs, list) or not docs:
            raise QueryError("select at least one document", code="empty-selection")
        try:
            doc_ids = [int(d) for d in docs]
        except (TypeError, ValueError):
            raise QueryError("docs must be record ids", code="bad-selection") from None
        query = parse_query(q).with_flags(
            case_sensitive=bool(data.get("case_sensitive", False)),
            stemmed=bool(data.get("stemmed", False)),
            sort=data.get("sort", "relevance"))
        indexes = [self.store.content_index(d) for d in doc_ids]
        hits = search_content(indexes, query)
        unlocked = bool(request.headers.get(TOKEN_HEADER))
        payload = []
        for hit in hits:
            entry = {
                "doc_id": hit.doc_id,
                "ordinal": hit.ordinal,
                "score": hit.score,
                "excerpt": hit.excerpt,
                "title": self.store.record(hit.doc_id).title,
                "links": {
                    "text": f"/texts/{hit.doc_id}",
                    "paragraph": f"/texts/{hit.doc_id}/paragraphs/{hit.ordinal}",
                },
            }
            if unlocked:
                entry["links"]["add_to_bookcase"] = "/shelves/{shelf_id}/items"
            payload.append(entry)
        return JSONResponse({
            "query": q, "sort": query.sort, "total": len(payload), "hits": payload})

    async def handle_browse_authors(self, request: Request) -> JSONResponse:
        entries = []
        for key, display in sorted(self.store.authorities["author"].entries.items()):
            q = f'author:"{display}"'
            entries.append({"key": key, "display": display, "query": q})
        return JSONResponse({"authors": entries})

    async def handle_browse_titles(self, request: Request) -> JSONResponse:
        letter = request.path_params["letter"]
        if len(letter) != 1 or not (letter.isalpha() or letter == "#"):
            raise NotFoundError(f"no title page {letter!r}", code="unknown-letter")
        titles = []
        for record in sorted(self.store.records.values(), key=lambda r: (r.title.lower(), r.id)):
            first = record.title.lstrip()[:1]
            matches = (first.lower() == letter.lower()) if letter != "#" \
                else not first.isalpha()
            if matches:
                titles.append({
                    "id": record.id, "title": record.title,
                    "query": f'title:"{record.title}"'})
        return JSONResponse({"letter": letter.upper(), "titles": titles})

    async def handle_browse_files(self, request: Request) -> JSONResponse:
        by_dir: dict[str, dict] = {}
        for record in self.store.records.values():
            slug = slugify(record.directory)
            entry = by_dir.setdefault(slug, {
                "directory": record.directory, "slug": slug, "count": 0})
            entry["count"] += 1
        return JSONResponse({"directories": sorted(by_dir.values(), key=lambda e: e["slug"])})

    # -- texts -------------------------------------------------------------------

    async def handle_text(self, request: Request) -> PlainTextResponse:
        record_id = request.path_params["id"]
        text = self.store.canonical_text(record_id)
        return PlainTextResponse(text, media_type="text/plain; charset=utf-8")

    async def handle_typeset(self, request: Request) -> Response:
        record_id = request.path_params["id"]
        record = self.store.record(record_id)
        params = request.query_params
        try:
            size = float(params.get("size", "12"))
        except ValueError:
            raise TypesetError(f"size must be a number, got {params.get('size')!r}") from None
        options = TypesetOptions(font=params.get("font", "times"), size_pt=size)
        pdf = typeset(self.store.canonical_text(record_id), options, title=record.title)
        filename = f"{record.id}-{slugify(record.title) or 'untitled'}.pdf"
        return Response(pdf, media_type="application/pdf", headers={
            "Content-Disposition": f'inline; filename="{filename}"'})

    async def handle_paragraph(self, request: Request) -> JSONResponse:
        record_id = request.path_params["id"]
        ordinal = request.path_params["ordinal"]
        direction = request.query_params.get("dir", "self")
        index = self.store.content_index(record_id)
        if direction == "self":
            text = self.store.paragraph_text(record_id, ordinal)
            target = ordinal
        elif direction in ("next", "prev"):
            neighbor = adjacent_paragraph(index, ordinal, direction)
            if neighbor is None:
                raise NotFoundError(
                    f"paragraph {ordinal} has no {direction} neighbor",
                    code="paragraph-boundary")
            target, text = neighbor
        else:
            raise QueryError(f"dir must be next or prev, got {direction!r}", code="bad-direction")
        return JSONResponse({
            "doc_id": record_id,
            "ordinal": target,
            "text": text,
            "has_prev": target > 0,
            "has_next": target + 1 < index.paragraph_count,
        })

    # -- bookcases ------------------------------------------------------------------

    async def handle_create_bookcase(self, request: Request) -> JSONResponse:
        data = await self._body(request)
        case = self.bookcases.create(
            name=str(data.get("name", "")),
            key=str(data.get("key", "")),
            hint=str(data.get("hint", "")),
            hint_contact=str(data.get("hint_contact", "")))
        return JSONResponse({"name": case.name, "published": case.published}, status_code=201)

    async def handle_unlock(self, request: Request) -> JSONResponse:
        data = await self._body(request)
        token = self.bookcases.unlock(str(data.get("name", "")), str(data.get("key", "")))
        expires = datetime.fromtimestamp(
            self.bookcases.token_expiry(token), tz=timezone.utc)
        return JSONResponse({
            "token": token,
            "expires_at": expires.isoformat(),
            "bookcase": self.bookcases.view_own(token),
        })

    def _token(self, request: Request) -> str:
        token = request.headers.get(TOKEN_HEADER, "")
        if not token:
            raise AuthError(f"missing {TOKEN_HEADER} header", code="missing-token")
        return token

    async def handle_lock(self, request: Request) -> JSONResponse:
        self.bookcases.lock(self._token(request))
        return JSONResponse({"locked": True})

    async def handle_add_shelf(self, request: Request) -> JSONResponse:
        data = await self._body(request)
        token = self._token(request)
        shelf_id = self.bookcases.add_shelf(
            token, str(data.get("label", "")),
            name=request.path_params["name"])
        return JSONResponse({
            "shelf_id": shelf_id,
            "bookcase": self.bookcases.view_own(token),
        }, status_code=201)

    async def handle_add_item(self, request: Request) -> JSONResponse:
        data = await self._body(request)
        ordinal = data.get("ordinal")
        token = self._token(request)
        item = self.bookcases.add_item(
            token,
            request.path_params["shelf_id"],
            kind=str(data.get("kind", "")),
            doc_id=int(data.get("doc_id", -1)),
            ordinal=int(ordinal) if ordinal is not None else None,
            query=data.get("query"))
        return JSONResponse({
            "item_id": item.item_id, "kind": item.kind, "doc_id": item.doc_id,
            "ordinal": item.ordinal, "excerpt": item.excerpt,
            "bookcase": self.bookcases.view_own(token)}, status_code=201)

    async def handle_annotate(self, request: Request) -> JSONResponse:
        data = await self._body(request)
        token = self._token(request)
        stored = self.bookcases.annotate(
            token,
            target=str(data.get("target", "bookcase")),
            text=str(data.get("text", "")),
            name=request.path_params["name"],
            target_id=data.get("id"))
        return JSONResponse({
            "annotation": stored,
            "bookcase": self.bookcases.view_own(token)})

    async def handle_publish(self, request: Request) -> JSONResponse:
        published_id = self.bookcases.publish(
            self._token(request), name=request.path_params["name"])
        return JSONResponse({
            "published_id": published_id, "url": f"/published/{published_id}"})

    async def handle_unpublish(self, request: Request) -> JSONResponse:
        self.bookcases.unpublish(self._token(request), name=request.path_params["name"])
        return JSONResponse({"published": False})

    async def handle_published_list(self, request: Request) -> JSONResponse:
        return JSONResponse({"published": self.bookcases.list_published()})

    async def handle_published_view(self, request: Request) -> JSONResponse:
        view = self.bookcases.view_published(request.path_params["published_id"])
        view["titles"] = self._item_titles(view)
        return JSONResponse(view)

    def _item_titles(self, view: dict) -> dict:
        titles = {}
        for shelf in view["shelves"]:
            for item in shelf["items"]:
                doc_id = item["doc_id"]
                if item["tombstoned"]:
                    titles[str(doc_id)] = None
                elif str(doc_id) not in titles:
                    try:
                        titles[str(doc_id)] = self.store.record(doc_id).title
                    except NotFoundError:
                        titles[str(doc_id)] = None
        return titles

    async def handle_hint(self, request: Request) -> JSONResponse:
        data = await self._body(request)
        delivery_id = self.bookcases.request_hint(str(data.get("name", "")))
        return JSONResponse({"delivery_id": delivery_id}, status_code=202)

    # -- downloads and descriptors -----------------------------------------------------

    async def handle_download(self, request: Request) -> Response:
        filename = request.path_params["filename"]
        if filename.endswith(".zip"):
            collection = filename[:-4]
            archive, _manifest = build_instant_library(
                self.store, collection, self.config.public_base)
            return Response(archive, media_type="application/zip", headers={
                "Content-Disposition": f'attachment; filename="{filename}"'})
        if filename.endswith(".src"):
            stem = filename[:-4]
            if not stem.isdigit():
                raise NotFoundError(f"no descriptor {filename!r}", code="unknown-descriptor")
            record = self.store.record(int(stem))
            self.store.content_index(record.id)  # descriptor points at a live index
            text = export_descriptor(record, self.config.public_base)
            return PlainTextResponse(text, media_type="text/plain; charset=utf-8")
        raise NotFoundError(f"no download {filename!r}", code="unknown-download")

    # -- operations ---------------------------------------------------------------------

    async def handle_robots(self, request: Request) -> PlainTextResponse:
        return PlainTextResponse(ROBOTS_BODY, media_type="text/plain; charset=utf-8")

    async def handle_stats(self, request: Request) -> JSONResponse:
        return JSONResponse({"hits": self.counter.snapshot()})

    async def handle_admin_ingest(self, request: Request) -> JSONResponse:
        auth = request.headers.get("Authorization", "")
        expected = f"Bearer {self.config.admin_token}"
        if not hmac.compare_digest(auth.encode(), expected.encode()):
            raise AuthError("admin token required", code="admin-auth")
        data = await self._body(request)
        url = data.get("url")
        if not url:
            raise QueryError("url is required", code="missing-url")
        overrides = IngestOverrides(
            authors=tuple(data.get("authors", [])),
            directory=str(data.get("directory", "")),
            reformat_method=data.get("reformat_method"),
            title=data.get("title"),
            publisher=data.get("publisher"),
            subjects=tuple(data.get("subjects", [])),
            genres=tuple(data.get("genres", [])),
            note=data.get("note"),
            year_conceived=data.get("year_conceived"),
            year_published=data.get("year_published"),
            record_id=data.get("id"),
            license=data.get("license", "public-domain"),
            complete=bool(data.get("complete", True)),
        )
        record, path = self.harvester.ingest(str(url), overrides)
        return JSONResponse({
            "id": record.id, "title": record.title, "path": path,
            "template": render_template(record)}, status_code=201)


def create_app(config: ServiceConfig) -> Starlette:
    api = Api(config)
    app = Starlette(routes=api.routes())
    app.state.api = api

    async def on_error(request: Request, exc: Exception):
        return _error_response("internal", "unexpected server error", 500)

    app.add_exception_handler(Exception, on_error)
    return app


def run(config: ServiceConfig) -> None:
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.bind, port=config.port, log_level="warning")
