from __future__ import annotations

import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from lectern.config import ServiceConfig
from lectern.records import TemplateRecord
from lectern.storage import CatalogueStore
from lectern.textproc import reformat

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

# filled by the acceptance suite; echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


# (record fields, fixture file, reformat method)
SEED_SPECS = [
    (dict(id=26, title="Adventures Of Huckleberry Finn", authors=("Twain, Mark",),
          directory="American - 1800-1899", url="gopher://gopher.vt.edu",
          mime_type="text/html", year_conceived=1885, publisher="Virginia Tech",
          size_bytes=576333), "huck.txt", "already-delimited"),
    (dict(id=27, title="Adventures Of Tom Sawyer", authors=("Twain, Mark",),
          directory="American - 1800-1899", url="http://example.org/sawyer.txt",
          size_bytes=120), "tomsawyer.txt", "already-delimited"),
    (dict(id=28, title="Tom Sawyer Abroad", authors=("Twain, Mark",),
          directory="American - 1800-1899", url="http://example.org/abroad.txt",
          size_bytes=121), "abroad.txt", "already-delimited"),
    (dict(id=29, title="Tom Sawyer, Detective", authors=("Twain, Mark",),
          directory="American - 1800-1899", url="http://example.org/detective.txt",
          size_bytes=122), "detective.txt", "already-delimited"),
    (dict(id=7, title="Titus Andronicus", authors=("Shakespeare, William",),
          directory="English - 1500-1599", url="http://example.org/titus.txt",
          size_bytes=321), "titus.txt", "already-delimited"),
    (dict(id=31, title="River Commonplace Book", authors=("Parker, Jane",),
          directory="American - 1800-1899", url="http://example.org/slav.txt",
          size_bytes=99), "slav.txt", "already-delimited"),
    (dict(id=8, title="Of Studies", authors=("Bacon, Francis",),
          directory="English - 1500-1599", url="http://example.org/essay.txt",
          size_bytes=77), "essay.txt", "already-delimited"),
]

SEED_AUTHORS = ("Twain, Mark", "Shakespeare, William", "Parker, Jane", "Bacon, Francis")


def seed_catalogue(store: CatalogueStore) -> dict[int, TemplateRecord]:
    for author in SEED_AUTHORS:
        store.register_authority("author", author)
    store.register_authority("publisher", "Virginia Tech")
    out = {}
    for fields, filename, method in SEED_SPECS:
        record = TemplateRecord(reformat_method=method, **fields)
        store.upsert(record, reformat(fixture_text(filename), method))
        out[record.id] = record
    return out


@pytest.fixture
def store(tmp_path) -> CatalogueStore:
    return CatalogueStore(tmp_path / "data")


@pytest.fixture
def seeded_store(tmp_path) -> CatalogueStore:
    s = CatalogueStore(tmp_path / "data")
    seed_catalogue(s)
    return s


@pytest.fixture
def service_config(tmp_path) -> ServiceConfig:
    return ServiceConfig(data_root=tmp_path / "data", admin_token="test-admin-token")


def make_client(config: ServiceConfig, light_keys: bool = True):
    """TestClient over a freshly built app; key hashing lightened for speed."""
    from starlette.testclient import TestClient

    from lectern.service import create_app

    app = create_app(config)
    if light_keys:
        app.state.api.bookcases.key_params = {"n": 2 ** 4, "r": 8, "p": 1}
    return TestClient(app, raise_server_exceptions=False)


@pytest.fixture
def client(seeded_store, service_config):
    with make_client(service_config) as c:
        yield c


# -- local fixture HTTP server ---------------------------------------------------


class FixtureHandler(BaseHTTPRequestHandler):
    routes: dict[str, tuple[int, str, bytes, dict]] = {}

    def _respond(self, head_only: bool) -> None:
        if self.path.startswith("/redirect/"):
            hops = int(self.path.rsplit("/", 1)[1])
            target = "/huck.txt" if hops <= 0 else f"/redirect/{hops - 1}"
            self.send_response(302)
            self.send_header("Location", target)
            self.end_headers()
            return
        if self.path.startswith("/loop/"):
            target = "/loop/b" if self.path.endswith("a") else "/loop/a"
            self.send_response(302)
            self.send_header("Location", target)
            self.end_headers()
            return
        if self.path == "/slow":
            time.sleep(2)
        entry = self.routes.get(self.path)
        if entry is None:
            self.send_response(404)
            self.send_header("Content-Type", "text/plain")
            self.end_headers()
            if not head_only:
                self.wfile.write(b"not here\n")
            return
        status, content_type, body, extra = entry
        self.send_response(status)
        if content_type:
            self.send_header("Content-Type", content_type)
        for name, value in extra.items():
            self.send_header(name, value)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if not head_only:
            self.wfile.write(body)

    def do_GET(self):
        self._respond(head_only=False)

    def do_HEAD(self):
        self._respond(head_only=True)

    def log_message(self, *args):
        pass


@pytest.fixture(scope="session")
def fixture_server():
    huck = fixture_text("huck.txt").encode("utf-8")
    FixtureHandler.routes = {
        "/huck.txt": (200, "text/plain", huck, {
            "Last-Modified": "Tue, 23 Jun 1998 09:12:31 GMT"}),
        "/verse.txt": (200, "text/plain",
                       b"Line one of the verse\nLine two of the verse\n", {}),
        "/titus.html": (200, "text/html",
                        b"<html><head><title>Titus  Andronicus &amp; Friends\n</title>"
                        b"</head><body>some body text</body></html>", {}),
        "/untyped": (200, "", b"plain enough text\n", {}),
        "/doc.pdf": (200, "application/pdf", b"%PDF-1.4 fake\n", {}),
        "/empty": (200, "text/plain", b"", {}),
        "/guarded/secret.txt": (200, "text/plain", b"hidden\n", {}),
        "/robots.txt": (200, "text/plain",
                        b"User-agent: *\nDisallow: /guarded/\n", {}),
    }
    server = ThreadingHTTPServer(("127.0.0.1", 0), FixtureHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_port}"
    yield base
    server.shutdown()
    thread.join(timeout=5)


@pytest.fixture(autouse=True)
def _no_proxies(monkeypatch):
    for name in ("HTTP_PROXY", "HTTPS_PROXY", "http_proxy", "https_proxy"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("NO_PROXY", "*")
