"""Administrator command line.

Exit codes: 0 success, 1 operational failure, 2 usage error.  Diagnostics
go to stderr; data (records, reports, manifests) goes to stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import requests

from .config import ServiceConfig, load_config
from .errors import LecternError
from .harvest import Harvester, IngestOverrides, build_instant_library
from .records import render_template, validate_record
from .storage import CatalogueStore


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="JSON config file (or set LECTERN_* env vars)")
    parser.add_argument("--data-root", metavar="DIR",
                        help="data root directory (overrides config)")


def _resolve_config(args: argparse.Namespace) -> ServiceConfig:
    if args.config:
        config = load_config(args.config)
        if args.data_root:
            config.data_root = Path(args.data_root)
        return config
    if args.data_root:
        return ServiceConfig(data_root=Path(args.data_root))
    import os
    if os.environ.get("LECTERN_DATA_ROOT"):
        return load_config(None)
    raise LecternError("no data root: pass --data-root, --config or LECTERN_DATA_ROOT",
                       code="config")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lectern", description="digital-text catalogue administration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    _add_config_args(p)

    p = sub.add_parser("ingest", help="fetch, catalogue and index one document")
    _add_config_args(p)
    p.add_argument("url", help="http(s) location of the text")
    p.add_argument("--author", action="append", default=[], metavar="NAME",
                   help="author in inverted form, e.g. 'Twain, Mark' (repeatable)")
    p.add_argument("--directory", required=True, metavar="DIR",
                   help="collection directory, e.g. 'American - 1800-1899'")
    p.add_argument("--reformat", choices=("already-delimited", "add-blank-lines"),
                   default="already-delimited", help="paragraph delimitation method")
    p.add_argument("--title", help="override the extracted title")
    p.add_argument("--publisher")
    p.add_argument("--subject", action="append", default=[], metavar="TERM")
    p.add_argument("--genre", action="append", default=[], metavar="TERM")
    p.add_argument("--note")
    p.add_argument("--year-conceived", type=int, default=0)
    p.add_argument("--year-published", type=int, default=0)
    p.add_argument("--id", type=int, help="record id (default: next free id)")
    p.add_argument("--license", choices=("public-domain", "free", "restricted"),
                   default="public-domain")
    p.add_argument("--incomplete", action="store_true",
                   help="declare the work incomplete (will be rejected)")
    p.add_argument("--yes", action="store_true", help="skip the confirmation prompt")

    p = sub.add_parser("reindex", help="rebuild all indexes from archived texts")
    _add_config_args(p)

    p = sub.add_parser("validate", help="validate every catalogued record")
    _add_config_args(p)

    p = sub.add_parser("check-links", help="probe every record's original URL")
    _add_config_args(p)

    p = sub.add_parser("export", help="write an instant-library zip for a collection")
    _add_config_args(p)
    p.add_argument("collection", help="collection prefix, e.g. 'american'")
    p.add_argument("--out", required=True, metavar="ZIP", help="output zip path")

    p = sub.add_parser("stats", help="show hit statistics from a running service")
    _add_config_args(p)
    p.add_argument("--url", metavar="BASE", help="service base URL (default: config public_base)")

    return parser


def cmd_serve(args) -> int:
    from .service import run
    config = _resolve_config(args)
    run(config)
    return 0


def cmd_ingest(args) -> int:
    config = _resolve_config(args)
    store = CatalogueStore(config.data_root)
    harvester = Harvester(store, timeout=config.fetch_timeout)
    overrides = IngestOverrides(
        authors=tuple(args.author),
        directory=args.directory,
        reformat_method=args.reformat,
        title=args.title,
        publisher=args.publisher,
        subjects=tuple(args.subject),
        genres=tuple(args.genre),
        note=args.note,
        year_conceived=args.year_conceived,
        year_published=args.year_published,
        record_id=args.id,
        license=args.license,
        complete=not args.incomplete,
    )
    if not args.yes:
        draft, _ = harvester.prepare_draft(args.url, overrides)
        print("About to ingest:", file=sys.stderr)
        print(render_template(draft.record), file=sys.stderr)
        try:
            answer = input("Ingest this record? [y/N] ")
        except EOFError:
            answer = ""
        if answer.strip().lower() not in ("y", "yes"):
            print("aborted", file=sys.stderr)
            return 1
    record, path = harvester.ingest(args.url, overrides)
    print(render_template(record), end="")
    print(f"archived at {path}", file=sys.stderr)
    return 0


def cmd_reindex(args) -> int:
    config = _resolve_config(args)
    store = CatalogueStore(config.data_root)
    docs, paragraphs = store.reindex()
    print(f"reindexed {docs} documents, {paragraphs} paragraphs")
    return 0


def cmd_validate(args) -> int:
    config = _resolve_config(args)
    store = CatalogueStore(config.data_root)
    total = 0
    for record in sorted(store.records.values(), key=lambda r: r.id):
        violations = validate_record(record, store.authorities,
                                     store.vocabularies, store.collections)
        for violation in violations:
            print(f"{record.id}\t{violation.field}\t{violation.code}\t{violation.message}")
        total += len(violations)
    if total:
        print(f"{total} violation(s) found", file=sys.stderr)
        return 1
    print("all records valid")
    return 0


def cmd_check_links(args) -> int:
    config = _resolve_config(args)
    store = CatalogueStore(config.data_root)
    harvester = Harvester(store, timeout=config.fetch_timeout)
    for row in harvester.check_links():
        status = row.status if row.status is not None else "-"
        print(f"{'ok' if row.ok else 'DEAD'}\t{status}\t{row.url}\t{row.checked_at}")
    return 0


def cmd_export(args) -> int:
    config = _resolve_config(args)
    store = CatalogueStore(config.data_root)
    archive, manifest = build_instant_library(store, args.collection, config.public_base)
    out = Path(args.out)
    out.write_bytes(archive)
    out.with_suffix(".manifest").write_text(manifest, encoding="utf-8")
    print(manifest, end="")
    print(f"wrote {out} ({len(archive)} bytes)", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    config = _resolve_config(args)
    base = args.url or config.public_base
    try:
        resp = requests.get(f"{base}/stats", timeout=10)
        resp.raise_for_status()
    except requests.RequestException as exc:
        print(f"could not reach {base}/stats: {exc}", file=sys.stderr)
        return 1
    hits = resp.json().get("hits", {})
    for day in sorted(hits):
        for endpoint in sorted(hits[day]):
            print(f"{day}\t{endpoint}\t{hits[day][endpoint]}")
    return 0


_COMMANDS = {
    "serve": cmd_serve,
    "ingest": cmd_ingest,
    "reindex": cmd_reindex,
    "validate": cmd_validate,
    "check-links": cmd_check_links,
    "export": cmd_export,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except LecternError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
