"""Catalogue records, authority lists, vocabularies and collection policy.

A record is the flat field/value description of one archived text.  The
serialized form is line oriented: one "Field-Name: value" per line,
list fields repeated, values continued across lines by indenting the
continuation exactly one space, records in a multi-record file separated
by a single blank line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import InvalidMediaType, TemplateParseError

TEMPLATE_TYPES = ("DOCUMENT",)
REFORMAT_METHODS = ("already-delimited", "add-blank-lines")
LICENSES = ("public-domain", "free", "restricted")

DEFAULT_COLLECTIONS = ("American", "English", "Western philosophy")

# Category allowlists for the format-preference ladder.  The ladder ranks
# whole categories; these pin the concrete media types in each one.
COMPRESSED_TYPES = frozenset({"application/gzip", "application/zip"})
WORD_PROCESSOR_TYPES = frozenset({"application/msword", "application/rtf"})
FORBIDDEN_TYPES = frozenset({"application/pdf", "application/x-pdf"})

_MEDIA_TYPE_RE = re.compile(r"^[a-z0-9][a-z0-9!#$&^_.+-]*/[a-z0-9][a-z0-9!#$&^_.+-]*$", re.I)
_DIRECTORY_RE = re.compile(r"^(?P<root>.+) - (?P<start>\d{3,4})-(?P<end>\d{3,4})$")


@dataclass(frozen=True)
class TemplateRecord:
    id: int
    title: str
    url: str
    directory: str
    authors: tuple[str, ...]
    mime_type: str = "text/plain"
    template_type: str = "DOCUMENT"
    reformat_method: str = "already-delimited"
    subtitle: str | None = None
    alternate_title: str | None = None
    author_statement: str | None = None
    year_conceived: int = 0
    publisher: str | None = None
    year_published: int = 0
    proxy_url: str | None = None
    size_bytes: int = 0
    subjects: tuple[str, ...] = ()
    genres: tuple[str, ...] = ()
    note: str | None = None


@dataclass
class AuthorityList:
    """Controlled list of canonical name forms (author names inverted)."""

    kind: str  # author | publisher | time-period
    entries: dict[str, str] = field(default_factory=dict)  # key -> display

    def resolve(self, key: str) -> bool:
        return key in self.entries

    def add(self, key: str, display: str | None = None) -> None:
        if not key:
            raise ValueError("authority key must be nonempty")
        self.entries[key] = display or key

    def save(self, path: Path) -> None:
        lines = [f"# lectern-authority v1 kind={self.kind}"]
        lines += [f"{k}\t{v}" for k, v in self.entries.items()]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path, kind: str) -> "AuthorityList":
        lst = cls(kind=kind)
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line or line.startswith("#"):
                continue
            key, _, display = line.partition("\t")
            lst.entries[key] = display or key
        return lst


@dataclass
class Vocabulary:
    kind: str  # subject | genre
    terms: dict[str, None] = field(default_factory=dict)  # ordered set

    def resolve(self, term: str) -> bool:
        return term in self.terms

    def add(self, term: str) -> None:
        if not term:
            raise ValueError("vocabulary term must be nonempty")
        self.terms[term] = None

    def save(self, path: Path) -> None:
        lines = [f"# lectern-vocabulary v1 kind={self.kind}"]
        lines += list(self.terms)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path, kind: str) -> "Vocabulary":
        voc = cls(kind=kind)
        for line in path.read_text(encoding="utf-8").splitlines():
            if line and not line.startswith("#"):
                voc.terms[line] = None
        return voc


# -- collection policy --------------------------------------------------------

@dataclass(frozen=True)
class PolicyDecision:
    accepted: bool
    preference_rank: int | None
    reasons: tuple[str, ...] = ()


def _base_media_type(mime_type: str) -> str:
    base = mime_type.split(";", 1)[0].strip().lower()
    if not _MEDIA_TYPE_RE.match(base):
        raise InvalidMediaType(f"malformed media type: {mime_type!r}")
    return base


def evaluate_policy(
    mime_type: str,
    license: str,
    complete: bool,
    *,
    compressed_types: frozenset[str] = COMPRESSED_TYPES,
    word_processor_types: frozenset[str] = WORD_PROCESSOR_TYPES,
) -> PolicyDecision:
    """Apply the collection policy to a candidate text.

    Plain text is preferred over HTML, HTML over compressed archives,
    compressed over word-processor output; unalterable formats (the PDF
    family) are never collected, nor are restricted or incomplete works.
    """
    base = _base_media_type(mime_type)
    if license not in LICENSES:
        raise ValueError(f"unknown license: {license!r}")

    reasons: list[str] = []
    if license == "restricted":
        reasons.append("license")
    if not complete:
        reasons.append("incomplete")
    if base in FORBIDDEN_TYPES:
        reasons.append("format-unalterable")

    rank: int | None = None
    if base == "text/plain":
        rank = 1
    elif base == "text/html":
        rank = 2
    elif base in compressed_types:
        rank = 3
    elif base in word_processor_types:
        rank = 4
    elif base not in FORBIDDEN_TYPES:
        reasons.append("format-unrecognized")

    if reasons:
        return PolicyDecision(accepted=False, preference_rank=None, reasons=tuple(reasons))
    return PolicyDecision(accepted=True, preference_rank=rank)


# -- validation ----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    field: str
    code: str
    message: str


def validate_record(
    record: TemplateRecord,
    authorities: dict[str, AuthorityList],
    vocabularies: dict[str, Vocabulary],
    collections: tuple[str, ...] = DEFAULT_COLLECTIONS,
) -> list[Violation]:
    """Check every record invariant; an empty report means valid."""
    out: list[Violation] = []

    def bad(field_name: str, code: str, message: str) -> None:
        out.append(Violation(field_name, code, message))

    if not isinstance(record.id, int) or record.id <= 0:
        bad("id", "not-positive", f"id must be a positive integer, got {record.id!r}")
    if not record.title or not record.title.strip():
        bad("title", "empty", "title must be nonempty")
    if not record.url:
        bad("url", "empty", "url must be nonempty")

    authors = authorities.get("author", AuthorityList("author"))
    if not record.authors:
        bad("authors", "empty", "at least one author is required")
    for key in record.authors:
        if not authors.resolve(key):
            bad("authors", "unknown-key", f"author {key!r} not in authority list")
    if record.publisher is not None:
        publishers = authorities.get("publisher", AuthorityList("publisher"))
        if not publishers.resolve(record.publisher):
            bad("publisher", "unknown-key", f"publisher {record.publisher!r} not in authority list")

    subjects = vocabularies.get("subject", Vocabulary("subject"))
    for term in record.subjects:
        if not subjects.resolve(term):
            bad("subjects", "unknown-term", f"subject {term!r} not in vocabulary")
    genres = vocabularies.get("genre", Vocabulary("genre"))
    for term in record.genres:
        if not genres.resolve(term):
            bad("genres", "unknown-term", f"genre {term!r} not in vocabulary")

    try:
        base = _base_media_type(record.mime_type)
        if base in FORBIDDEN_TYPES:
            bad("mime_type", "forbidden-format", f"{base} is never collected")
    except InvalidMediaType:
        bad("mime_type", "malformed", f"malformed media type {record.mime_type!r}")

    if record.template_type not in TEMPLATE_TYPES:
        bad("template_type", "unknown", f"unsupported template type {record.template_type!r}")
    if record.reformat_method not in REFORMAT_METHODS:
        bad("reformat_method", "unknown", f"unsupported reformat method {record.reformat_method!r}")

    for name, year in (("year_conceived", record.year_conceived),
                       ("year_published", record.year_published)):
        if not isinstance(year, int) or year < 0 or year > 9999:
            bad(name, "out-of-range", f"{name} must be 0 (unknown) or a year, got {year!r}")
    if not isinstance(record.size_bytes, int) or record.size_bytes < 0:
        bad("size_bytes", "negative", "size must be a nonnegative integer")

    m = _DIRECTORY_RE.match(record.directory or "")
    if m:
        if m.group("root") not in collections:
            bad("directory", "unknown-collection",
                f"collection {m.group('root')!r} is not configured")
        elif int(m.group("start")) > int(m.group("end")):
            bad("directory", "bad-period", "period start exceeds end")
    elif record.directory not in collections:
        bad("directory", "bad-pattern",
            f"directory {record.directory!r} is neither '<Collection> - <start>-<end>' "
            "nor a configured collection root")

    return out


# -- archive layout ------------------------------------------------------------

def slugify(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")


def archive_path_for(record: TemplateRecord) -> str:
    """Stable relative path for the canonical text of a record."""
    return f"{slugify(record.directory)}/{record.id}-{slugify(record.title) or 'untitled'}.txt"


# -- template serialization ------------------------------------------------------

# (field name, attribute, kind); order fixes the rendered layout
_FIELDS = (
    ("Template-Type", "template_type", "scalar"),
    ("ID", "id", "int"),
    ("Title", "title", "scalar"),
    ("Subtitle", "subtitle", "optional"),
    ("Alternate-Title", "alternate_title", "optional"),
    ("Author", "authors", "list"),
    ("Author-Statement", "author_statement", "optional"),
    ("Year-Conceived", "year_conceived", "int"),
    ("Publisher", "publisher", "optional"),
    ("Year-Published", "year_published", "int"),
    ("URL", "url", "scalar"),
    ("Proxy-URL", "proxy_url", "optional"),
    ("Size", "size_bytes", "int"),
    ("MIME-Type", "mime_type", "scalar"),
    ("Subject", "subjects", "list"),
    ("Genre", "genres", "list"),
    ("Directory", "directory", "scalar"),
    ("Reformat-Method", "reformat_method", "scalar"),
    ("Note", "note", "optional"),
)
_BY_NAME = {name: (attr, kind) for name, attr, kind in _FIELDS}
_REQUIRED = tuple(n for n, _, k in _FIELDS if k in ("scalar", "int"))
_FIELD_LINE_RE = re.compile(r"^([A-Za-z][A-Za-z-]*): ?(.*)$", re.S)


def _emit(name: str, value: str, lines: list[str]) -> None:
    parts = value.split("\n")
    lines.append(f"{name}: {parts[0]}")
    lines.extend(" " + part for part in parts[1:])


def render_template(record: TemplateRecord) -> str:
    lines: list[str] = []
    for name, attr, kind in _FIELDS:
        value = getattr(record, attr)
        if kind == "list":
            for item in value:
                _emit(name, item, lines)
        elif kind == "optional":
            if value is not None:
                _emit(name, value, lines)
        elif kind == "int":
            _emit(name, str(value), lines)
        else:
            _emit(name, value, lines)
    return "\n".join(lines) + "\n"


def parse_template(text: str) -> TemplateRecord:
    records = parse_templates(text)
    if len(records) != 1:
        raise TemplateParseError(
            f"expected exactly one record, found {len(records)}", code="record-count")
    return records[0]


def parse_templates(text: str) -> list[TemplateRecord]:
    """Parse a template file: one or more records separated by blank lines."""
    records = []
    fields: list[tuple[str, str]] | None = None
    for raw in text.split("\n"):
        if raw == "":
            if fields:
                records.append(_build_record(fields))
                fields = None
            continue
        if raw.startswith(" "):
            if not fields:
                raise TemplateParseError(
                    "continuation line before any field", code="orphan-continuation")
            name, value = fields[-1]
            fields[-1] = (name, value + "\n" + raw[1:])
            continue
        m = _FIELD_LINE_RE.match(raw)
        if not m:
            raise TemplateParseError(f"unparseable line: {raw!r}", code="bad-line")
        name = m.group(1)
        if name not in _BY_NAME:
            raise TemplateParseError(f"unknown field name: {name!r}", code="unknown-field")
        if fields is None:
            fields = []
        fields.append((name, m.group(2)))
    if fields:
        records.append(_build_record(fields))
    return records


def _build_record(pairs: list[tuple[str, str]]) -> TemplateRecord:
    values: dict[str, object] = {"authors": [], "subjects": [], "genres": []}
    seen: set[str] = set()
    for name, raw in pairs:
        attr, kind = _BY_NAME[name]
        if kind == "list":
            values[attr].append(raw)
            continue
        if name in seen:
            raise TemplateParseError(f"duplicate field: {name}", code="duplicate-field")
        seen.add(name)
        if kind == "int":
            try:
                values[attr] = int(raw)
            except ValueError:
                raise TemplateParseError(
                    f"field {name} expects an integer, got {raw!r}", code="invalid-value")
        else:
            values[attr] = raw
    for name in _REQUIRED:
        attr, _ = _BY_NAME[name]
        if attr not in values:
            raise TemplateParseError(f"missing required field: {name}", code="missing-required-field")
    if not values["authors"]:
        raise TemplateParseError("missing required field: Author", code="missing-required-field")
    for key in ("authors", "subjects", "genres"):
        values[key] = tuple(values[key])
    return TemplateRecord(**values)  # type: ignore[arg-type]


def render_templates(records: list[TemplateRecord]) -> str:
    return "\n".join(render_template(r) for r in records)
