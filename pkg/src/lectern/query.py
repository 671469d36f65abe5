"""Search expression parsing.

The grammar is deliberately flat: whitespace-separated atoms combined
left to right by AND/OR/NOT (recognized case-insensitively when standing
alone), double-quoted spans as phrases, a trailing ``*`` for right
truncation, and an optional ``field:`` prefix.  Nesting is unsupported;
parentheses are rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import QueryError
from .textproc import tokenize

FIELDS = ("title", "author", "subject", "genre", "any")
CONNECTIVES = ("and", "or", "not")
SORTS = ("relevance", "position")

MIN_TRUNCATION_PREFIX = 2


@dataclass(frozen=True)
class Term:
    text: str
    field: str = "any"


@dataclass(frozen=True)
class Truncation:
    prefix: str
    field: str = "any"


@dataclass(frozen=True)
class Phrase:
    tokens: tuple[str, ...]
    field: str = "any"


Atom = Term | Truncation | Phrase


@dataclass(frozen=True)
class Clause:
    connective: str  # and | or | not
    atom: Atom


@dataclass(frozen=True)
class Query:
    clauses: tuple[Clause, ...]
    case_sensitive: bool = False
    stemmed: bool = False
    sort: str = "relevance"

    def with_flags(self, *, case_sensitive: bool | None = None,
                   stemmed: bool | None = None, sort: str | None = None) -> "Query":
        q = self
        if case_sensitive is not None:
            q = replace(q, case_sensitive=case_sensitive)
        if stemmed is not None:
            q = replace(q, stemmed=stemmed)
        if sort is not None:
            if sort not in SORTS:
                raise QueryError(f"unknown sort order {sort!r}", code="bad-sort")
            q = replace(q, sort=sort)
        return q


def _lex(text: str) -> list[tuple[str, str | None, str]]:
    """Produce (kind, field, payload) items; kind is conn|bare|quoted."""
    items: list[tuple[str, str | None, str]] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        field = None
        # optional field prefix, only just before a bare word or quote
        for candidate in FIELDS:
            prefix = candidate + ":"
            if text[i:i + len(prefix)].lower() == prefix:
                field = candidate
                i += len(prefix)
                break
        else:
            colon = text.find(":", i)
            space = n
            for j in range(i, n):
                if text[j].isspace() or text[j] == '"':
                    space = j
                    break
            if 0 <= colon < space:
                raise QueryError(
                    f"unknown field {text[i:colon]!r}", code="unknown-field")
        if field is not None and (i >= n or text[i].isspace()):
            raise QueryError(f"field {field}: has no search text", code="empty-atom")
        if i < n and text[i] == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise QueryError("unbalanced quote", code="unbalanced-quote")
            items.append(("quoted", field, text[i + 1:end]))
            i = end + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] != '"':
            j += 1
        word = text[i:j]
        i = j
        if "(" in word or ")" in word:
            raise QueryError("nested queries are not supported", code="unsupported-nesting")
        if field is None and word.lower() in CONNECTIVES:
            items.append(("conn", None, word.lower()))
        elif word:
            items.append(("bare", field, word))
    return items


def _atom_from_bare(word: str, field: str | None) -> Atom:
    field = field or "any"
    if word.endswith("*"):
        prefix_tokens = tokenize(word[:-1], case_sensitive=True)
        prefix = prefix_tokens[0] if prefix_tokens else ""
        if len(prefix) < MIN_TRUNCATION_PREFIX:
            raise QueryError(
                f"truncation prefix must be at least {MIN_TRUNCATION_PREFIX} "
                f"characters, got {word!r}", code="short-truncation")
        return Truncation(prefix=prefix, field=field)
    tokens = tokenize(word, case_sensitive=True)
    if not tokens:
        raise QueryError(f"no searchable text in {word!r}", code="empty-atom")
    if len(tokens) == 1:
        return Term(text=tokens[0], field=field)
    # punctuation-joined words ("fish-belly") search as an adjacent phrase
    return Phrase(tokens=tuple(tokens), field=field)


def _atom_from_quoted(span: str, field: str | None) -> Atom:
    field = field or "any"
    tokens = tokenize(span, case_sensitive=True)
    if not tokens:
        raise QueryError("empty phrase", code="empty-atom")
    if len(tokens) == 1:
        return Term(text=tokens[0], field=field)
    return Phrase(tokens=tuple(tokens), field=field)


def parse_query(input_text: str) -> Query:
    """Parse a search expression into a flat clause list."""
    if not input_text or not input_text.strip():
        raise QueryError("empty query", code="empty-query")
    items = _lex(input_text)

    clauses: list[Clause] = []
    pending: str | None = None  # connective awaiting its atom
    for kind, field, payload in items:
        if kind == "conn":
            if pending is None:
                if payload in ("and", "or") and not clauses:
                    raise QueryError(
                        f"query may not begin with {payload.upper()}",
                        code="dangling-connective")
                pending = payload
            elif pending == "and" and payload == "not":
                pending = "not"  # AND NOT collapses to the not connective
            else:
                raise QueryError(
                    f"connective {payload.upper()} may not follow "
                    f"{pending.upper()}", code="dangling-connective")
            continue
        atom = _atom_from_bare(payload, field) if kind == "bare" \
            else _atom_from_quoted(payload, field)
        clauses.append(Clause(connective=pending or "and", atom=atom))
        pending = None
    if pending is not None:
        raise QueryError(
            f"query ends with dangling {pending.upper()}", code="dangling-connective")
    if not clauses:
        raise QueryError("empty query", code="empty-query")
    return Query(clauses=tuple(clauses))
