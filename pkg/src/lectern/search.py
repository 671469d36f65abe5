"""Query evaluation over the inverted indexes.

Boolean combination is strict left-to-right over the flat clause list
(NOT binds to the single following atom).  Content hits are scored with
tf-idf over the searched paragraph set, normalized by the square root of
paragraph length:

    score(p) = sum_t tf(t, p) * ln(1 + N / df(t)) / sqrt(len(p))

where t ranges over the canonical terms of p matched by non-negated
clauses, N is the number of paragraphs searched and df counts paragraphs
containing t.  Ties break by (doc id, ordinal) so rankings are total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotFoundError, QueryError
from .index import ContentIndex, MetadataIndex
from .query import Atom, Phrase, Query, Term, Truncation
from .records import TemplateRecord
from .stemmer import stem

EXCERPT_LENGTH = 70

OUTPUT_OPTIONS = ("titles", "titles-authors-links", "full-records")
NO_SUBJECTS_MARKER = "(No subjects supplied.)"
NO_GENRES_MARKER = "(No genres supplied.)"


@dataclass(frozen=True)
class ParagraphHit:
    doc_id: int
    ordinal: int
    score: float
    excerpt: str


class _TermSpace:
    """Query-time view of postings under one canonicalization.

    Raw postings are keyed by case-preserved tokens; this view folds case
    (unless the query is case-sensitive) and optionally maps terms to
    their stems, merging position lists whenever two raw tokens collapse
    onto the same canonical term.
    """

    def __init__(self, raw: dict[str, dict], case_sensitive: bool, stemmed: bool):
        self.case_sensitive = case_sensitive
        self.stemmed = stemmed
        folded: dict[str, dict] = {}
        for token, by_key in raw.items():
            name = token if case_sensitive else token.lower()
            if name in folded:
                folded[name] = _merge(folded[name], by_key)
            else:
                folded[name] = by_key
        self.folded = folded
        if stemmed:
            canon: dict[str, dict] = {}
            for token, by_key in folded.items():
                name = stem(token)
                if name in canon:
                    canon[name] = _merge(canon[name], by_key)
                else:
                    canon[name] = by_key
            self.canon = canon
        else:
            self.canon = folded

    def canon_term(self, text: str) -> str:
        folded = text if self.case_sensitive else text.lower()
        return stem(folded) if self.stemmed else folded

    def eval_atom(self, atom: Atom) -> dict[object, set[str]]:
        """Matching keys mapped to the canonical terms the atom matched."""
        if isinstance(atom, Term):
            name = self.canon_term(atom.text)
            by_key = self.canon.get(name, {})
            return {key: {name} for key in by_key}
        if isinstance(atom, Truncation):
            prefix = atom.prefix if self.case_sensitive else atom.prefix.lower()
            out: dict[object, set[str]] = {}
            # truncation compares prefixes on unstemmed tokens
            for token, by_key in self.folded.items():
                if token.startswith(prefix):
                    name = stem(token) if self.stemmed else token
                    for key in by_key:
                        out.setdefault(key, set()).add(name)
            return out
        if isinstance(atom, Phrase):
            names = [self.canon_term(t) for t in atom.tokens]
            first = self.canon.get(names[0])
            if first is None:
                return {}
            out = {}
            for key, positions in first.items():
                candidates = set(positions)
                for name in names[1:]:
                    following = self.canon.get(name, {}).get(key)
                    if not following:
                        candidates = set()
                        break
                    candidates = {p + 1 for p in candidates} & set(following)
                    if not candidates:
                        break
                if candidates:
                    out[key] = set(names)
            return out
        raise TypeError(f"unknown atom type: {atom!r}")

    def tf(self, term: str, key: object) -> int:
        return len(self.canon.get(term, {}).get(key, ()))

    def df(self, term: str) -> int:
        return len(self.canon.get(term, {}))


def _merge(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, positions in b.items():
        if key in out:
            out[key] = tuple(sorted(set(out[key]) | set(positions)))
        else:
            out[key] = positions
    return out


def _evaluate(query: Query, space: _TermSpace, universe: set) -> tuple[set, dict]:
    """Left-to-right boolean fold; returns (hits, per-key matched terms)."""
    acc: set | None = None
    matched_terms: dict[object, set[str]] = {}
    for clause in query.clauses:
        matches = space.eval_atom(clause.atom)
        keys = set(matches)
        if clause.connective == "not":
            acc = (universe - keys) if acc is None else acc - keys
            continue
        if acc is None:
            acc = keys
        elif clause.connective == "and":
            acc &= keys
        else:
            acc |= keys
        for key, terms in matches.items():
            matched_terms.setdefault(key, set()).update(terms)
    return acc or set(), matched_terms


# -- content search ------------------------------------------------------------

def search_content(indexes: list[ContentIndex], query: Query) -> list[ParagraphHit]:
    """Relevance-ranked paragraph hits across the selected documents."""
    if not indexes:
        raise QueryError("no documents selected", code="empty-selection")
    for clause in query.clauses:
        if clause.atom.field != "any":
            raise QueryError(
                f"content search does not support field-qualified clauses "
                f"({clause.atom.field}:)", code="unsupported-in-content")

    raw: dict[str, dict] = {}
    universe: set = set()
    token_counts: dict[tuple[int, int], int] = {}
    texts: dict[tuple[int, int], str] = {}
    for idx in indexes:
        for ordinal, text in enumerate(idx.paragraphs):
            key = (idx.doc_id, ordinal)
            universe.add(key)
            token_counts[key] = idx.token_counts[ordinal]
            texts[key] = text
        for token, by_para in idx.postings.items():
            table = raw.setdefault(token, {})
            for ordinal, positions in by_para.items():
                table[(idx.doc_id, ordinal)] = positions

    space = _TermSpace(raw, query.case_sensitive, query.stemmed)
    hits, matched_terms = _evaluate(query, space, universe)

    n_paragraphs = len(universe)
    scored: list[ParagraphHit] = []
    for key in hits:
        terms = matched_terms.get(key, ())
        score = 0.0
        if terms:
            weight = sum(
                space.tf(t, key) * math.log(1 + n_paragraphs / space.df(t))
                for t in terms
            )
            score = weight / math.sqrt(token_counts[key])
        doc_id, ordinal = key
        scored.append(ParagraphHit(
            doc_id=doc_id, ordinal=ordinal, score=score,
            excerpt=texts[key][:EXCERPT_LENGTH]))

    if query.sort == "position":
        scored.sort(key=lambda h: (h.doc_id, h.ordinal))
    else:
        scored.sort(key=lambda h: (-h.score, h.doc_id, h.ordinal))
    return scored


# -- metadata search -----------------------------------------------------------

def search_metadata(idx: MetadataIndex, query: Query, output: str = "titles-authors-links") -> list[dict]:
    """Fielded record search returning one of the three output shapes."""
    if output not in OUTPUT_OPTIONS:
        raise QueryError(f"unknown output option {output!r}", code="bad-output-option")

    universe = set(idx.records)
    spaces: dict[str, _TermSpace] = {}
    acc: set | None = None
    for clause in query.clauses:
        field_name = clause.atom.field
        if field_name not in spaces:
            spaces[field_name] = _TermSpace(
                idx.postings.get(field_name, {}), query.case_sensitive, query.stemmed)
        matches = spaces[field_name].eval_atom(clause.atom)
        keys = set(matches)
        if clause.connective == "not":
            acc = (universe - keys) if acc is None else acc - keys
        elif acc is None:
            acc = keys
        elif clause.connective == "and":
            acc &= keys
        else:
            acc |= keys

    hits = sorted(acc or set())
    return [_shape_record(idx.records[rid], output) for rid in hits]


def _shape_record(record: TemplateRecord, output: str) -> dict:
    shaped: dict = {"title": record.title, "original_url": record.url}
    if output == "titles":
        return shaped
    shaped["id"] = record.id
    shaped["authors"] = list(record.authors)
    shaped["links"] = {
        "original": record.url,
        "archived": f"/texts/{record.id}",
        "typeset": f"/texts/{record.id}/pdf",
        "content_search": f"/content-search?docs={record.id}",
    }
    if output == "titles-authors-links":
        return shaped
    shaped.update({
        "subtitle": record.subtitle,
        "alternate_title": record.alternate_title,
        "author_statement": record.author_statement,
        "publisher": record.publisher,
        "year_conceived": record.year_conceived,
        "year_published": record.year_published,
        "size_bytes": record.size_bytes,
        "mime_type": record.mime_type,
        "directory": record.directory,
        "note": record.note,
        "subjects": list(record.subjects) or NO_SUBJECTS_MARKER,
        "genres": list(record.genres) or NO_GENRES_MARKER,
    })
    return shaped


# -- adjacent-paragraph navigation ----------------------------------------------

def adjacent_paragraph(index: ContentIndex, ordinal: int, direction: str) -> tuple[int, str] | None:
    """The neighboring (ordinal, text), or None at a document boundary."""
    if direction not in ("next", "prev"):
        raise ValueError(f"direction must be next or prev, got {direction!r}")
    if not 0 <= ordinal < index.paragraph_count:
        raise NotFoundError(
            f"document {index.doc_id} has no paragraph {ordinal}", code="unknown-paragraph")
    target = ordinal + 1 if direction == "next" else ordinal - 1
    if not 0 <= target < index.paragraph_count:
        return None
    return target, index.paragraphs[target]


# -- index descriptor files ------------------------------------------------------

def descriptor_database_name(record: TemplateRecord) -> str:
    from .records import slugify
    return f"text-{record.id}-{slugify(record.title) or 'untitled'}"


def export_descriptor(record: TemplateRecord, service_base: str) -> str:
    """Line-oriented description of one document's content-search index."""
    lines: list[str] = []
    for name, value in (
        ("database", descriptor_database_name(record)),
        ("description", record.title),
        ("host", service_base),
        ("path", "/content-search"),
        ("doc-id", str(record.id)),
    ):
        parts = value.split("\n")
        lines.append(f"{name}: {parts[0]}")
        lines.extend(" " + p for p in parts[1:])
    return "\n".join(lines) + "\n"


def parse_descriptor(text: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    last: str | None = None
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith(" ") and last is not None:
            fields[last] += "\n" + line[1:]
            continue
        name, sep, value = line.partition(": ")
        if not sep:
            name, sep, value = line.partition(":")
        fields[name] = value
        last = name
    return fields
