"""Paragraph delimitation, segmentation and tokenization.

Canonical text is UTF-8 with LF line endings where paragraphs are
separated by exactly one blank line; a paragraph may span several lines
(hard-wrapped prose) but never contains a blank one.  The canonical file
is the unit every other subsystem works from: segmentation, indexing and
the instant-library archives all reproduce it byte for byte.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .errors import EncodingError

REFORMAT_METHODS = ("already-delimited", "add-blank-lines")

# Characters apostrophe-like enough to keep inside a token ("warn't").
_APOSTROPHES = {"'", "’"}


@dataclass(frozen=True)
class Paragraph:
    ordinal: int
    byte_offset: int
    text: str


@dataclass(frozen=True)
class ParagraphizedText:
    doc_id: int
    paragraphs: tuple[Paragraph, ...]

    def __len__(self) -> int:
        return len(self.paragraphs)

    def texts(self) -> list[str]:
        return [p.text for p in self.paragraphs]


def decode_utf8(body: bytes) -> str:
    try:
        return body.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"body is not valid UTF-8: {exc}") from None


def reformat(raw_text: str | bytes, method: str) -> str:
    """Rewrite raw text into canonical blank-line-delimited form.

    already-delimited: normalize line endings, trim trailing whitespace per
    line, and collapse every run of blank lines down to a single one.
    add-blank-lines: additionally make each nonempty source line its own
    paragraph, which keeps verse one record per line.
    """
    if method not in REFORMAT_METHODS:
        raise ValueError(f"unknown reformat method: {method!r}")
    if isinstance(raw_text, bytes):
        raw_text = decode_utf8(raw_text)
    text = raw_text.replace("\r\n", "\n").replace("\r", "\n")
    lines = [line.rstrip() for line in text.split("\n")]

    blocks: list[str] = []
    if method == "add-blank-lines":
        blocks = [line for line in lines if line]
    else:
        current: list[str] = []
        for line in lines:
            if line:
                current.append(line)
            elif current:
                blocks.append("\n".join(current))
                current = []
        if current:
            blocks.append("\n".join(current))

    if not blocks:
        return ""
    return "\n\n".join(blocks) + "\n"


def segment(canonical_text: str, doc_id: int) -> ParagraphizedText:
    """Split canonical text into ordered paragraph records with byte offsets."""
    if canonical_text == "":
        return ParagraphizedText(doc_id=doc_id, paragraphs=())
    body = canonical_text[:-1] if canonical_text.endswith("\n") else canonical_text
    paragraphs = []
    offset = 0
    for ordinal, block in enumerate(body.split("\n\n")):
        paragraphs.append(Paragraph(ordinal=ordinal, byte_offset=offset, text=block))
        offset += len(block.encode("utf-8")) + 2
    return ParagraphizedText(doc_id=doc_id, paragraphs=tuple(paragraphs))


def reassemble(paragraphized: ParagraphizedText) -> str:
    if not paragraphized.paragraphs:
        return ""
    return "\n\n".join(paragraphized.texts()) + "\n"


def _is_token_char(ch: str) -> bool:
    if ch in _APOSTROPHES:
        return True
    cat = unicodedata.category(ch)
    # letters, digits and combining marks (marks keep case-folding stable
    # for characters whose lowercase form decomposes, e.g. Turkish dotted I)
    return cat.startswith("L") or cat.startswith("M") or cat == "Nd"


def tokenize(text: str, case_sensitive: bool = False) -> list[str]:
    """Split text into tokens; position = list index.

    A token is a maximal run of letters, digits and apostrophes with
    leading/trailing apostrophes stripped; hyphens and all other
    punctuation separate tokens.  Folded to lowercase unless asked not to.
    """
    tokens: list[str] = []
    run: list[str] = []
    for ch in text:
        if _is_token_char(ch):
            run.append(ch)
        elif run:
            _flush(run, tokens)
            run = []
    if run:
        _flush(run, tokens)
    if not case_sensitive:
        tokens = [t.lower() for t in tokens]
    return tokens


def _flush(run: list[str], out: list[str]) -> None:
    token = "".join(run).strip("".join(_APOSTROPHES))
    if token:
        out.append(token)
