"""Structural PDF checks and text extraction for the typesetting tests.

A small, independent reader for the subset of PDF the generator emits:
verifies header/trailer/xref integrity and pulls out every text-showing
operation with its position and font size.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class TextOp:
    page: int
    x: float
    y: float
    size: float
    text: str


@dataclass
class ParsedPdf:
    object_offsets: dict[int, int]
    pages: int
    ops: list[TextOp]

    def page_ops(self, page: int) -> list[TextOp]:
        return [op for op in self.ops if op.page == page]

    def body_ops(self) -> list[TextOp]:
        """Everything except each page's final op (the footer page number)."""
        out = []
        for page in range(1, self.pages + 1):
            out.extend(self.page_ops(page)[:-1])
        return out

    def footer_ops(self) -> list[TextOp]:
        return [self.page_ops(page)[-1] for page in range(1, self.pages + 1)]


def _unescape(raw: bytes) -> str:
    out = []
    i = 0
    while i < len(raw):
        b = raw[i]
        if b == 0x5C:  # backslash
            nxt = raw[i + 1:i + 2]
            if nxt.isdigit():
                digits = raw[i + 1:i + 4]
                out.append(int(digits, 8))
                i += 4
            else:
                out.append(nxt[0])
                i += 2
        else:
            out.append(b)
            i += 1
    return bytes(out).decode("latin-1")


def check_structure(data: bytes) -> ParsedPdf:
    """Assert-style validation; raises AssertionError with a reason."""
    assert data.startswith(b"%PDF-1.4"), "missing %PDF-1.4 header"
    assert data.endswith(b"%%EOF"), "missing %%EOF trailer"

    at = data.rfind(b"startxref")
    assert at >= 0, "missing startxref"
    xref_offset = int(data[at:].split(b"\n")[1])
    assert data[xref_offset:xref_offset + 4] == b"xref", "startxref points away from xref"

    lines = data[xref_offset:].split(b"\n")
    start, count = (int(v) for v in lines[1].split())
    assert start == 0, "xref must start at object 0"
    offsets: dict[int, int] = {}
    for index in range(1, count):
        entry = lines[2 + index]
        offset = int(entry[:10])
        kind = entry[17:18]
        assert kind == b"n", f"object {index} not an in-use entry"
        marker = b"%d 0 obj" % index
        assert data[offset:offset + len(marker)] == marker, \
            f"xref offset for object {index} does not point at it"
        offsets[index] = offset

    ops: list[TextOp] = []
    page = 0
    for match in re.finditer(rb"<< /Length (\d+) >>\nstream\n", data):
        length = int(match.group(1))
        body = data[match.end():match.end() + length]
        assert data[match.end() + length:].startswith(b"endstream"), "bad stream length"
        page += 1
        size = x = y = 0.0
        for line in body.split(b"\n"):
            parts = line.split()
            if line.endswith(b"Tf") and len(parts) == 3:
                size = float(parts[1])
            elif line.endswith(b"Tm") and len(parts) == 7:
                x, y = float(parts[4]), float(parts[5])
            elif line.endswith(b"Tj"):
                literal = re.match(rb"\((.*)\) Tj$", line, re.S)
                assert literal, f"unparseable text op: {line!r}"
                ops.append(TextOp(page=page, x=x, y=y, size=size,
                                  text=_unescape(literal.group(1))))

    n_pages = data.count(b"/Type /Page ")
    assert n_pages == page, "content stream count differs from page count"
    return ParsedPdf(object_offsets=offsets, pages=page, ops=ops)
