"""On-demand typesetting of canonical text into PDF.

Produces self-contained PDF 1.4 with the base Type1 fonts only, no
stream compression, ASCII-safe string encoding and no timestamps, so the
same input always yields identical bytes.  Line breaking uses a fixed
per-character width model (advance = point size x per-font factor)
instead of real font metrics; the model makes wrapping verifiable
without shipping font files and errs wide enough to stay readable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TypesetError

PAGE_SIZES = {"letter": (612.0, 792.0)}

FONT_NAMES = {
    "helvetica": "Helvetica",
    "times": "Times-Roman",
    "courier": "Courier",
}

# per-character advance as a fraction of the point size
WIDTH_FACTORS = {
    "helvetica": 0.52,
    "times": 0.50,
    "courier": 0.60,
}

FOOTER_SIZE = 10.0


@dataclass(frozen=True)
class TypesetOptions:
    font: str = "times"
    size_pt: float = 12.0
    page: str = "letter"
    margins_pt: float = 72.0
    line_spacing: float = 1.2

    def validate(self) -> None:
        if self.font not in FONT_NAMES:
            raise TypesetError(f"unknown font {self.font!r}; choose from {sorted(FONT_NAMES)}")
        if not 8 <= self.size_pt <= 24:
            raise TypesetError(f"font size must be within [8, 24], got {self.size_pt}")
        if self.page not in PAGE_SIZES:
            raise TypesetError(f"unsupported page size {self.page!r}")
        if self.line_spacing <= 0:
            raise TypesetError("line spacing must be positive")
        width, height = PAGE_SIZES[self.page]
        if self.margins_pt < 0 or width - 2 * self.margins_pt <= 0 \
                or height - 2 * self.margins_pt <= 0:
            raise TypesetError("margins leave no printable area")

    @property
    def char_width(self) -> float:
        return self.size_pt * WIDTH_FACTORS[self.font]

    @property
    def printable_width(self) -> float:
        return PAGE_SIZES[self.page][0] - 2 * self.margins_pt

    @property
    def line_height(self) -> float:
        return self.size_pt * self.line_spacing


def max_chars_per_line(options: TypesetOptions) -> int:
    return max(1, int(options.printable_width // options.char_width))


def wrap_paragraph(text: str, limit: int) -> list[str]:
    """Greedy word wrap by character count; oversized words are hard-broken."""
    words: list[str] = []
    for word in text.split():
        while len(word) > limit:
            words.append(word[:limit])
            word = word[limit:]
        if word:
            words.append(word)
    lines: list[str] = []
    current = ""
    for word in words:
        if not current:
            current = word
        elif len(current) + 1 + len(word) <= limit:
            current += " " + word
        else:
            lines.append(current)
            current = word
    if current:
        lines.append(current)
    return lines


def _paginate(paragraphs: list[list[str]], options: TypesetOptions) -> list[list[tuple[float, float, str]]]:
    """Place wrapped lines on pages; returns per-page (x, y, text) triples."""
    _, page_h = PAGE_SIZES[options.page]
    top = page_h - options.margins_pt - options.size_pt
    bottom = options.margins_pt
    x = options.margins_pt

    pages: list[list[tuple[float, float, str]]] = [[]]
    y = top
    placed_any = False
    for lines in paragraphs:
        if placed_any:
            y -= options.line_height  # blank line between paragraphs
        for line in lines:
            if y < bottom:
                pages.append([])
                y = top
            pages[-1].append((x, y, line))
            y -= options.line_height
            placed_any = True
    return pages


def _escape(text: str) -> bytes:
    """Latin-1 subset mapped into an ASCII-safe PDF string literal."""
    raw = text.encode("latin-1", errors="replace")
    out = bytearray()
    for byte in raw:
        if byte in (0x28, 0x29, 0x5C):  # ( ) backslash
            out += b"\\" + bytes([byte])
        elif 32 <= byte <= 126:
            out.append(byte)
        else:
            out += b"\\%03o" % byte
    return bytes(out)


def _fmt(value: float) -> str:
    s = f"{value:.2f}".rstrip("0").rstrip(".")
    return s if s else "0"


def typeset(canonical_text: str, options: TypesetOptions, title: str = "") -> bytes:
    """Render canonical text (plus an optional leading title) as PDF bytes."""
    options.validate()
    limit = max_chars_per_line(options)

    blocks = [b for b in canonical_text.split("\n\n") if b.strip()]
    paragraphs = []
    if title:
        paragraphs.append(wrap_paragraph(title, limit))
    paragraphs += [wrap_paragraph(" ".join(b.split("\n")), limit) for b in blocks]
    pages = _paginate(paragraphs, options)

    page_w, _ = PAGE_SIZES[options.page]
    streams: list[bytes] = []
    for number, placed in enumerate(pages, start=1):
        ops = [b"BT", b"/F1 %s Tf" % _fmt(options.size_pt).encode()]
        for x, y, line in placed:
            ops.append(b"1 0 0 1 %s %s Tm" % (_fmt(x).encode(), _fmt(y).encode()))
            ops.append(b"(%s) Tj" % _escape(line))
        # centered page number in the footer, width per the same model
        label = str(number)
        label_w = len(label) * FOOTER_SIZE * WIDTH_FACTORS[options.font]
        fx = (page_w - label_w) / 2
        fy = options.margins_pt / 2
        ops.append(b"/F1 %s Tf" % _fmt(FOOTER_SIZE).encode())
        ops.append(b"1 0 0 1 %s %s Tm" % (_fmt(fx).encode(), _fmt(fy).encode()))
        ops.append(b"(%s) Tj" % _escape(label))
        ops.append(b"ET")
        streams.append(b"\n".join(ops) + b"\n")

    return _assemble(streams, options, title)


def _assemble(streams: list[bytes], options: TypesetOptions, title: str) -> bytes:
    page_w, page_h = PAGE_SIZES[options.page]
    n_pages = len(streams)
    # object layout: 1 catalog, 2 pages, 3 font, 4 info,
    # then per page: 5+2i page, 6+2i content stream
    first_page_obj = 5
    objects: dict[int, bytes] = {}
    kids = " ".join(f"{first_page_obj + 2 * i} 0 R" for i in range(n_pages))
    objects[1] = b"<< /Type /Catalog /Pages 2 0 R >>"
    objects[2] = (
        f"<< /Type /Pages /Kids [{kids}] /Count {n_pages} >>".encode()
    )
    objects[3] = (
        b"<< /Type /Font /Subtype /Type1 /BaseFont /"
        + FONT_NAMES[options.font].encode()
        + b" /Encoding /WinAnsiEncoding >>"
    )
    objects[4] = b"<< /Title (" + _escape(title) + b") /Producer (lectern) >>"
    media = f"[0 0 {_fmt(page_w)} {_fmt(page_h)}]".encode()
    for i, stream in enumerate(streams):
        page_obj = first_page_obj + 2 * i
        objects[page_obj] = (
            b"<< /Type /Page /Parent 2 0 R /MediaBox " + media
            + b" /Resources << /Font << /F1 3 0 R >> >> /Contents "
            + f"{page_obj + 1} 0 R >>".encode()
        )
        objects[page_obj + 1] = (
            b"<< /Length %d >>\nstream\n" % len(stream) + stream + b"endstream"
        )

    buf = bytearray(b"%PDF-1.4\n")
    offsets: dict[int, int] = {}
    for num in sorted(objects):
        offsets[num] = len(buf)
        buf += b"%d 0 obj\n" % num + objects[num] + b"\nendobj\n"
    xref_at = len(buf)
    count = len(objects) + 1
    buf += b"xref\n0 %d\n" % count
    buf += b"0000000000 65535 f \n"
    for num in sorted(objects):
        buf += b"%010d 00000 n \n" % offsets[num]
    buf += (
        b"trailer\n<< /Size %d /Root 1 0 R /Info 4 0 R >>\nstartxref\n%d\n%%%%EOF"
        % (count, xref_at)
    )
    return bytes(buf)
