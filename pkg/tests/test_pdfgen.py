import pytest

from lectern.errors import TypesetError
from lectern.pdfgen import (
    PAGE_SIZES,
    TypesetOptions,
    WIDTH_FACTORS,
    max_chars_per_line,
    typeset,
    wrap_paragraph,
)
from lectern.textproc import reformat

from conftest import fixture_text
from pdf_check import check_structure

HUCK = reformat(fixture_text("huck.txt"), "already-delimited")


def opts(font="helvetica", size=16.0, **kw):
    return TypesetOptions(font=font, size_pt=size, **kw)


class TestOptions:
    def test_defaults_valid(self):
        TypesetOptions().validate()

    @pytest.mark.parametrize("bad", [
        dict(font="comic-sans"),
        dict(size_pt=7.0),
        dict(size_pt=25.0),
        dict(page="a4"),
        dict(margins_pt=-1.0),
        dict(margins_pt=306.0),
        dict(line_spacing=0.0),
    ])
    def test_invalid_options(self, bad):
        with pytest.raises(TypesetError):
            TypesetOptions(**bad).validate()


class TestWrap:
    def test_wrap_respects_limit(self):
        for line in wrap_paragraph("the quick brown fox jumps over the lazy dog", 10):
            assert len(line) <= 10

    def test_long_word_hard_broken(self):
        lines = wrap_paragraph("a " + "x" * 25 + " b", 10)
        assert all(len(line) <= 10 for line in lines)
        assert "".join(lines).count("x") == 25

    def test_no_words_lost(self):
        text = "one two three four five six seven"
        assert " ".join(wrap_paragraph(text, 9)).split() == text.split()


class TestStructure:
    def test_empty_document_is_valid_single_page(self):
        pdf = typeset("", opts())
        assert pdf.startswith(b"%PDF-1.4")
        assert pdf.endswith(b"%%EOF")
        parsed = check_structure(pdf)
        assert parsed.pages == 1

    def test_deterministic_bytes(self):
        a = typeset(HUCK, opts(), title="Adventures Of Huckleberry Finn")
        b = typeset(HUCK, opts(), title="Adventures Of Huckleberry Finn")
        assert a == b

    def test_xref_offsets_point_at_objects(self):
        parsed = check_structure(typeset(HUCK, opts(), title="T"))
        assert parsed.object_offsets  # non-empty and each asserted inside

    @pytest.mark.parametrize("font", sorted(WIDTH_FACTORS))
    @pytest.mark.parametrize("size", [8.0, 12.0, 16.0, 24.0])
    def test_modeled_width_within_printable(self, font, size):
        options = opts(font=font, size=size)
        parsed = check_structure(typeset(HUCK, options, title="Width Check"))
        printable = options.printable_width
        for op in parsed.body_ops():
            width = len(op.text) * options.char_width
            assert width <= printable + 1e-9, (op.text, width, printable)

    def test_printable_width_is_468_at_defaults(self):
        assert opts().printable_width == 468.0

    def test_no_words_lost_in_layout(self):
        title = "Adventures Of Huckleberry Finn"
        options = opts()
        parsed = check_structure(typeset(HUCK, options, title=title))
        got = " ".join(op.text for op in parsed.body_ops()).split()
        wanted = (title + " " + " ".join(HUCK.split())).split()
        assert got == wanted

    def test_footer_page_numbers_sequential_and_centered(self):
        options = opts(size=24.0, font="courier")
        parsed = check_structure(typeset(HUCK * 3, options, title="T"))
        footers = parsed.footer_ops()
        assert [f.text for f in footers] == [str(n) for n in range(1, parsed.pages + 1)]
        page_w = PAGE_SIZES["letter"][0]
        for footer in footers:
            label_w = len(footer.text) * 10.0 * WIDTH_FACTORS["courier"]
            assert footer.x == pytest.approx((page_w - label_w) / 2, abs=0.01)

    def test_pagination_overflow_makes_more_pages(self):
        one = check_structure(typeset("short paragraph\n", opts()))
        many = check_structure(typeset(HUCK * 6, opts(size=24.0)))
        assert one.pages == 1
        assert many.pages > one.pages

    def test_lines_within_page_margins(self):
        options = opts(size=12.0, font="times")
        parsed = check_structure(typeset(HUCK * 2, options, title="T"))
        top = PAGE_SIZES["letter"][1] - options.margins_pt - options.size_pt
        for op in parsed.body_ops():
            assert options.margins_pt <= op.y <= top + 1e-9

    def test_latin1_replacement(self):
        pdf = typeset("naïve café — em\n", opts())
        parsed = check_structure(pdf)
        text = " ".join(op.text for op in parsed.body_ops())
        assert "naïve" in text and "café" in text
        assert "?" in text  # em dash is outside latin-1

    def test_invalid_options_raise_before_rendering(self):
        with pytest.raises(TypesetError):
            typeset("x", TypesetOptions(size_pt=99))


class TestWrapOracle:
    """Independent greedy re-wrap compared against the rendered lines."""

    @pytest.mark.parametrize("font,size", [("helvetica", 16.0), ("times", 8.0),
                                           ("courier", 24.0)])
    def test_layout_matches_independent_wrap(self, font, size):
        options = opts(font=font, size=size)
        limit = int((612 - 2 * 72) // (size * WIDTH_FACTORS[font]))
        parsed = check_structure(typeset(HUCK, options))

        expected: list[str] = []
        for block in HUCK.split("\n\n"):
            words = " ".join(block.split()).split()
            if not words:
                continue
            line = ""
            for word in words:
                while len(word) > limit:
                    if line:
                        expected.append(line)
                        line = ""
                    expected.append(word[:limit])
                    word = word[limit:]
                if not word:
                    continue
                if not line:
                    line = word
                elif len(line) + 1 + len(word) <= limit:
                    line += " " + word
                else:
                    expected.append(line)
                    line = word
            if line:
                expected.append(line)
        got = [op.text for op in parsed.body_ops()]
        assert got == expected
