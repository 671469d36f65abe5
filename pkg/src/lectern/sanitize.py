"""Allowlist HTML sanitizer for bookcase annotations.

Keeps a small set of formatting tags, drops everything else while
preserving the dropped tags' text, except script/style whose contents
are removed entirely.  Anchor tags keep only http(s) hrefs.  Output is
re-serialized with escaped text, so it is safe to embed as-is.
"""

from __future__ import annotations

import html
from html.parser import HTMLParser

ALLOWED_TAGS = {"p", "br", "em", "strong", "a", "ul", "ol", "li", "blockquote"}
VOID_TAGS = {"br"}
DROP_CONTENT_TAGS = {"script", "style"}


class _Sanitizer(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.out: list[str] = []
        self.open_tags: list[str] = []
        self.dropping = 0

    def handle_starttag(self, tag, attrs):
        if tag in DROP_CONTENT_TAGS:
            self.dropping += 1
            return
        if self.dropping or tag not in ALLOWED_TAGS:
            return
        rendered = "<" + tag
        if tag == "a":
            href = next((v for k, v in attrs if k == "href"), None)
            if href and href.lower().startswith(("http://", "https://")):
                rendered += f' href="{html.escape(href, quote=True)}"'
        rendered += ">"
        self.out.append(rendered)
        if tag not in VOID_TAGS:
            self.open_tags.append(tag)

    def handle_startendtag(self, tag, attrs):
        if tag in VOID_TAGS and not self.dropping:
            self.out.append(f"<{tag}>")
        elif tag in DROP_CONTENT_TAGS:
            pass
        elif tag in ALLOWED_TAGS and not self.dropping:
            self.handle_starttag(tag, attrs)
            self.handle_endtag(tag)

    def handle_endtag(self, tag):
        if tag in DROP_CONTENT_TAGS:
            self.dropping = max(0, self.dropping - 1)
            return
        if self.dropping or tag not in ALLOWED_TAGS or tag in VOID_TAGS:
            return
        if tag in self.open_tags:
            # close intervening unclosed tags to keep the output balanced
            while self.open_tags:
                last = self.open_tags.pop()
                self.out.append(f"</{last}>")
                if last == tag:
                    break

    def handle_data(self, data):
        if not self.dropping:
            self.out.append(html.escape(data, quote=False))

    def close(self):
        super().close()
        while self.open_tags:
            self.out.append(f"</{self.open_tags.pop()}>")


def sanitize_html(text: str) -> str:
    parser = _Sanitizer()
    parser.feed(text)
    parser.close()
    return "".join(parser.out)
