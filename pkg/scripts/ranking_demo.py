#!/usr/bin/env python3
"""Show how the tf-idf ranking orders paragraph hits for a few queries.

Builds content indexes over the fixture texts in memory and prints the
ranked hit list (score, document, ordinal, excerpt) per query, which is
handy when eyeballing changes to the scoring formula.
"""

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from lectern.index import build_content_index  # noqa: E402
from lectern.query import parse_query  # noqa: E402
from lectern.search import search_content  # noqa: E402
from lectern.textproc import reformat, segment  # noqa: E402

DOCS = {26: "huck.txt", 7: "titus.txt", 31: "slav.txt"}
QUERIES = ['fish AND belly', '"my library"', 'slav*', 'the OR white NOT river']


def main() -> int:
    indexes = []
    for doc_id, name in DOCS.items():
        raw = (REPO / "fixtures" / name).read_text(encoding="utf-8")
        canonical = reformat(raw, "already-delimited")
        indexes.append(build_content_index(segment(canonical, doc_id)))

    for text in QUERIES:
        query = parse_query(text)
        print(f"query: {text}")
        for hit in search_content(indexes, query):
            print(f"  {hit.score:8.4f}  doc {hit.doc_id:>2} "
                  f"paragraph {hit.ordinal:>2}  {hit.excerpt[:48]!r}")
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
