#!/usr/bin/env python3
"""Seed a demo data root from the bundled fixture texts and print next steps.

Usage: python scripts/seed_demo.py [demo-data-dir]
"""

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))
sys.path.insert(0, str(REPO / "tests"))

from conftest import seed_catalogue  # noqa: E402

from lectern.storage import CatalogueStore  # noqa: E402


def main() -> int:
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else REPO / "demo-data"
    store = CatalogueStore(root)
    records = seed_catalogue(store)
    print(f"seeded {len(records)} records under {root}")
    for record in sorted(records.values(), key=lambda r: r.id):
        print(f"  {record.id:>3}  {record.title}")
    print()
    print("run the service with:")
    print(f"  LECTERN_ADMIN_TOKEN=change-me lectern serve --data-root {root}")
    print("then try:")
    print("  curl 'http://127.0.0.1:8000/search?q=author:twain'")
    print("  curl -X POST http://127.0.0.1:8000/content-search \\")
    print("       -H 'Content-Type: application/json' \\")
    print('       -d \'{"q": "fish AND belly", "docs": [26]}\'')
    return 0


if __name__ == "__main__":
    sys.exit(main())
