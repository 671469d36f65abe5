/**
 * In-memory stub of the catalogue service for contract tests.
 *
 * Implements just enough of the documented routes to drive the UI flows
 * and records every request it sees so tests can verify no call targets
 * anything undocumented.
 */

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
  headers: Record<string, string>;
}

interface StubShelfItem {
  item_id: string;
  kind: "book" | "bookmark";
  doc_id: number;
  ordinal: number | null;
  query: string | null;
  excerpt: string | null;
  annotation: string;
  tombstoned: boolean;
  note: string | null;
}

interface StubShelf {
  shelf_id: string;
  label: string;
  annotation: string;
  items: StubShelfItem[];
}

interface StubCase {
  name: string;
  key: string;
  shelves: StubShelf[];
  annotation: string;
  published: boolean;
  published_id: string | null;
}

const PARAGRAPHS: Record<number, string[]> = {
  26: [
    "The river ran wide and slow past the landing, and the boy watched the rafts.",
    "He was most fifty, and he looked it. His hair was long and tangled and greasy, and a tree-toad white, a fish-belly white face besides.",
    "By morning the fog had lifted from the water and the towhead showed plain.",
  ],
  27: [
    "The fence stood nine feet of board and thirty yards long before him that day.",
    "The pamphlet argued that slavery corrupted master and bondsman alike always.",
  ],
};

const TITLES: Record<number, string> = {
  26: "Adventures Of Huckleberry Finn",
  27: "Adventures Of Tom Sawyer",
};

export class StubService {
  requests: RecordedRequest[] = [];
  cases = new Map<string, StubCase>();
  tokens = new Map<string, string>();
  private counter = 0;

  seedBookcase(name: string, key: string, shelves: string[]): void {
    this.cases.set(name, {
      name,
      key,
      shelves: shelves.map((label) => ({
        shelf_id: `s${++this.counter}`,
        label,
        annotation: "",
        items: [],
      })),
      annotation: "",
      published: false,
      published_id: null,
    });
  }

  view(bookcase: StubCase) {
    return {
      name: bookcase.name,
      annotation: bookcase.annotation,
      published: bookcase.published,
      published_id: bookcase.published_id,
      shelves: bookcase.shelves,
      titles: Object.fromEntries(
        Object.entries(TITLES).map(([id, title]) => [id, title])),
    };
  }

  fetchLike = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const headers = (init?.headers ?? {}) as Record<string, string>;
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    this.requests.push({ method, path: url, body, headers });
    const [path, queryString] = url.split("?", 2);
    const params = new URLSearchParams(queryString ?? "");
    const json = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });
    const error = (status: number, code: string) =>
      json({ error: { code, message: code } }, status);

    if (method === "GET" && path === "/search") {
      const q = params.get("q") ?? "";
      const hits = q.includes("twain")
        ? Object.entries(TITLES).map(([id, title]) => ({
            id: Number(id),
            title,
            original_url: `http://example.org/${id}`,
            authors: ["Twain, Mark"],
            links: {
              original: `http://example.org/${id}`,
              archived: `/texts/${id}`,
              typeset: `/texts/${id}/pdf`,
              content_search: `/content-search?docs=${id}`,
            },
          }))
        : [];
      return json({ query: q, output: params.get("output"), total: hits.length, hits });
    }

    if (method === "POST" && path === "/content-search") {
      const docs: number[] = (body as { docs: number[] }).docs;
      const q: string = (body as { q: string }).q;
      const hits = docs.flatMap((docId) =>
        (PARAGRAPHS[docId] ?? [])
          .map((text, ordinal) => ({ text, ordinal }))
          .filter(({ text }) =>
            q.endsWith("*")
              ? text.includes(q.slice(0, -1))
              : text.includes(q.split(" ")[0] ?? q))
          .map(({ text, ordinal }, rank) => ({
            doc_id: docId,
            ordinal,
            score: 1 / (rank + 1),
            excerpt: text.slice(0, 70),
            title: TITLES[docId] ?? `document ${docId}`,
            links: {
              text: `/texts/${docId}`,
              paragraph: `/texts/${docId}/paragraphs/${ordinal}`,
            },
          })));
      return json({ query: q, sort: "relevance", total: hits.length, hits });
    }

    if (method === "GET" && /^\/texts\/\d+\/paragraphs\/\d+/.test(path)) {
      const [, docId, , ordinal] = path.split("/").slice(1).map((p) => p);
      const texts = PARAGRAPHS[Number(docId)] ?? [];
      const n = Number(ordinal);
      if (n >= texts.length) return error(404, "unknown-paragraph");
      return json({
        doc_id: Number(docId),
        ordinal: n,
        text: texts[n],
        has_prev: n > 0,
        has_next: n + 1 < texts.length,
      });
    }

    if (method === "GET" && path === "/browse/authors") {
      return json({ authors: [
        { key: "Twain, Mark", display: "Twain, Mark", query: 'author:"Twain, Mark"' },
      ] });
    }
    if (method === "GET" && path === "/browse/files") {
      return json({ directories: [
        { directory: "American - 1800-1899", slug: "american-1800-1899", count: 2 },
      ] });
    }
    if (method === "GET" && /^\/browse\/titles\//.test(path)) {
      return json({ letter: "T", titles: [] });
    }

    if (method === "POST" && path === "/bookcases") {
      const { name, key } = body as { name: string; key: string };
      if (this.cases.has(name)) return error(409, "name-taken");
      this.seedBookcase(name, key, []);
      return json({ name, published: false }, 201);
    }

    if (method === "POST" && path === "/bookcases/unlock") {
      const { name, key } = body as { name: string; key: string };
      const bookcase = this.cases.get(name);
      if (!bookcase || bookcase.key !== key) return error(401, "auth");
      const token = `tok-${++this.counter}`;
      this.tokens.set(token, name);
      return json({
        token,
        expires_at: "2099-01-01T00:00:00+00:00",
        bookcase: this.view(bookcase),
      });
    }

    if (method === "POST" && path === "/bookcases/hint") {
      const { name } = body as { name: string };
      if (!this.cases.has(name)) return error(404, "unknown-name");
      return json({ delivery_id: "d1" }, 202);
    }

    const owned = (token: string | undefined): StubCase | null => {
      const name = token ? this.tokens.get(token) : undefined;
      return name ? this.cases.get(name) ?? null : null;
    };
    const token = headers["X-Bookcase-Token"];

    let match = path.match(/^\/bookcases\/([^/]+)\/shelves$/);
    if (method === "POST" && match) {
      const bookcase = owned(token);
      if (!bookcase) return error(401, "invalid-token");
      if (bookcase.published) return error(409, "published-read-only");
      const shelf: StubShelf = {
        shelf_id: `s${++this.counter}`,
        label: (body as { label: string }).label,
        annotation: "",
        items: [],
      };
      bookcase.shelves.push(shelf);
      return json({ shelf_id: shelf.shelf_id, bookcase: this.view(bookcase) }, 201);
    }

    match = path.match(/^\/shelves\/([^/]+)\/items$/);
    if (method === "POST" && match) {
      const bookcase = owned(token);
      if (!bookcase) return error(401, "invalid-token");
      if (bookcase.published) return error(409, "published-read-only");
      const shelf = bookcase.shelves.find((s) => s.shelf_id === match![1]);
      if (!shelf) return error(404, "unknown-shelf");
      const payload = body as {
        kind: "book" | "bookmark"; doc_id: number; ordinal?: number; query?: string;
      };
      const text = payload.ordinal !== undefined
        ? PARAGRAPHS[payload.doc_id]?.[payload.ordinal] ?? null
        : null;
      const item: StubShelfItem = {
        item_id: `i${++this.counter}`,
        kind: payload.kind,
        doc_id: payload.doc_id,
        ordinal: payload.ordinal ?? null,
        query: payload.query ?? null,
        excerpt: text ? text.slice(0, 70) : null,
        annotation: "",
        tombstoned: false,
        note: null,
      };
      shelf.items.push(item);
      return json({
        item_id: item.item_id,
        kind: item.kind,
        doc_id: item.doc_id,
        ordinal: item.ordinal,
        excerpt: item.excerpt,
        bookcase: this.view(bookcase),
      }, 201);
    }

    match = path.match(/^\/bookcases\/([^/]+)\/annotations$/);
    if (method === "POST" && match) {
      const bookcase = owned(token);
      if (!bookcase) return error(401, "invalid-token");
      if (bookcase.published) return error(409, "published-read-only");
      // the real service sanitizes; the stub mimics the script-strip case
      const clean = String((body as { text: string }).text)
        .replace(/<script>.*?<\/script>/g, "");
      bookcase.annotation = clean;
      return json({ annotation: clean, bookcase: this.view(bookcase) });
    }

    match = path.match(/^\/bookcases\/([^/]+)\/publish$/);
    if (method === "POST" && match) {
      const bookcase = owned(token);
      if (!bookcase) return error(401, "invalid-token");
      bookcase.published = true;
      bookcase.published_id = bookcase.published_id ?? `pub-${++this.counter}`;
      return json({
        published_id: bookcase.published_id,
        url: `/published/${bookcase.published_id}`,
      });
    }

    match = path.match(/^\/bookcases\/([^/]+)\/unpublish$/);
    if (method === "POST" && match) {
      const bookcase = owned(token);
      if (!bookcase) return error(401, "invalid-token");
      bookcase.published = false;
      bookcase.published_id = null;
      return json({ published: false });
    }

    match = path.match(/^\/bookcases\/([^/]+)\/lock$/);
    if (method === "POST" && match) {
      if (!owned(token)) return error(401, "invalid-token");
      for (const [t, name] of [...this.tokens]) {
        if (name === decodeURIComponent(match[1])) this.tokens.delete(t);
      }
      return json({ locked: true });
    }

    if (method === "GET" && path === "/published") {
      return json({
        published: [...this.cases.values()]
          .filter((c) => c.published)
          .map((c) => ({ published_id: c.published_id, name: c.name })),
      });
    }

    match = path.match(/^\/published\/([^/]+)$/);
    if (method === "GET" && match) {
      const bookcase = [...this.cases.values()].find(
        (c) => c.published && c.published_id === decodeURIComponent(match![1]));
      if (!bookcase) return error(404, "unknown-published-id");
      return json(this.view(bookcase));
    }

    return error(404, `stub has no route for ${method} ${path}`);
  };
}
