/**
 * Typed client for the catalogue service.
 *
 * Every request is funneled through one helper that checks the path
 * against the documented route table before anything leaves the page, so
 * an undocumented call is a thrown error here rather than a 404 later.
 */

export interface SearchHit {
  title: string;
  original_url: string;
  id?: number;
  authors?: string[];
  links?: Record<string, string>;
  subjects?: string[] | string;
  genres?: string[] | string;
  size_bytes?: number;
  mime_type?: string;
  [key: string]: unknown;
}

export interface SearchResponse {
  query: string;
  output: string;
  total: number;
  hits: SearchHit[];
}

export interface ContentHit {
  doc_id: number;
  ordinal: number;
  score: number;
  excerpt: string;
  title: string;
  links: Record<string, string>;
}

export interface ContentSearchResponse {
  query: string;
  sort: string;
  total: number;
  hits: ContentHit[];
}

export interface ParagraphView {
  doc_id: number;
  ordinal: number;
  text: string;
  has_prev: boolean;
  has_next: boolean;
}

export interface ShelfItemView {
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

export interface ShelfView {
  shelf_id: string;
  label: string;
  annotation: string;
  items: ShelfItemView[];
}

export interface BookcaseView {
  name: string;
  annotation: string;
  published: boolean;
  published_id: string | null;
  shelves: ShelfView[];
  titles?: Record<string, string | null>;
}

export interface UnlockResponse {
  token: string;
  expires_at: string;
  bookcase: BookcaseView;
}

export interface AuthorEntry {
  key: string;
  display: string;
  query: string;
}

export interface TitleEntry {
  id: number;
  title: string;
  query: string;
}

export interface DirectoryEntry {
  directory: string;
  slug: string;
  count: number;
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** The documented service surface; nothing else may be requested. */
export const DOCUMENTED_ROUTES: ReadonlyArray<[string, RegExp]> = [
  ["GET", /^\/search\?/],
  ["POST", /^\/content-search$/],
  ["GET", /^\/browse\/authors$/],
  ["GET", /^\/browse\/titles\/[^/]+$/],
  ["GET", /^\/browse\/files$/],
  ["GET", /^\/texts\/\d+$/],
  ["GET", /^\/texts\/\d+\/pdf(\?|$)/],
  ["GET", /^\/texts\/\d+\/paragraphs\/\d+(\?|$)/],
  ["POST", /^\/bookcases$/],
  ["POST", /^\/bookcases\/unlock$/],
  ["POST", /^\/bookcases\/[^/]+\/lock$/],
  ["POST", /^\/bookcases\/[^/]+\/shelves$/],
  ["POST", /^\/shelves\/[^/]+\/items$/],
  ["POST", /^\/bookcases\/[^/]+\/annotations$/],
  ["POST", /^\/bookcases\/[^/]+\/publish$/],
  ["POST", /^\/bookcases\/[^/]+\/unpublish$/],
  ["GET", /^\/published$/],
  ["GET", /^\/published\/[^/]+$/],
  ["POST", /^\/bookcases\/hint$/],
  ["GET", /^\/downloads\/[^/]+\.(zip|src)$/],
  ["GET", /^\/robots\.txt$/],
  ["GET", /^\/stats$/],
];

export function isDocumented(method: string, path: string): boolean {
  return DOCUMENTED_ROUTES.some(
    ([m, pattern]) => m === method && pattern.test(path),
  );
}

export class Api {
  constructor(
    private readonly fetchLike: FetchLike,
    private readonly base: string = "",
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    token?: string | null,
  ): Promise<T> {
    if (!isDocumented(method, path)) {
      throw new Error(`undocumented route: ${method} ${path}`);
    }
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (token) headers["X-Bookcase-Token"] = token;
    const resp = await this.fetchLike(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      const err = (payload as { error?: { code?: string; message?: string } }).error ?? {};
      throw <ApiError>{
        status: resp.status,
        code: err.code ?? "error",
        message: err.message ?? `request failed with ${resp.status}`,
      };
    }
    return payload as T;
  }

  search(
    q: string,
    output: string,
    flags: { caseSensitive?: boolean; stemmed?: boolean } = {},
    token?: string | null,
  ): Promise<SearchResponse> {
    const params = new URLSearchParams({ q, output });
    if (flags.caseSensitive) params.set("case_sensitive", "true");
    if (flags.stemmed) params.set("stemmed", "true");
    return this.request("GET", `/search?${params}`, undefined, token);
  }

  contentSearch(
    q: string,
    docs: number[],
    options: { sort?: string; caseSensitive?: boolean; stemmed?: boolean } = {},
    token?: string | null,
  ): Promise<ContentSearchResponse> {
    return this.request("POST", "/content-search", {
      q,
      docs,
      sort: options.sort ?? "relevance",
      case_sensitive: options.caseSensitive ?? false,
      stemmed: options.stemmed ?? false,
    }, token);
  }

  browseAuthors(): Promise<{ authors: AuthorEntry[] }> {
    return this.request("GET", "/browse/authors");
  }

  browseTitles(letter: string): Promise<{ letter: string; titles: TitleEntry[] }> {
    return this.request("GET", `/browse/titles/${encodeURIComponent(letter)}`);
  }

  browseFiles(): Promise<{ directories: DirectoryEntry[] }> {
    return this.request("GET", "/browse/files");
  }

  paragraph(docId: number, ordinal: number, dir?: "next" | "prev"): Promise<ParagraphView> {
    const suffix = dir ? `?dir=${dir}` : "";
    return this.request("GET", `/texts/${docId}/paragraphs/${ordinal}${suffix}`);
  }

  textUrl(docId: number): string {
    return `${this.base}/texts/${docId}`;
  }

  pdfUrl(docId: number, font: string, size: number): string {
    return `${this.base}/texts/${docId}/pdf?font=${font}&size=${size}`;
  }

  downloadUrl(name: string): string {
    return `${this.base}/downloads/${name}`;
  }

  createBookcase(name: string, key: string, hint: string, hintContact: string) {
    return this.request<{ name: string }>("POST", "/bookcases", {
      name, key, hint, hint_contact: hintContact,
    });
  }

  unlock(name: string, key: string): Promise<UnlockResponse> {
    return this.request("POST", "/bookcases/unlock", { name, key });
  }

  lock(name: string, token: string) {
    return this.request<{ locked: boolean }>(
      "POST", `/bookcases/${encodeURIComponent(name)}/lock`, {}, token);
  }

  addShelf(name: string, label: string, token: string) {
    return this.request<{ shelf_id: string; bookcase: BookcaseView }>(
      "POST", `/bookcases/${encodeURIComponent(name)}/shelves`, { label }, token);
  }

  addItem(
    shelfId: string,
    item: { kind: "book" | "bookmark"; doc_id: number; ordinal?: number; query?: string },
    token: string,
  ) {
    return this.request<{ item_id: string; excerpt: string | null; bookcase: BookcaseView }>(
      "POST", `/shelves/${encodeURIComponent(shelfId)}/items`, item, token);
  }

  annotate(
    name: string,
    target: "bookcase" | "shelf" | "item",
    text: string,
    token: string,
    targetId?: string,
  ) {
    return this.request<{ annotation: string; bookcase: BookcaseView }>(
      "POST", `/bookcases/${encodeURIComponent(name)}/annotations`,
      { target, text, id: targetId }, token);
  }

  publish(name: string, token: string) {
    return this.request<{ published_id: string; url: string }>(
      "POST", `/bookcases/${encodeURIComponent(name)}/publish`, {}, token);
  }

  unpublish(name: string, token: string) {
    return this.request<{ published: boolean }>(
      "POST", `/bookcases/${encodeURIComponent(name)}/unpublish`, {}, token);
  }

  listPublished(): Promise<{ published: Array<{ published_id: string; name: string }> }> {
    return this.request("GET", "/published");
  }

  viewPublished(publishedId: string): Promise<BookcaseView> {
    return this.request("GET", `/published/${encodeURIComponent(publishedId)}`);
  }

  requestHint(name: string) {
    return this.request<{ delivery_id: string }>("POST", "/bookcases/hint", { name });
  }
}
