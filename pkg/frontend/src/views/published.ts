/**
 * Read-only views of published bookcases: the public listing and one
 * bookcase rendered with its shelves, annotations and bookmark excerpts.
 */

import { describeError, type AppContext } from "../context.js";
import { h, sanitizedHtml } from "../dom.js";

export async function publishedListView(ctx: AppContext): Promise<HTMLElement> {
  const container = h("section", { className: "page published-list" },
    h("h2", {}, "Previously published bookcases"));
  try {
    const { published } = await ctx.api.listPublished();
    const list = h("ul", { className: "published-entries" });
    for (const entry of published) {
      list.append(h("li", {},
        h("a", {
          href: `#/published/${encodeURIComponent(entry.published_id)}`,
          className: "published-link",
          onclick: (e: Event) => {
            e.preventDefault();
            void ctx.navigate(`#/published/${encodeURIComponent(entry.published_id)}`);
          },
        }, entry.name)));
    }
    container.append(published.length ? list : h("p", {}, "Nothing published yet."));
  } catch (err) {
    container.append(h("p", { className: "error" }, describeError(err)));
  }
  return container;
}

export async function publishedDetailView(
  ctx: AppContext, publishedId: string,
): Promise<HTMLElement> {
  const container = h("section", { className: "page published-detail" });
  try {
    const view = await ctx.api.viewPublished(publishedId);
    container.append(
      h("p", { className: "published-banner" },
        "This is a published bookcase, a set of catalogue texts and " +
        "searches brought together under a reader-defined theme."),
      h("h2", { className: "published-name" }, view.name),
    );
    if (view.annotation) {
      container.append(sanitizedHtml("div", "bookcase-annotation", view.annotation));
    }
    view.shelves.forEach((shelf, index) => {
      const items = h("ol", { className: "published-items" });
      for (const item of shelf.items) {
        const row = h("li", { className: `published-item ${item.kind}` });
        if (item.tombstoned) {
          row.append(h("em", {}, `(${item.note ?? "source removed"}) `));
        }
        if (item.kind === "book") {
          row.append(h("a", {
            href: `#/read/${item.doc_id}/0`,
            className: "published-book-link",
            onclick: (e: Event) => {
              e.preventDefault();
              void ctx.navigate(`#/read/${item.doc_id}/0`);
            },
          }, view.titles?.[String(item.doc_id)] ?? `document ${item.doc_id}`));
        } else {
          row.append(
            h("span", { className: "bookmark-excerpt" }, item.excerpt ?? ""),
            " ",
            h("a", {
              href: `#/read/${item.doc_id}/${item.ordinal ?? 0}`,
              className: "bookmark-context",
              onclick: (e: Event) => {
                e.preventDefault();
                void ctx.navigate(`#/read/${item.doc_id}/${item.ordinal ?? 0}`);
              },
            }, "(E)"),
          );
        }
        if (item.annotation) {
          row.append(sanitizedHtml("div", "item-annotation", item.annotation));
        }
        items.append(row);
      }
      container.append(h(
        "div", { className: "published-shelf" },
        h("h3", { className: "shelf-label" },
          `${String(index + 1).padStart(2, "0")}. ${shelf.label}`),
        shelf.annotation
          ? sanitizedHtml("div", "shelf-annotation", shelf.annotation)
          : null,
        items,
      ));
    });
  } catch (err) {
    container.append(h("p", { className: "error" }, describeError(err)));
  }
  return container;
}
