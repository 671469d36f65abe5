/**
 * Content search across the documents selected on the search page:
 * relevance-ranked (or position-ordered) paragraphs, each linking into
 * the reader and bookmarkable onto shelves.
 */

import { describeError, type AppContext } from "../context.js";
import { h } from "../dom.js";
import { openShelfDialog } from "./dialog.js";

export async function contentView(ctx: AppContext): Promise<HTMLElement> {
  const container = h("section", { className: "page content-page" });
  const results = h("div", { className: "results" });
  const docs = [...ctx.state.selectedDocs].sort((a, b) => a - b);

  const titles = new Map<number, string>();
  for (const hit of ctx.state.lastSearch?.hits ?? []) {
    if (hit.id !== undefined) titles.set(hit.id, hit.title);
  }

  const qInput = h("input", {
    className: "content-query", type: "search",
    placeholder: "e.g. slav* or \"my library\"",
    value: ctx.state.lastContent?.q ?? "",
  }) as HTMLInputElement;
  const sortSelect = h(
    "select", { className: "sort-select" },
    h("option", { value: "relevance", selected: true }, "relevance order"),
    h("option", { value: "position" }, "position order"),
  ) as HTMLSelectElement;
  const caseBox = h("input", { type: "checkbox" }) as HTMLInputElement;
  const stemBox = h("input", { type: "checkbox" }) as HTMLInputElement;

  async function run() {
    const q = qInput.value.trim();
    if (!q) return;
    if (docs.length === 0) {
      ctx.flash("select at least one document on the search page", true);
      return;
    }
    try {
      const resp = await ctx.api.contentSearch(q, docs, {
        sort: sortSelect.value,
        caseSensitive: caseBox.checked,
        stemmed: stemBox.checked,
      }, ctx.state.unlockToken());
      ctx.state.lastContent = { q, hits: resp.hits };
      results.replaceChildren(
        h("p", { className: "result-count" }, `${resp.total} paragraph(s) found`));
      const list = h("ol", { className: "paragraph-hits" });
      for (const hit of resp.hits) {
        const row = h(
          "li", { className: "paragraph-hit" },
          h("span", { className: "excerpt" }, hit.excerpt),
          " ",
          h("em", { className: "hit-source" },
            `— ${hit.title}, paragraph ${hit.ordinal} ` +
            `(score ${hit.score.toFixed(3)})`),
          " ",
          h("a", {
            href: `#/read/${hit.doc_id}/${hit.ordinal}`, className: "context-link",
            onclick: (e: Event) => {
              e.preventDefault();
              void ctx.navigate(`#/read/${hit.doc_id}/${hit.ordinal}`);
            },
          }, "read in context"),
        );
        if (ctx.state.unlocked) {
          row.append(" ", h("button", {
            className: "add-to-bookcase",
            onclick: () => openShelfDialog(ctx, {
              kind: "bookmark", doc_id: hit.doc_id, ordinal: hit.ordinal,
              query: q, label: hit.excerpt,
            }),
          }, "Add to bookcase"));
        }
        list.append(row);
      }
      results.append(list);
    } catch (err) {
      ctx.flash(describeError(err), true);
    }
  }

  const selection = h("ul", { className: "doc-selection" });
  for (const id of docs) {
    selection.append(h("li", { "data-doc": id }, titles.get(id) ?? `document ${id}`));
  }

  container.append(
    h("h2", {}, "Search the content of the selected documents"),
    docs.length
      ? selection
      : h("p", { className: "empty-selection" },
          "No documents selected. Tick results on the search page first."),
    h(
      "form",
      {
        className: "content-form",
        onsubmit: (e: Event) => { e.preventDefault(); void run(); },
      },
      qInput,
      sortSelect,
      h("label", {}, caseBox, " case sensitive"),
      h("label", {}, stemBox, " stemmed"),
      h("button", { type: "submit", className: "run-content-search" }, "Search content"),
    ),
    results,
  );
  return container;
}
