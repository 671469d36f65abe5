/**
 * Catalogue search with the three output options and per-hit action
 * links; hits can be multi-selected for a content search across them.
 */

import type { SearchHit } from "../api.js";
import { describeError, type AppContext } from "../context.js";
import { h } from "../dom.js";
import { openShelfDialog } from "./dialog.js";

export async function searchView(ctx: AppContext, initialQuery?: string): Promise<HTMLElement> {
  const container = h("section", { className: "page search-page" });
  const results = h("div", { className: "results" });

  const qInput = h("input", {
    className: "query-input", type: "search", name: "q",
    placeholder: "e.g. author:twain or title:\"tom sawyer\"",
    value: initialQuery ?? ctx.state.lastSearch?.q ?? "",
  }) as HTMLInputElement;
  const output = h(
    "select", { className: "output-select", name: "output" },
    h("option", { value: "titles" }, "titles"),
    h("option", { value: "titles-authors-links", selected: true }, "titles, authors, and links"),
    h("option", { value: "full-records" }, "full records"),
  ) as HTMLSelectElement;
  const caseBox = h("input", { type: "checkbox", name: "case" }) as HTMLInputElement;
  const stemBox = h("input", { type: "checkbox", name: "stem" }) as HTMLInputElement;

  async function run() {
    const q = qInput.value.trim();
    if (!q) return;
    try {
      const resp = await ctx.api.search(q, output.value, {
        caseSensitive: caseBox.checked,
        stemmed: stemBox.checked,
      }, ctx.state.unlockToken());
      ctx.state.lastSearch = { q, output: output.value, hits: resp.hits };
      renderHits(resp.hits);
    } catch (err) {
      ctx.flash(describeError(err), true);
    }
  }

  function renderHits(hits: SearchHit[]) {
    results.replaceChildren(
      h("p", { className: "result-count" }, `${hits.length} record(s) found`));
    const list = h("ol", { className: "hit-list" });
    for (const hit of hits) {
      list.append(renderHit(hit));
    }
    results.append(list);
    if (hits.some((hit) => hit.id !== undefined)) {
      results.append(h("button", {
        className: "content-search-selected",
        onclick: () => void ctx.navigate("#/content"),
      }, "Content-search selected documents"));
    }
  }

  function renderHit(hit: SearchHit): HTMLElement {
    const entry = h("li", { className: "hit" });
    if (hit.id !== undefined) {
      const id = hit.id;
      const box = h("input", {
        type: "checkbox", className: "doc-select",
        "data-doc": id,
        checked: ctx.state.selectedDocs.has(id),
        onchange: () => {
          if (ctx.state.selectedDocs.has(id)) ctx.state.selectedDocs.delete(id);
          else ctx.state.selectedDocs.add(id);
        },
      });
      entry.append(box, " ");
    }
    entry.append(h("strong", { className: "hit-title" }, hit.title));
    if (hit.authors) entry.append(h("span", {}, ` — ${hit.authors.join("; ")}`));
    const actions = h("span", { className: "hit-actions" });
    actions.append(h("a", { href: hit.original_url, className: "original-link" }, "original"));
    if (hit.id !== undefined) {
      const id = hit.id;
      actions.append(
        h("a", { href: ctx.api.textUrl(id), className: "archived-link" }, "archived"),
        h("a", {
          href: `#/read/${id}/0`, className: "read-link",
          onclick: (e: Event) => { e.preventDefault(); void ctx.navigate(`#/read/${id}/0`); },
        }, "read"),
        h("a", { href: ctx.api.pdfUrl(id, "times", 12), className: "typeset-link" }, "typeset"),
      );
      if (ctx.state.unlocked) {
        actions.append(h("button", {
          className: "add-to-bookcase",
          onclick: () => openShelfDialog(ctx, {
            kind: "book", doc_id: id, label: hit.title,
          }),
        }, "Add to bookcase"));
      }
    }
    entry.append(" ", actions);
    if (typeof hit.subjects === "string") {
      entry.append(h("div", { className: "subjects-note" }, hit.subjects));
    } else if (Array.isArray(hit.subjects)) {
      entry.append(h("div", { className: "subjects" }, `Subjects: ${hit.subjects.join("; ")}`));
    }
    if (typeof hit.genres === "string") {
      entry.append(h("div", { className: "genres-note" }, hit.genres));
    }
    return entry;
  }

  container.append(
    h("h2", {}, "Search the catalogue"),
    h(
      "form",
      {
        className: "search-form",
        onsubmit: (e: Event) => { e.preventDefault(); void run(); },
      },
      qInput,
      output,
      h("label", {}, caseBox, " case sensitive"),
      h("label", {}, stemBox, " stemmed"),
      h("button", { type: "submit", className: "run-search" }, "Search"),
    ),
    results,
  );

  if (initialQuery) await runWith(initialQuery);
  else if (ctx.state.lastSearch) renderHits(ctx.state.lastSearch.hits);

  async function runWith(q: string) {
    qInput.value = q;
    await run();
  }
  return container;
}
