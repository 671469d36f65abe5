/**
 * The add-to-bookcase dialog: an in-page overlay (never a second window)
 * listing every bookshelf of the currently unlocked bookcase; the item is
 * saved to each shelf the reader ticks.
 */

import { describeError, type AppContext } from "../context.js";
import { h } from "../dom.js";

export interface SaveableItem {
  kind: "book" | "bookmark";
  doc_id: number;
  ordinal?: number;
  query?: string;
  label: string;
}

export function openShelfDialog(ctx: AppContext, item: SaveableItem): void {
  const bookcase = ctx.state.bookcase;
  const token = ctx.state.unlockToken();
  if (!bookcase || !token) {
    ctx.flash("unlock a bookcase first", true);
    return;
  }
  const existing = ctx.root.querySelector(".shelf-dialog");
  if (existing) existing.remove();

  const boxes: Array<{ shelfId: string; input: HTMLInputElement }> = [];
  const list = h("div", { className: "shelf-choices" });
  if (bookcase.shelves.length === 0) {
    list.append(h("p", {}, "This bookcase has no bookshelves yet; add one on the bookcase page."));
  }
  for (const shelf of bookcase.shelves) {
    const input = h("input", {
      type: "checkbox",
      "data-shelf": shelf.shelf_id,
    }) as HTMLInputElement;
    boxes.push({ shelfId: shelf.shelf_id, input });
    list.append(h("label", { className: "shelf-choice" }, input, ` ${shelf.label}`));
  }

  const overlay = h(
    "div",
    { className: "shelf-dialog", role: "dialog" },
    h(
      "div",
      { className: "shelf-dialog-box" },
      h("h3", {}, `Add to bookcase: ${item.label}`),
      h("p", {}, `Saving into “${bookcase.name}” — choose one or more bookshelves.`),
      list,
      h(
        "p",
        { className: "dialog-actions" },
        h("button", {
          className: "save-to-shelves",
          onclick: async () => {
            const chosen = boxes.filter((b) => b.input.checked);
            if (chosen.length === 0) {
              ctx.flash("choose at least one bookshelf", true);
              return;
            }
            try {
              for (const { shelfId } of chosen) {
                const saved = await ctx.api.addItem(shelfId, {
                  kind: item.kind,
                  doc_id: item.doc_id,
                  ordinal: item.ordinal,
                  query: item.query,
                }, token);
                ctx.state.refreshBookcase(saved.bookcase);
              }
              overlay.remove();
              ctx.flash(`saved to ${chosen.length} shelf(s)`);
            } catch (err) {
              ctx.flash(describeError(err), true);
            }
          },
        }, "Save"),
        h("button", { className: "cancel-dialog", onclick: () => overlay.remove() }, "Cancel"),
      ),
    ),
  );
  ctx.root.append(overlay);
}
