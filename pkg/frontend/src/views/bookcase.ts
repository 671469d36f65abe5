/**
 * Bookcase manager: create, unlock, annotate, shelve, publish — the whole
 * workflow in this one window.
 */

import type { BookcaseView } from "../api.js";
import { describeError, type AppContext } from "../context.js";
import { h, sanitizedHtml } from "../dom.js";

const ALLOWLIST_NOTE =
  "Annotations may use: <p> <br> <em> <strong> <a href=\"http(s)…\"> " +
  "<ul> <ol> <li> <blockquote>; everything else is stripped.";

export async function bookcaseView(ctx: AppContext): Promise<HTMLElement> {
  const container = h("section", { className: "page bookcase-page" },
    h("h2", {}, "Your bookcases"));
  if (ctx.state.unlocked && ctx.state.bookcase) {
    container.append(renderUnlocked(ctx, ctx.state.bookcase));
  } else {
    container.append(renderLockedForms(ctx));
  }
  return container;
}

function renderLockedForms(ctx: AppContext): HTMLElement {
  const wrap = h("div", { className: "locked-forms" });

  const createName = h("input", { className: "create-name", placeholder: "bookcase name" }) as HTMLInputElement;
  const createKey = h("input", { className: "create-key", type: "password", placeholder: "key" }) as HTMLInputElement;
  const createHint = h("input", { className: "create-hint", placeholder: "key hint" }) as HTMLInputElement;
  const createContact = h("input", { className: "create-contact", placeholder: "hint email" }) as HTMLInputElement;

  const unlockName = h("input", { className: "unlock-name", placeholder: "bookcase name" }) as HTMLInputElement;
  const unlockKey = h("input", { className: "unlock-key", type: "password", placeholder: "key" }) as HTMLInputElement;

  const hintName = h("input", { className: "hint-name", placeholder: "bookcase name" }) as HTMLInputElement;

  wrap.append(
    h("h3", {}, "Create a new bookcase"),
    h("form", {
      className: "create-form",
      onsubmit: async (e: Event) => {
        e.preventDefault();
        try {
          await ctx.api.createBookcase(
            createName.value, createKey.value, createHint.value, createContact.value);
          const unlocked = await ctx.api.unlock(createName.value, createKey.value);
          ctx.state.openBookcase(unlocked.token, unlocked.bookcase);
          await ctx.rerender();
        } catch (err) {
          ctx.flash(describeError(err), true);
        }
      },
    }, createName, createKey, createHint, createContact,
      h("button", { type: "submit", className: "create-bookcase" }, "Create")),
    h("h3", {}, "Unlock a previously created bookcase"),
    h("form", {
      className: "unlock-form",
      onsubmit: async (e: Event) => {
        e.preventDefault();
        try {
          const unlocked = await ctx.api.unlock(unlockName.value, unlockKey.value);
          ctx.state.openBookcase(unlocked.token, unlocked.bookcase);
          await ctx.rerender();
        } catch (err) {
          ctx.flash(describeError(err), true);
        }
      },
    }, unlockName, unlockKey,
      h("button", { type: "submit", className: "unlock-bookcase" }, "Unlock")),
    h("h3", {}, "Get help remembering your key"),
    h("form", {
      className: "hint-form",
      onsubmit: async (e: Event) => {
        e.preventDefault();
        try {
          await ctx.api.requestHint(hintName.value);
          ctx.flash("hint sent to the address on file");
        } catch (err) {
          ctx.flash(describeError(err), true);
        }
      },
    }, hintName, h("button", { type: "submit", className: "request-hint" }, "Send hint")),
  );
  return wrap;
}

function renderUnlocked(ctx: AppContext, view: BookcaseView): HTMLElement {
  const token = ctx.state.unlockToken()!;
  const name = view.name;
  const wrap = h("div", { className: "unlocked-bookcase" });

  const annotationBox = h("textarea", {
    className: "bookcase-annotation-input",
  }) as HTMLTextAreaElement;
  annotationBox.value = view.annotation;

  const shelfLabel = h("input", {
    className: "new-shelf-label", placeholder: "new bookshelf label",
  }) as HTMLInputElement;

  wrap.append(
    h("h3", { className: "bookcase-name" },
      `Bookcase “${name}”${view.published ? " (published)" : ""}`),
    view.annotation
      ? sanitizedHtml("div", "bookcase-annotation", view.annotation)
      : h("p", { className: "bookcase-annotation" }, "(no annotation yet)"),
    h("p", { className: "allowlist-note" }, ALLOWLIST_NOTE),
    h("form", {
      className: "annotate-form",
      onsubmit: async (e: Event) => {
        e.preventDefault();
        try {
          const saved = await ctx.api.annotate(name, "bookcase", annotationBox.value, token);
          ctx.state.refreshBookcase(saved.bookcase);
          await ctx.rerender();
        } catch (err) {
          ctx.flash(describeError(err), true);
        }
      },
    }, annotationBox, h("button", { type: "submit", className: "save-annotation" }, "Save annotation")),
    h("form", {
      className: "add-shelf-form",
      onsubmit: async (e: Event) => {
        e.preventDefault();
        try {
          const added = await ctx.api.addShelf(name, shelfLabel.value, token);
          ctx.state.refreshBookcase(added.bookcase);
          await ctx.rerender();
        } catch (err) {
          ctx.flash(describeError(err), true);
        }
      },
    }, shelfLabel, h("button", { type: "submit", className: "add-shelf" }, "Add bookshelf")),
    renderShelves(ctx, view),
    h("p", { className: "bookcase-actions" },
      h("button", {
        className: "publish-bookcase", disabled: view.published,
        onclick: async () => {
          try {
            const published = await ctx.api.publish(name, token);
            ctx.flash(`published at #/published/${published.published_id}`);
            const fresh = { ...view, published: true, published_id: published.published_id };
            ctx.state.refreshBookcase(fresh);
            await ctx.rerender();
          } catch (err) {
            ctx.flash(describeError(err), true);
          }
        },
      }, "Publish"),
      " ",
      h("button", {
        className: "unpublish-bookcase", disabled: !view.published,
        onclick: async () => {
          try {
            await ctx.api.unpublish(name, token);
            ctx.state.refreshBookcase({ ...view, published: false, published_id: null });
            await ctx.rerender();
          } catch (err) {
            ctx.flash(describeError(err), true);
          }
        },
      }, "Unpublish"),
      " ",
      h("button", {
        className: "lock-bookcase",
        onclick: async () => {
          try {
            await ctx.api.lock(name, token);
          } catch {
            // token may have already expired; local state clears anyway
          }
          ctx.state.clear();
          await ctx.rerender();
        },
      }, "Lock this bookcase"),
    ),
  );
  return wrap;
}

function renderShelves(ctx: AppContext, view: BookcaseView): HTMLElement {
  const list = h("div", { className: "shelves" });
  view.shelves.forEach((shelf, index) => {
    const items = h("ol", { className: "shelf-items" });
    for (const item of shelf.items) {
      const row = h("li", { className: `shelf-item ${item.kind}` });
      if (item.tombstoned) {
        row.append(h("em", {}, `(${item.note ?? "source removed"}) `));
      }
      if (item.kind === "book") {
        row.append(h("a", {
          href: `#/read/${item.doc_id}/0`,
          className: "item-book-link",
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
    list.append(h(
      "div", { className: "shelf", "data-shelf": shelf.shelf_id },
      h("h4", { className: "shelf-label" },
        `${String(index + 1).padStart(2, "0")}. ${shelf.label}`),
      shelf.annotation
        ? sanitizedHtml("div", "shelf-annotation", shelf.annotation)
        : null,
      items,
    ));
  });
  return list;
}
