/**
 * Browse pages: the author authority list, titles by first letter, and
 * the century directories of the file store.  Selecting an entry fires
 * the corresponding catalogue search.
 */

import { describeError, type AppContext } from "../context.js";
import { h } from "../dom.js";

const LETTERS = [..."ABCDEFGHIJKLMNOPQRSTUVWXYZ", "#"];

export async function browseAuthorsView(ctx: AppContext): Promise<HTMLElement> {
  const container = h("section", { className: "page browse-authors" },
    h("h2", {}, "Browse by author"));
  try {
    const { authors } = await ctx.api.browseAuthors();
    const list = h("ul", { className: "author-list" });
    for (const entry of authors) {
      list.append(h("li", {},
        h("a", {
          href: `#/search/${encodeURIComponent(entry.query)}`,
          className: "author-link",
          onclick: (e: Event) => {
            e.preventDefault();
            void ctx.navigate(`#/search/${encodeURIComponent(entry.query)}`);
          },
        }, entry.display)));
    }
    container.append(list);
  } catch (err) {
    container.append(h("p", { className: "error" }, describeError(err)));
  }
  return container;
}

export async function browseTitlesView(ctx: AppContext, letter: string): Promise<HTMLElement> {
  const container = h("section", { className: "page browse-titles" },
    h("h2", {}, "Browse by title"));
  const nav = h("p", { className: "letter-nav" });
  for (const l of LETTERS) {
    nav.append(h("a", {
      href: `#/browse/titles/${encodeURIComponent(l)}`,
      className: l === letter ? "current-letter" : "letter",
      onclick: (e: Event) => {
        e.preventDefault();
        void ctx.navigate(`#/browse/titles/${encodeURIComponent(l)}`);
      },
    }, l), " ");
  }
  container.append(nav);
  try {
    const { titles } = await ctx.api.browseTitles(letter);
    const list = h("ul", { className: "title-list" });
    for (const entry of titles) {
      list.append(h("li", {},
        h("a", {
          href: `#/search/${encodeURIComponent(entry.query)}`,
          className: "title-link",
          onclick: (e: Event) => {
            e.preventDefault();
            void ctx.navigate(`#/search/${encodeURIComponent(entry.query)}`);
          },
        }, entry.title)));
    }
    container.append(titles.length ? list
      : h("p", {}, `No titles under ${letter}.`));
  } catch (err) {
    container.append(h("p", { className: "error" }, describeError(err)));
  }
  return container;
}

export async function browseFilesView(ctx: AppContext): Promise<HTMLElement> {
  const container = h("section", { className: "page browse-files" },
    h("h2", {}, "Browse the file store by century"));
  try {
    const { directories } = await ctx.api.browseFiles();
    const list = h("ul", { className: "directory-list" });
    for (const dir of directories) {
      list.append(h("li", {}, `${dir.directory} — ${dir.count} text(s)`));
    }
    container.append(list);
  } catch (err) {
    container.append(h("p", { className: "error" }, describeError(err)));
  }
  return container;
}
