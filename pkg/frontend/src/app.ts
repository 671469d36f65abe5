/**
 * Single-window application shell: top navigation, a flash bar for
 * inline API errors, and a hash router.  Everything — including the
 * bookcase workflow — happens in this one page.
 */

import type { Api } from "./api.js";
import type { AppContext } from "./context.js";
import { h, clear } from "./dom.js";
import { SessionState } from "./state.js";
import { bookcaseView } from "./views/bookcase.js";
import { browseAuthorsView, browseFilesView, browseTitlesView } from "./views/browse.js";
import { contentView } from "./views/content.js";
import { downloadsView } from "./views/downloads.js";
import { publishedDetailView, publishedListView } from "./views/published.js";
import { readerView } from "./views/reader.js";
import { searchView } from "./views/search.js";

const NAV = [
  ["#/search", "Search the catalogue"],
  ["#/browse/authors", "Authors"],
  ["#/browse/titles/A", "Titles"],
  ["#/browse/files", "Files"],
  ["#/content", "Content search"],
  ["#/bookcases", "Your bookcases"],
  ["#/published", "Published bookcases"],
  ["#/downloads", "Downloads"],
] as const;

export class App {
  readonly state: SessionState;
  readonly ctx: AppContext;
  private readonly outlet: HTMLElement;
  private readonly flashBar: HTMLElement;
  private currentHash = "#/search";

  constructor(readonly root: HTMLElement, api: Api) {
    this.state = new SessionState();
    this.outlet = h("main", { className: "outlet" });
    this.flashBar = h("p", { className: "flash", hidden: "hidden" });

    const nav = h("nav", { className: "topnav" });
    NAV.forEach(([hash, label], i) => {
      if (i > 0) nav.append(" | ");
      nav.append(h("a", {
        href: hash,
        onclick: (e: Event) => {
          e.preventDefault();
          void this.navigate(hash);
        },
      }, label));
    });

    this.ctx = {
      api,
      state: this.state,
      root,
      navigate: (hash) => this.navigate(hash),
      rerender: () => this.render(),
      flash: (message, isError) => this.flash(message, isError),
    };
    root.append(h("h1", { className: "masthead" }, "Catalogue of Electronic Texts"),
      nav, this.flashBar, this.outlet);
  }

  flash(message: string, isError = false): void {
    this.flashBar.textContent = message;
    this.flashBar.className = isError ? "flash flash-error" : "flash";
    this.flashBar.removeAttribute("hidden");
  }

  async navigate(hash: string): Promise<void> {
    this.currentHash = hash;
    if (typeof location !== "undefined" && location.hash !== hash) {
      try {
        location.hash = hash;
      } catch {
        // test environments without a navigable location
      }
    }
    await this.render();
  }

  async render(): Promise<void> {
    this.flashBar.setAttribute("hidden", "hidden");
    const hash = this.currentHash;
    const parts = hash.replace(/^#\//, "").split("/");
    let page: HTMLElement;
    if (parts[0] === "search" && parts[1]) {
      page = await searchView(this.ctx, decodeURIComponent(parts.slice(1).join("/")));
    } else if (parts[0] === "search" || parts[0] === "") {
      page = await searchView(this.ctx);
    } else if (parts[0] === "browse" && parts[1] === "authors") {
      page = await browseAuthorsView(this.ctx);
    } else if (parts[0] === "browse" && parts[1] === "titles") {
      page = await browseTitlesView(this.ctx, decodeURIComponent(parts[2] ?? "A"));
    } else if (parts[0] === "browse" && parts[1] === "files") {
      page = await browseFilesView(this.ctx);
    } else if (parts[0] === "content") {
      page = await contentView(this.ctx);
    } else if (parts[0] === "read" && parts[1] !== undefined) {
      page = await readerView(this.ctx, Number(parts[1]), Number(parts[2] ?? 0));
    } else if (parts[0] === "bookcases") {
      page = await bookcaseView(this.ctx);
    } else if (parts[0] === "published" && parts[1]) {
      page = await publishedDetailView(this.ctx, decodeURIComponent(parts[1]));
    } else if (parts[0] === "published") {
      page = await publishedListView(this.ctx);
    } else if (parts[0] === "downloads") {
      page = await downloadsView(this.ctx);
    } else {
      page = h("section", { className: "page not-found" },
        h("p", {}, `No such page: ${hash}`));
    }
    clear(this.outlet);
    this.outlet.append(page);
  }

  start(): void {
    const sync = () => {
      this.currentHash = location.hash || "#/search";
      void this.render();
    };
    window.addEventListener("hashchange", sync);
    sync();
  }
}

export function createApp(root: HTMLElement, api: Api): App {
  return new App(root, api);
}
