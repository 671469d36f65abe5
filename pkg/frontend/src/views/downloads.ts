/**
 * Instant libraries: one zip per collection, derived from the century
 * directories actually present in the file store.
 */

import { describeError, type AppContext } from "../context.js";
import { h } from "../dom.js";

function collectionOf(directory: string): string {
  const root = directory.split(" - ")[0] ?? directory;
  return root.toLowerCase().replace(/[^a-z0-9]+/g, "-").replace(/^-+|-+$/g, "");
}

export async function downloadsView(ctx: AppContext): Promise<HTMLElement> {
  const container = h("section", { className: "page downloads-page" },
    h("h2", {}, "Instant libraries"),
    h("p", {}, "Each archive bundles a collection's canonical texts, their "
      + "catalogue records, and index descriptor (.src) files."));
  try {
    const { directories } = await ctx.api.browseFiles();
    const collections = new Map<string, number>();
    for (const dir of directories) {
      const name = collectionOf(dir.directory);
      collections.set(name, (collections.get(name) ?? 0) + dir.count);
    }
    const list = h("ul", { className: "download-list" });
    for (const [name, count] of [...collections.entries()].sort()) {
      list.append(h("li", {},
        h("a", {
          href: ctx.api.downloadUrl(`${name}.zip`),
          className: "collection-zip",
        }, `${name}.zip`),
        ` — ${count} text(s)`));
    }
    container.append(collections.size ? list : h("p", {}, "The catalogue is empty."));
  } catch (err) {
    container.append(h("p", { className: "error" }, describeError(err)));
  }
  return container;
}
