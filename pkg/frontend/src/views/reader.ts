/**
 * Paragraph reader: one paragraph in context with next/previous
 * navigation, plus the typeset-download form (font and size only, with a
 * large-print preset).
 */

import { describeError, type AppContext } from "../context.js";
import { h } from "../dom.js";

export async function readerView(
  ctx: AppContext, docId: number, ordinal: number,
): Promise<HTMLElement> {
  const container = h("section", { className: "page reader-page" });
  try {
    const para = await ctx.api.paragraph(docId, ordinal);
    const fontSelect = h(
      "select", { className: "font-select" },
      h("option", { value: "times", selected: true }, "Times"),
      h("option", { value: "helvetica" }, "Helvetica"),
      h("option", { value: "courier" }, "Courier"),
    ) as HTMLSelectElement;
    const sizeInput = h("input", {
      className: "size-input", type: "number", min: "8", max: "24", value: "12",
    }) as HTMLInputElement;
    const pdfLink = h("a", {
      className: "pdf-link",
      href: ctx.api.pdfUrl(docId, "times", 12),
    }, "download typeset PDF") as HTMLAnchorElement;
    const syncPdf = () => {
      pdfLink.href = ctx.api.pdfUrl(
        docId, fontSelect.value, Number(sizeInput.value) || 12);
    };
    fontSelect.addEventListener("change", syncPdf);
    sizeInput.addEventListener("change", syncPdf);

    container.append(
      h("h2", {}, `Document ${docId}, paragraph ${para.ordinal}`),
      h("blockquote", { className: "paragraph-text" }, para.text),
      h(
        "p", { className: "pager" },
        h("button", {
          className: "prev-paragraph", disabled: !para.has_prev,
          onclick: () => void ctx.navigate(`#/read/${docId}/${para.ordinal - 1}`),
        }, "previous paragraph"),
        " ",
        h("button", {
          className: "next-paragraph", disabled: !para.has_next,
          onclick: () => void ctx.navigate(`#/read/${docId}/${para.ordinal + 1}`),
        }, "next paragraph"),
        " ",
        h("a", { href: ctx.api.textUrl(docId), className: "whole-text" }, "whole text"),
      ),
      h(
        "p", { className: "typeset-form" },
        "Typeset: ", fontSelect, " ", sizeInput, " pt ",
        h("button", {
          className: "large-print",
          onclick: () => {
            fontSelect.value = "helvetica";
            sizeInput.value = "16";
            syncPdf();
          },
        }, "large print preset"),
        " ", pdfLink,
      ),
    );
  } catch (err) {
    container.append(h("p", { className: "error" }, describeError(err)));
  }
  return container;
}
