/** Tiny element builder; props are attributes except on* handlers. */

type Child = Node | string | null | undefined;

export function h(
  tag: string,
  props: Record<string, unknown> = {},
  ...children: Child[]
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(props)) {
    if (value == null) continue;
    if (key.startsWith("on") && typeof value === "function") {
      node.addEventListener(key.slice(2), value as EventListener);
    } else if (key === "className") {
      node.className = String(value);
    } else if (key === "checked" || key === "disabled" || key === "selected") {
      if (value) node.setAttribute(key, "");
      (node as unknown as Record<string, unknown>)[key] = Boolean(value);
    } else if (key === "value") {
      (node as HTMLInputElement).value = String(value);
    } else {
      node.setAttribute(key, String(value));
    }
  }
  for (const child of children) {
    if (child == null) continue;
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Server-sanitized HTML (annotations) is the only thing set as innerHTML. */
export function sanitizedHtml(tag: string, className: string, html: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  node.innerHTML = html;
  return node;
}
