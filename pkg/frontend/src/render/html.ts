/** String-building primitives. Renderers return markup strings so they can
 * run (and be tested) without a DOM. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(tag: string, attrs: Record<string, string | number | null>,
                   children: string[] | string = []): string {
  const parts = Object.entries(attrs)
    .filter(([, v]) => v !== null)
    .map(([k, v]) => `${k}="${escapeHtml(String(v))}"`);
  const open = parts.length ? `<${tag} ${parts.join(" ")}>` : `<${tag}>`;
  const body = typeof children === "string" ? children : children.join("");
  return `${open}${body}</${tag}>`;
}

/** Text content shown for a bundle-provided scalar. Values are rendered
 * verbatim (String), never rounded or recomputed client-side. */
export function scalarText(value: string | number | null | undefined): string {
  if (value === null || value === undefined) {
    return "";
  }
  return escapeHtml(String(value));
}
