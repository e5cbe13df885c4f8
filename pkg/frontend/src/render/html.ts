/** Minimal HTML-string helpers shared by the render modules. */

export function esc(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function attr(value: unknown): string {
  return `"${esc(value)}"`;
}
