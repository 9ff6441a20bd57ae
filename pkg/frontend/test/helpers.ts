import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

/** Repo-root fixtures, resolved from the compiled test location (dist/test). */
export function loadFixture<T>(name: string): T {
  const path = fileURLToPath(new URL(`../../../fixtures/${name}`, import.meta.url));
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}

/** Visible text of a markup string, with positional index cells dropped
 * (the 1-based row numbering is enumeration, not data). */
export function textContent(markup: string): string {
  const withoutIndex = markup
    .replace(/<t[dh] class="index">[^<]*<\/t[dh]>/g, "");
  return withoutIndex.replace(/<[^>]+>/g, " ");
}

const NUMERIC = /-?\d+(?:\.\d+)?/g;

export function numericTokens(text: string): string[] {
  return text.match(NUMERIC) ?? [];
}

/** A JSON response the way the service would produce it. */
export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}
