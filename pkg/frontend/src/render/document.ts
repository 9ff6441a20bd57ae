/** Result view: the source document with claim spans wrapped in verdict-
 * colored marks (green accurate, red inaccurate, gray unverifiable), each
 * carrying a text label as well so the coding never relies on color alone. */
import type { ClaimView, SessionView } from "../types.js";
import { el, escapeHtml } from "./html.js";

export const VERDICT_CLASS: Record<string, string> = {
  accurate: "verdict-accurate",
  inaccurate: "verdict-inaccurate",
  unverifiable: "verdict-unverifiable",
};

export function renderClaimSpan(claim: ClaimView): string {
  return el("mark", {
    class: `claim ${VERDICT_CLASS[claim.verdict]}`,
    "data-claim-id": claim.id,
    "data-verdict": claim.verdict,
    role: "button",
    tabindex: 0,
  }, [
    escapeHtml(claim.text),
    el("sup", { class: "verdict-label" }, escapeHtml(claim.verdict)),
  ]);
}

export function renderResultView(session: SessionView): string {
  const ordered = [...session.claims].sort((a, b) => a.char_span[0] - b.char_span[0]);
  const parts: string[] = [];
  let cursor = 0;
  for (const claim of ordered) {
    const [start, end] = claim.char_span;
    if (start > cursor) {
      parts.push(escapeHtml(session.text.slice(cursor, start)));
    }
    parts.push(renderClaimSpan(claim));
    cursor = Math.max(cursor, end);
  }
  parts.push(escapeHtml(session.text.slice(cursor)));
  const notice = session.claims.length === 0
    ? el("p", { class: "notice" }, "No data claims were detected in this document.")
    : "";
  return el("article", {
    class: "result-view",
    "data-session": session.session_id,
    "data-revision": String(session.revision),
  }, [el("p", { class: "document" }, parts.join("")), notice]);
}
