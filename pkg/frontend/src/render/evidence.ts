/** Evidence view: table/chart toggle, chips, verdict banner, rectify button,
 * and the dataset-binding prompt shown when a claim is unverifiable. */
import type { ClaimView, DatasetInfo, EvidenceResponse } from "../types.js";
import { renderChipList } from "./chips.js";
import { renderChart } from "./chart.js";
import { el, escapeHtml, scalarText } from "./html.js";
import { renderTable } from "./table.js";
import { VERDICT_CLASS } from "./document.js";

export function renderEvidenceView(
  claim: ClaimView,
  evidence: EvidenceResponse | null,
  form: "table" | "chart",
): string {
  const header = el("header", { class: `evidence-header ${VERDICT_CLASS[claim.verdict]}` }, [
    el("strong", {}, escapeHtml(claim.verdict)),
    el("span", { class: "explanation" }, escapeHtml(claim.explanation)),
    claim.rectification !== null
      ? el("button", { class: "rectify", "data-claim-id": claim.id, type: "button" },
          `quick rectify -> ${escapeHtml(claim.rectification)}`)
      : "",
  ]);

  const toggle = el("nav", { class: "form-toggle" }, [
    el("button", { class: form === "table" ? "active" : null, "data-form": "table", type: "button" }, "table"),
    el("button", { class: form === "chart" ? "active" : null, "data-form": "chart", type: "button" }, "chart"),
  ]);

  const chipEditor = el("section", { class: "chip-editor", "data-claim-id": claim.id }, [
    el("h3", {}, "inferred filters"),
    renderChipList(claim.chips.subspace ?? [], true),
    claim.chips.focus?.length
      ? el("div", { class: "focus-chips" }, renderChipList(claim.chips.focus, false))
      : "",
  ]);

  let body = "";
  if (evidence) {
    if (form === "table" && evidence.table) {
      body = renderTable(evidence.table);
    } else if (form === "chart" && evidence.chart) {
      body = renderChart(evidence.chart);
      if (evidence.context) {
        body += el("figure", { class: "context-overlay" }, [
          el("figcaption", {}, "full-range context"),
          renderChart(evidence.context),
        ]);
      }
    }
  }

  return el("section", { class: "evidence-view", "data-claim-id": claim.id }, [
    header, toggle, chipEditor, body,
  ]);
}

export function renderBindingPrompt(claim: ClaimView, datasets: DatasetInfo[],
                                    scores: Record<string, number>): string {
  const rows = datasets.map((d) =>
    el("li", { "data-dataset-id": d.dataset_id }, [
      el("span", { class: "ds-name" }, escapeHtml(d.name)),
      el("span", { class: "ds-score" }, scalarText(scores[d.dataset_id] ?? null)),
      el("button", { class: "bind", "data-dataset-id": d.dataset_id, type: "button" }, "use"),
    ]));
  return el("aside", { class: "binding-prompt", "data-claim-id": claim.id }, [
    el("p", {}, "This claim is unverifiable against the bound dataset. Try another reference dataset:"),
    el("ul", {}, rows),
  ]);
}
