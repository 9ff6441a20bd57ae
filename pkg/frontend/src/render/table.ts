/** Evidence tables T1-T13 from a TableLayout. Every displayed number comes
 * from the layout itself; this module lays out, it never computes. */
import type { TableLayout } from "../types.js";
import { renderChipList } from "./chips.js";
import { el, escapeHtml, scalarText } from "./html.js";

export function renderTable(layout: TableLayout): string {
  const highlighted = new Set(layout.highlight_row_ids);

  const headCells: string[] = [];
  if (layout.index_column) {
    headCells.push(el("th", { class: "index" }, "#"));
  }
  for (const column of layout.columns) {
    const sortMark = column.sort === "asc" ? " ↑" : column.sort === "desc" ? " ↓" : "";
    const widgets = column.widgets.length ? renderChipList(column.widgets) : "";
    headCells.push(el("th", { "data-column": column.name },
      escapeHtml(column.name) + sortMark + widgets));
  }

  const bodyRows = layout.rows.map((row, i) => {
    const cells: string[] = [];
    if (layout.index_column) {
      cells.push(el("td", { class: "index" }, String(i + 1)));
    }
    for (const cell of row.cells) {
      cells.push(el("td", {}, scalarText(cell)));
    }
    return el("tr", {
      "data-row": row.id,
      class: highlighted.has(row.id) ? "highlight" : null,
    }, cells);
  });

  const summaryRows = layout.sticky_summary_rows.map((row) =>
    el("tr", { class: row.highlighted ? "summary highlight" : "summary" }, [
      el("td", { colspan: layout.columns.length - 1 + (layout.index_column ? 1 : 0) },
        escapeHtml(row.label)),
      el("td", { class: "summary-value" }, scalarText(row.value)),
    ]),
  );

  const truncation = layout.truncated
    ? el("caption", { class: "truncated" },
        `truncated; ${scalarText(layout.truncated.total_rows)} rows in total`)
    : "";

  return el("figure", { class: `evidence-table kind-${layout.kind}` }, [
    renderChipList(layout.widgets),
    el("table", { "data-kind": layout.kind }, [
      truncation,
      el("thead", {}, [el("tr", {}, headCells)]),
      el("tbody", {}, bodyRows),
      el("tfoot", { class: "sticky" }, summaryRows),
    ]),
  ]);
}
