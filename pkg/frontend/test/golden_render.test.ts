import assert from "node:assert/strict";
import { test } from "node:test";

import { chartKinds, renderChart } from "../src/render/chart.js";
import { renderTable } from "../src/render/table.js";
import type { ChartSpec, TableLayout } from "../src/types.js";
import { loadFixture, numericTokens, textContent } from "./helpers.js";

interface Bundle {
  version: string;
  fact_subtype: string;
  verdict: string;
  table: TableLayout;
  chart: ChartSpec;
  context: ChartSpec | null;
}

const golden = loadFixture<Record<string, Bundle>>("golden_bundles.json");

test("golden fixtures cover all 13 subtypes", () => {
  assert.equal(Object.keys(golden).length, 13);
  const tableKinds = new Set(Object.values(golden).map((b) => b.table.kind));
  const chartKindSet = new Set(Object.values(golden).map((b) => b.chart.kind));
  assert.equal(tableKinds.size, 13);
  assert.equal(chartKindSet.size, 13);
  assert.deepEqual([...chartKindSet].sort(), [...chartKinds()].sort());
});

for (const [subtype, bundle] of Object.entries(golden)) {
  test(`table ${bundle.table.kind} (${subtype}) renders`, () => {
    const html = renderTable(bundle.table);
    assert.ok(html.includes(`data-kind="${bundle.table.kind}"`));
    assert.ok(html.includes("<table"));
    for (const row of bundle.table.sticky_summary_rows) {
      assert.ok(html.includes(String(row.value)), `summary ${row.label}`);
    }
    for (const id of bundle.table.highlight_row_ids) {
      assert.ok(html.includes(`data-row="${id}"`));
    }
  });

  test(`chart ${bundle.chart.kind} (${subtype}) renders`, () => {
    const svg = renderChart(bundle.chart);
    assert.ok(svg.startsWith("<svg"));
    assert.ok(svg.includes(`kind-${bundle.chart.kind.replace(/"/g, "")}`)
      || svg.includes("kind-"));
    if (bundle.context) {
      const overlay = renderChart(bundle.context);
      assert.ok(overlay.includes('class="region"'), "claim window shading");
    }
  });

  test(`no client-side numerics in ${subtype} rendering`, () => {
    const rendered = textContent(renderTable(bundle.table))
      + textContent(renderChart(bundle.chart))
      + (bundle.context ? textContent(renderChart(bundle.context)) : "");
    const allowed = new Set(numericTokens(JSON.stringify(bundle)));
    for (const token of numericTokens(rendered)) {
      assert.ok(
        allowed.has(token) || allowed.has(token.replace(/^-/, "")),
        `rendered numeral ${token} does not originate from the bundle`,
      );
    }
  });
}

test("unknown chart kind is rejected", () => {
  assert.throws(() => renderChart({
    kind: "pie", data: [], encodings: {}, annotations: [], widgets: [],
  } as ChartSpec));
});

test("widgets render as chips in both forms", () => {
  const bundle = golden["value_mean"];
  const html = renderTable(bundle.table);
  for (const chip of bundle.table.widgets) {
    assert.ok(html.includes(chip.label), chip.label);
  }
});
