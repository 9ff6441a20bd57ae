/** Evidence charts V1-V13 rendered to SVG strings via a thin declarative
 * mapping from ChartSpec. Scales position marks; every piece of rendered
 * text (labels, annotation captions, counts) is taken verbatim from the
 * spec, so no verdict-relevant number is ever derived client-side. */
import type { Annotation, ChartDatum, ChartSpec } from "../types.js";
import { el, escapeHtml, scalarText } from "./html.js";

const W = 720;
const H = 320;
const PAD = 46;

interface Scale {
  (v: number): number;
}

function linearScale(values: number[], range: [number, number]): Scale {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  return (v: number) => range[0] + ((v - lo) / span) * (range[1] - range[0]);
}

function num(v: unknown): number {
  return typeof v === "number" ? v : Number(v);
}

function dateTicks(data: ChartDatum[]): number[] {
  return data.map((d) => Date.parse(d.date ?? String(d.x ?? "")));
}

function textLabel(x: number, y: number, body: string, cls = "annotation"): string {
  return el("text", { x: x.toFixed(1), y: y.toFixed(1), class: cls }, escapeHtml(body));
}

function reflineY(scale: Scale, annotation: Annotation): string {
  const y = scale(annotation.value ?? 0);
  const cls = annotation.role === "claimed" ? "refline claimed" : "refline";
  return (
    el("line", { x1: PAD, x2: W - PAD, y1: y.toFixed(1), y2: y.toFixed(1), class: cls }) +
    (annotation.label ? textLabel(PAD + 4, y - 4, annotation.label, cls + "-label") : "")
  );
}

function svg(kind: string, body: string[]): string {
  return el("svg", {
    viewBox: `0 0 ${W} ${H}`,
    xmlns: "http://www.w3.org/2000/svg",
    class: `evidence-chart kind-${escapeHtml(kind)}`,
    role: "img",
  }, body);
}

function valuesOf(data: ChartDatum[], key: "value" | "x" | "y" | "count"): number[] {
  return data.map((d) => num(d[key] ?? 0));
}

function highlightTargets(spec: ChartSpec): Map<string, Annotation> {
  const out = new Map<string, Annotation>();
  for (const a of spec.annotations) {
    if (a.type === "highlight" && a.target) {
      out.set(a.target, a);
    }
  }
  return out;
}

function renderStrip(spec: ChartSpec): string {
  const values = valuesOf(spec.data, "value");
  const scale = linearScale(values, [PAD, W - PAD]);
  const marks = highlightTargets(spec);
  const body = spec.data.map((d) => {
    const mark = marks.get(d.id);
    return el("circle", {
      cx: scale(num(d.value)).toFixed(1),
      cy: H / 2,
      r: 6,
      class: mark ? "point focus" : "point",
      "data-id": d.id,
    }) + (mark?.label ? textLabel(scale(num(d.value)), H / 2 - 14, mark.label) : "");
  });
  const lines = spec.annotations
    .filter((a) => a.type === "refline")
    .map((a) => {
      const x = scale(a.value ?? 0);
      const cls = a.role === "claimed" ? "refline claimed" : "refline";
      return (
        el("line", { x1: x.toFixed(1), x2: x.toFixed(1), y1: PAD, y2: H - PAD, class: cls }) +
        (a.label ? textLabel(x + 4, PAD + 12, a.label, cls + "-label") : "")
      );
    });
  return svg(spec.kind, [...body, ...lines]);
}

function renderBars(spec: ChartSpec): string {
  const values = valuesOf(spec.data, "value");
  const floor = Math.min(0, ...values);
  const scale = linearScale([floor, ...values], [H - PAD, PAD]);
  const zero = scale(0);
  const step = (W - 2 * PAD) / Math.max(spec.data.length, 1);
  const marks = highlightTargets(spec);
  const bars = spec.data.map((d, i) => {
    const v = num(d.value);
    const y = scale(v);
    const mark = marks.get(d.id);
    const x = PAD + i * step + 2;
    return el("rect", {
      x: x.toFixed(1),
      y: Math.min(y, zero).toFixed(1),
      width: Math.max(step - 4, 2).toFixed(1),
      height: Math.abs(zero - y).toFixed(1),
      class: mark ? "bar focus" : "bar",
      "data-id": d.id,
    }) + (mark?.label ? textLabel(x, Math.min(y, zero) - 6, mark.label) : "");
  });
  const lines = spec.annotations
    .filter((a) => a.type === "refline")
    .map((a) => reflineY(scale, a));
  return svg(spec.kind, [...bars, ...lines]);
}

function renderStacked(spec: ChartSpec): string {
  const values = valuesOf(spec.data, "value");
  const total = values.reduce((a, b) => a + Math.max(b, 0), 0) || 1;
  let cursor = H - PAD;
  const segments = spec.data.map((d) => {
    const height = (Math.max(num(d.value), 0) / total) * (H - 2 * PAD);
    cursor -= height;
    return el("rect", {
      x: W / 2 - 60,
      y: cursor.toFixed(1),
      width: 120,
      height: Math.max(height, 0.5).toFixed(1),
      class: "segment",
      "data-id": d.id,
    });
  });
  const labels = spec.annotations
    .filter((a) => a.type === "refline" || a.type === "label")
    .map((a, i) => textLabel(W / 2 + 70, PAD + 14 * (i + 1),
      a.label ?? a.text ?? "", a.role === "claimed" ? "refline-label claimed" : "annotation"));
  return svg(spec.kind, [...segments, ...labels]);
}

function renderSunburst(spec: ChartSpec): string {
  const inner = spec.data.filter((d) => d.ring === 0);
  const outer = spec.data.filter((d) => d.ring === 1);
  const innerTotal = inner.reduce((a, d) => a + Math.max(num(d.value), 0), 0) || 1;
  const outerTotal = outer.reduce((a, d) => a + Math.max(num(d.value), 0), 0) || 1;
  const rings: string[] = [];
  const circumferenceAt = (r: number) => 2 * Math.PI * r;

  function ringArcs(data: ChartDatum[], total: number, r: number, cls: string) {
    let offset = 0;
    for (const d of data) {
      const fraction = Math.max(num(d.value), 0) / total;
      const c = circumferenceAt(r);
      rings.push(el("circle", {
        cx: W / 2, cy: H / 2, r,
        class: `${cls} ${d.in_focus || d.id === "focus" ? "focus" : ""}`.trim(),
        "data-id": d.id,
        "stroke-dasharray": `${(fraction * c).toFixed(1)} ${(c - fraction * c).toFixed(1)}`,
        "stroke-dashoffset": (-offset * c).toFixed(1),
      }));
      offset += fraction;
    }
  }

  ringArcs(inner, innerTotal, 60, "ring inner");
  ringArcs(outer, outerTotal, 100, "ring outer");
  const labels = spec.annotations
    .filter((a) => a.type === "label")
    .map((a) => textLabel(W / 2, H / 2 + 4, a.text ?? "", "annotation center"));
  return svg(spec.kind, [...rings, ...labels]);
}

function renderLine(spec: ChartSpec): string {
  const xs = dateTicks(spec.data);
  const ys = valuesOf(spec.data, "value");
  const xScale = linearScale(xs, [PAD, W - PAD]);
  const yScale = linearScale(ys, [H - PAD, PAD]);
  const points = spec.data.map((d, i) => `${xScale(xs[i]).toFixed(1)},${yScale(ys[i]).toFixed(1)}`);
  const marks = highlightTargets(spec);
  const dots = spec.data.flatMap((d, i) => {
    const mark = marks.get(d.id);
    if (!mark) {
      return [];
    }
    const x = xScale(xs[i]);
    const y = yScale(ys[i]);
    return [
      el("circle", { cx: x.toFixed(1), cy: y.toFixed(1), r: 5, class: "point focus", "data-id": d.id }),
      mark.label ? textLabel(x + 6, y - 6, mark.label) : "",
    ];
  });
  const regions = spec.annotations
    .filter((a) => a.type === "region")
    .map((a) => {
      const x1 = xScale(Date.parse(String(a.start)));
      const x2 = xScale(Date.parse(String(a.end)));
      return el("rect", {
        x: Math.min(x1, x2).toFixed(1),
        y: PAD,
        width: Math.abs(x2 - x1).toFixed(1),
        height: H - 2 * PAD,
        class: "region",
      }) + (a.label ? textLabel(Math.min(x1, x2) + 4, PAD + 12, a.label, "region-label") : "");
    });
  return svg(spec.kind, [
    ...regions,
    el("polyline", { points: points.join(" "), class: "series" }),
    ...dots,
  ]);
}

function renderScatter(spec: ChartSpec): string {
  const xs = valuesOf(spec.data, "x");
  const ys = valuesOf(spec.data, "y");
  const xScale = linearScale(xs, [PAD, W - PAD]);
  const yScale = linearScale(ys, [H - PAD, PAD]);
  const marks = highlightTargets(spec);
  const dots = spec.data.map((d, i) => {
    const mark = marks.get(d.id);
    const x = xScale(xs[i]);
    const y = yScale(ys[i]);
    return el("circle", {
      cx: x.toFixed(1), cy: y.toFixed(1), r: 5,
      class: mark ? "point focus" : "point",
      "data-id": d.id,
    }) + (mark?.label ? textLabel(x + 6, y - 6, mark.label) : "");
  });
  const labels = spec.annotations
    .filter((a) => a.type === "label")
    .map((a) => textLabel(PAD + 4, PAD - 8, a.text ?? "", "annotation"));
  return svg(spec.kind, [...dots, ...labels]);
}

function renderComparison(spec: ChartSpec): string {
  const values = valuesOf(spec.data, "value");
  const floor = Math.min(0, ...values);
  const scale = linearScale([floor, ...values], [H - PAD, PAD]);
  const zero = scale(0);
  const width = 120;
  const xs = [W / 2 - 150, W / 2 + 30];
  const bars = spec.data.map((d, i) => {
    const y = scale(num(d.value));
    return el("rect", {
      x: xs[i], y: Math.min(y, zero).toFixed(1), width,
      height: Math.abs(zero - y).toFixed(1), class: "bar", "data-id": d.id,
    }) + textLabel(xs[i], H - PAD + 16, d.label ?? d.id, "axis-label");
  });
  const diff = spec.annotations
    .filter((a) => a.type === "diffline")
    .map((a) => {
      const y1 = scale(num(spec.data[0]?.value));
      const y2 = scale(num(spec.data[1]?.value));
      return (
        el("line", {
          x1: xs[0] + width / 2, x2: xs[1] + width / 2,
          y1: y1.toFixed(1), y2: y2.toFixed(1), class: "diffline",
        }) + (a.label ? textLabel(W / 2 - 40, Math.min(y1, y2) - 8, a.label) : "")
      );
    });
  const claimed = spec.annotations
    .filter((a) => a.type === "refline")
    .map((a) => reflineY(scale, a));
  return svg(spec.kind, [...bars, ...diff, ...claimed]);
}

function renderVenn(spec: ChartSpec): string {
  const sets = spec.data.filter((d) => d.id !== "overlap");
  const overlap = spec.data.find((d) => d.id === "overlap");
  const note = spec.annotations.find((a) => a.type === "note");
  if (note || sets.length > 2) {
    // fallback: count matrix instead of overlapping circles
    const rows = spec.data.map((d) =>
      el("text", {
        x: PAD, y: PAD + 18 * (spec.data.indexOf(d) + 1), class: "matrix-row",
      }, `${escapeHtml(d.label ?? d.id)}: ${scalarText(d.count ?? null)}`));
    return svg(spec.kind, [...rows, textLabel(PAD, PAD, note?.text ?? "", "note")]);
  }
  const counts = sets.map((d) => Math.max(num(d.count), 0));
  const maxCount = Math.max(...counts, 1);
  const radius = (c: number) => 30 + 70 * Math.sqrt(c / maxCount);
  const r0 = radius(counts[0] ?? 0);
  const r1 = radius(counts[1] ?? 0);
  const shareRaw = overlap ? num(overlap.count) / Math.max(Math.min(...counts), 1) : 0;
  const share = Math.max(0, Math.min(shareRaw, 1));
  const gap = (r0 + r1) * (1 - 0.6 * share);
  const cx0 = W / 2 - gap / 2;
  const cx1 = W / 2 + gap / 2;
  const body = [
    el("circle", { cx: cx0.toFixed(1), cy: H / 2, r: r0.toFixed(1), class: "venn set-a", "data-id": sets[0]?.id ?? "a" }),
    el("circle", { cx: cx1.toFixed(1), cy: H / 2, r: r1.toFixed(1), class: "venn set-b", "data-id": sets[1]?.id ?? "b" }),
    textLabel(cx0 - r0 / 2, H / 2 - r0 - 6, `${sets[0]?.label ?? ""}: ${scalarText(sets[0]?.count ?? null)}`),
    textLabel(cx1 + 8, H / 2 - r1 - 6, `${sets[1]?.label ?? ""}: ${scalarText(sets[1]?.count ?? null)}`),
  ];
  const labels = spec.annotations
    .filter((a) => a.type === "label")
    .map((a) => textLabel(W / 2 - 40, H / 2, a.text ?? "", "annotation center"));
  return svg(spec.kind, [...body, ...labels]);
}

function renderHistogram(spec: ChartSpec): string {
  const counts = valuesOf(spec.data, "count");
  const scale = linearScale([0, ...counts], [H - PAD, PAD]);
  const step = (W - 2 * PAD) / Math.max(spec.data.length, 1);
  const bars = spec.data.map((d, i) =>
    el("rect", {
      x: (PAD + i * step + 1).toFixed(1),
      y: scale(num(d.count)).toFixed(1),
      width: Math.max(step - 2, 2).toFixed(1),
      height: (H - PAD - scale(num(d.count))).toFixed(1),
      class: "bar",
      "data-id": d.id,
    }));
  const labels = spec.annotations
    .filter((a) => a.type === "label")
    .map((a) => textLabel(PAD + 4, PAD - 8, a.text ?? "", "annotation"));
  return svg(spec.kind, [...bars, ...labels]);
}

const RENDERERS: Record<string, (spec: ChartSpec) => string> = {
  "strip+meanline": renderStrip,
  "sortedbar+medianhighlight": renderBars,
  "stackedbar": renderStacked,
  "sunburst": renderSunburst,
  "line": renderLine,
  "sortedbar+highlight(extreme)": renderBars,
  "sortedbar+highlight(rank)": renderBars,
  "scatter": renderScatter,
  "comparisonbars+diffline": renderComparison,
  "venn": renderVenn,
  "histogram": renderHistogram,
  "strip+outlierhighlight": renderStrip,
  "scatter+outlierhighlight": renderScatter,
};

export function renderChart(spec: ChartSpec): string {
  const renderer = RENDERERS[spec.kind];
  if (!renderer) {
    throw new Error(`unknown chart kind: ${spec.kind}`);
  }
  return renderer(spec);
}

export function chartKinds(): string[] {
  return Object.keys(RENDERERS);
}
