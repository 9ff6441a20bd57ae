/** Filter chips: the visible, editable rendering of applied operations. */
import type { Chip } from "../types.js";
import { el, escapeHtml } from "./html.js";

export function renderChip(chip: Chip, editable: boolean): string {
  const body = escapeHtml(chip.label);
  const remove = editable
    ? el("button", { class: "chip-remove", "data-chip": chip.label, type: "button" }, "x")
    : "";
  return el(
    "span",
    {
      class: "chip",
      "data-attribute": chip.attribute,
      "data-op": chip.op,
      "data-value": String(chip.value),
      // hovering a chip points back at the claim wording it came from
      title: `applied operation: ${chip.label}`,
    },
    body + remove,
  );
}

export function renderChipList(chips: Chip[], editable = false): string {
  const rendered = chips.map((c) => renderChip(c, editable)).join("");
  const add = editable
    ? el("button", { class: "chip-add", type: "button" }, "+ filter")
    : "";
  return el("div", { class: "chips" }, rendered + add);
}

/** Parse a chip editor input like `position = C` or `games_played > 60`. */
export function parseChipInput(text: string): Omit<Chip, "label"> | null {
  const match = text.trim().match(/^(.+?)\s*(>=|<=|!=|=|>|<)\s*(.+)$/);
  if (!match) {
    return null;
  }
  const raw = match[3].trim().replace(/^"|"$/g, "");
  const numeric = Number(raw);
  const value = raw !== "" && !Number.isNaN(numeric) ? numeric : raw;
  return { attribute: match[1].trim(), op: match[2] as Chip["op"], value };
}

/** Chips as a PATCH fragment list (labels are server-derived, not sent). */
export function chipsToFragment(chips: (Chip | Omit<Chip, "label">)[]) {
  return chips.map(({ attribute, op, value }) => ({ attribute, op, value }));
}
