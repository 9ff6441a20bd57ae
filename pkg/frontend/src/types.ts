/** Wire types: the service API plus the evidence-v1 bundle format. */

export type Verdict = "accurate" | "inaccurate" | "unverifiable";

export interface Chip {
  attribute: string;
  op: "=" | "!=" | ">" | ">=" | "<" | "<=";
  value: string | number;
  label: string;
}

export interface ClaimView {
  id: string;
  session_id: string;
  text: string;
  char_span: [number, number];
  fact_type: string | null;
  subtype: string | null;
  spec_text: string | null;
  spec_source: "model" | "human";
  dataset_id: string | null;
  verdict: Verdict;
  claimed: { text: string; value: number | string | null } | null;
  actual: number | string | boolean | null;
  statistics: Record<string, number>;
  explanation: string;
  rectification: string | null;
  diagnostics: string[];
  chips: { subspace?: Chip[]; focus?: Chip[] };
}

export interface SessionView {
  session_id: string;
  revision: number;
  dataset_id: string;
  parser: string;
  text: string;
  claims: ClaimView[];
}

export interface ClaimsList {
  revision: number;
  claims: ClaimView[];
}

export interface DatasetInfo {
  dataset_id: string;
  name: string;
  schema: { name: string; kind: string }[];
}

export interface PatchedClaim {
  revision: number;
  claim: ClaimView;
  verdict_flipped: boolean;
  text_revision: string | null;
}

export interface RectifyResponse {
  revision: number;
  revised_text: string;
  claim: ClaimView;
}

export interface SuitabilityResponse {
  revision: number;
  claim_id: string;
  dataset_id: string;
  score: number;
}

/** A spec fragment for PATCH /claims/{id}/spec; chips omit their label. */
export interface SpecFragment {
  spec_text?: string;
  measure?: string;
  measure_x?: string;
  measure_y?: string;
  value?: number | string;
  aggregation?: "average" | "median" | "sum";
  identifier_key?: string;
  subspace?: Omit<Chip, "label">[];
  focus?: Omit<Chip, "label">[];
}

// --- evidence-v1 -------------------------------------------------------------

export interface TableColumn {
  name: string;
  sort: "asc" | "desc" | null;
  widgets: Chip[];
}

export interface TableRow {
  id: string;
  cells: (string | number | null)[];
}

export interface SummaryRow {
  label: string;
  value: number | string;
  highlighted: boolean;
}

export interface TableLayout {
  kind: string;
  columns: TableColumn[];
  rows: TableRow[];
  sticky_summary_rows: SummaryRow[];
  highlight_row_ids: string[];
  index_column: boolean;
  widgets: Chip[];
  truncated: { total_rows: number } | null;
}

export interface ChartDatum {
  id: string;
  label?: string;
  value?: number | string | null;
  x?: number | string | null;
  y?: number | string | null;
  date?: string;
  count?: number;
  bin_start?: number;
  bin_end?: number;
  ring?: number;
  in_focus?: boolean;
}

export interface Annotation {
  type: "refline" | "highlight" | "label" | "region" | "diffline" | "note";
  orient?: "x" | "y";
  value?: number;
  label?: string;
  target?: string;
  text?: string;
  axis?: "x" | "y";
  start?: string | number | null;
  end?: string | number | null;
  from?: string;
  to?: string;
  role?: "claimed";
}

export interface ChartSpec {
  kind: string;
  data: ChartDatum[];
  encodings: Record<string, unknown>;
  annotations: Annotation[];
  widgets: Chip[];
}

export interface EvidenceResponse {
  revision: number;
  claim_id: string;
  version: string;
  fact_subtype: string;
  verdict: Verdict;
  table?: TableLayout;
  chart?: ChartSpec;
  context?: ChartSpec | null;
}
