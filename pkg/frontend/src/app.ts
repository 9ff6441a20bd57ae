/** Browser bootstrap: input view (paste text, pick dataset), result view
 * (color-coded claims), evidence view (toggle, chips, rectify, binding). */
import { ApiClient, ApiError } from "./api.js";
import { parseChipInput, chipsToFragment } from "./render/chips.js";
import { renderResultView } from "./render/document.js";
import { renderBindingPrompt, renderEvidenceView } from "./render/evidence.js";
import {
  ViewState,
  applyClaimUpdate,
  applyDocumentText,
  applySession,
  initialState,
  selectClaim,
  toggleForm,
} from "./state.js";
import type { Chip, ClaimView, EvidenceResponse } from "./types.js";

const api = new ApiClient(
  (window as unknown as { CLAIMCHECK_API?: string }).CLAIMCHECK_API ?? "",
);

let state: ViewState = initialState();
let evidenceCache: EvidenceResponse | null = null;

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function selectedClaim(): ClaimView | null {
  if (!state.session || !state.selected) {
    return null;
  }
  return state.session.claims.find((c) => c.id === state.selected) ?? null;
}

async function refetchSession() {
  if (!state.session) {
    return;
  }
  state = applySession(state, await api.session(state.session.session_id));
  renderAll();
}

async function update(next: ViewState) {
  state = next;
  if (state.needsRefetch) {
    await refetchSession();
    return;
  }
  renderAll();
}

function renderAll() {
  const result = byId<HTMLElement>("result-view");
  result.innerHTML = state.session ? renderResultView(state.session) : "";
  const evidence = byId<HTMLElement>("evidence-view");
  const claim = selectedClaim();
  evidence.innerHTML = claim ? renderEvidenceView(claim, evidenceCache, state.form) : "";
}

async function openEvidence(claimId: string) {
  state = selectClaim(state, claimId);
  const claim = selectedClaim();
  evidenceCache = null;
  if (claim && claim.verdict !== "unverifiable") {
    try {
      evidenceCache = await api.evidence(claimId, "both");
    } catch (error) {
      if (!(error instanceof ApiError && error.status === 409)) {
        throw error;
      }
    }
  } else if (claim) {
    const { datasets } = await api.listDatasets();
    const scores: Record<string, number> = {};
    for (const d of datasets) {
      scores[d.dataset_id] = (await api.suitability(claimId, d.dataset_id)).score;
    }
    renderAll();
    byId<HTMLElement>("evidence-view").insertAdjacentHTML(
      "beforeend", renderBindingPrompt(claim, datasets, scores));
    return;
  }
  renderAll();
}

async function submitChips(claimId: string, chips: { attribute: string; op: string; value: string | number }[]) {
  // optimistic: mark the editor busy with the pending chips, roll back on 422
  const editor = document.querySelector<HTMLElement>(`.chip-editor[data-claim-id="${claimId}"]`);
  editor?.classList.add("pending");
  try {
    const response = await api.patchSpec(claimId, {
      subspace: chips as { attribute: string; op: Chip["op"]; value: string | number }[],
    });
    await update(applyClaimUpdate(state, response.claim, response.revision));
  } catch (error) {
    renderAll(); // roll the optimistic edit back to the last known state
    if (error instanceof ApiError && error.status === 422) {
      window.alert(`invalid filter: ${JSON.stringify(error.detail)}`);
      return;
    }
    throw error;
  } finally {
    editor?.classList.remove("pending");
  }
}

function wire() {
  byId<HTMLButtonElement>("check").addEventListener("click", async () => {
    const text = byId<HTMLTextAreaElement>("document").value;
    const datasetId = byId<HTMLSelectElement>("dataset").value;
    state = applySession(initialState(), await api.createSession(text, datasetId));
    renderAll();
  });

  byId<HTMLInputElement>("csv").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) {
      return;
    }
    const info = await api.uploadDataset(file.name.replace(/\.csv$/, ""), await file.text());
    const option = document.createElement("option");
    option.value = info.dataset_id;
    option.textContent = info.name;
    byId<HTMLSelectElement>("dataset").appendChild(option);
  });

  byId<HTMLElement>("result-view").addEventListener("click", (event) => {
    const mark = (event.target as HTMLElement).closest("mark.claim");
    if (mark) {
      void openEvidence(mark.getAttribute("data-claim-id")!);
    }
  });

  byId<HTMLElement>("evidence-view").addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const claim = selectedClaim();
    if (!claim) {
      return;
    }
    if (target.matches("[data-form]")) {
      await update(toggleForm(state));
      return;
    }
    if (target.matches("button.rectify")) {
      // show the before/after diff; cancelling must not mutate anything
      const preview = claim.rectification === null ? null
        : `${claim.text}\n-> ${claim.text.replace(claim.claimed?.text ?? "", claim.rectification)}`;
      if (!window.confirm(`Apply this revision?\n\n${preview ?? claim.text}`)) {
        return;
      }
      const response = await api.rectify(claim.id);
      state = applyDocumentText(state, response.revised_text, response.revision);
      await refetchSession();
      return;
    }
    if (target.matches("button.bind")) {
      const response = await api.bindDataset(claim.id, target.getAttribute("data-dataset-id")!);
      await update(applyClaimUpdate(state, response.claim, response.revision));
      return;
    }
    if (target.matches("button.chip-add")) {
      const entry = window.prompt("filter (attribute op value):");
      const chip = entry ? parseChipInput(entry) : null;
      if (!chip) {
        return;
      }
      const chips = chipsToFragment(claim.chips.subspace ?? []);
      await submitChips(claim.id, [...chips, chip]);
      return;
    }
    if (target.matches("button.chip-remove")) {
      const label = target.getAttribute("data-chip");
      const chips = (claim.chips.subspace ?? []).filter((c) => c.label !== label);
      await submitChips(claim.id, chipsToFragment(chips));
    }
  });
}

document.addEventListener("DOMContentLoaded", wire);
