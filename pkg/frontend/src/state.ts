/** View state: one session, one selected claim, an evidence-form toggle, and
 * revision tracking. Verdict colors must always reflect the latest fetched
 * revision, so anything stale flips needsRefetch instead of rendering. */
import type { ClaimView, SessionView } from "./types.js";

export interface ViewState {
  session: SessionView | null;
  selected: string | null;
  form: "table" | "chart";
  pendingEdit: boolean;
  needsRefetch: boolean;
}

export function initialState(): ViewState {
  return {
    session: null,
    selected: null,
    form: "table",
    pendingEdit: false,
    needsRefetch: false,
  };
}

export function applySession(state: ViewState, session: SessionView): ViewState {
  return { ...state, session, needsRefetch: false };
}

export function applyClaimUpdate(
  state: ViewState, claim: ClaimView, revision: number,
): ViewState {
  if (!state.session) {
    return state;
  }
  if (revision <= state.session.revision && state.session.revision !== 0) {
    // an older (or duplicate) revision arrived; the snapshot must be refetched
    return { ...state, needsRefetch: true };
  }
  const claims = state.session.claims.map((c) => (c.id === claim.id ? claim : c));
  return {
    ...state,
    session: { ...state.session, claims, revision },
    pendingEdit: false,
  };
}

export function applyDocumentText(state: ViewState, text: string, revision: number): ViewState {
  if (!state.session) {
    return state;
  }
  return { ...state, session: { ...state.session, text, revision } };
}

export function selectClaim(state: ViewState, claimId: string | null): ViewState {
  return { ...state, selected: claimId };
}

export function toggleForm(state: ViewState): ViewState {
  return { ...state, form: state.form === "table" ? "chart" : "table" };
}
