/** Thin client over the claimcheck HTTP API. The fetch function is injected
 * so tests can replay recorded responses. */
import type {
  ClaimsList,
  DatasetInfo,
  EvidenceResponse,
  PatchedClaim,
  RectifyResponse,
  SessionView,
  SpecFragment,
  SuitabilityResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown,
                           raw?: BodyInit): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (raw !== undefined) {
      init.body = raw;
      (init.headers as Record<string, string>)["content-type"] = "text/csv";
    } else if (body !== undefined) {
      init.body = JSON.stringify(body);
      (init.headers as Record<string, string>)["content-type"] = "application/json";
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload.detail ?? payload);
    }
    return payload as T;
  }

  uploadDataset(name: string, csv: string): Promise<DatasetInfo> {
    return this.request("POST", `/datasets?name=${encodeURIComponent(name)}`, undefined, csv);
  }

  listDatasets(): Promise<{ datasets: DatasetInfo[] }> {
    return this.request("GET", "/datasets");
  }

  createSession(text: string, datasetId: string, parser = "template"): Promise<SessionView> {
    return this.request("POST", "/sessions", { text, dataset_id: datasetId, parser });
  }

  session(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  claims(sessionId: string): Promise<ClaimsList> {
    return this.request("GET", `/sessions/${sessionId}/claims`);
  }

  evidence(claimId: string, form: "table" | "chart" | "both"): Promise<EvidenceResponse> {
    return this.request("GET", `/claims/${claimId}/evidence?form=${form}`);
  }

  patchSpec(claimId: string, fragment: SpecFragment): Promise<PatchedClaim> {
    return this.request("PATCH", `/claims/${claimId}/spec`, fragment);
  }

  rectify(claimId: string): Promise<RectifyResponse> {
    return this.request("POST", `/claims/${claimId}/rectify`);
  }

  bindDataset(claimId: string, datasetId: string): Promise<PatchedClaim> {
    return this.request("POST", `/claims/${claimId}/dataset`, { dataset_id: datasetId });
  }

  suitability(claimId: string, datasetId: string): Promise<SuitabilityResponse> {
    return this.request(
      "GET", `/claims/${claimId}/suitability?dataset_id=${encodeURIComponent(datasetId)}`);
  }
}
