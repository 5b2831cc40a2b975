/** Thin typed client over the orchestrator HTTP JSON API. */

export interface PairRecord {
  id: string;
  version: string;
  hs_original: string;
  cn_original: string;
  hs_edited?: string;
  cn_edited?: string;
  status: string;
  target?: string;
  strategy: string;
  chunk_id?: string;
  chunk_index?: number;
}

export interface VerdictPayload {
  verdict: "UNTOUCHED" | "MODIFIED" | "DISCARDED";
  annotator: string;
  hs_edited?: string;
  cn_edited?: string;
  target?: string;
  elapsed_seconds: number;
}

export interface Dashboard {
  loop: string;
  open: boolean;
  strategy: string;
  quota: number;
  accepted: number;
  pending: number;
  administered: number;
  untouched: number;
  modified: number;
  discarded: number;
  untouched_pct: number | null;
  modified_pct: number | null;
  discarded_pct: number | null;
  hter_all: number | null;
  imbalance_degree: number | null;
}

export interface VersionInfo {
  name: string;
  frozen: boolean;
  quota: number;
  records: number;
  predecessors: string[];
}

/** Error carrying the HTTP status so the UI can distinguish lease expiry. */
export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  /** Next pending pair leased to the annotator; null when the queue is empty. */
  async fetchNext(annotator: string): Promise<PairRecord | null> {
    const response = await fetch(
      `${this.baseUrl}/review/next?annotator=${encodeURIComponent(annotator)}`,
    );
    if (response.status === 204) return null;
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as PairRecord;
  }

  async submitVerdict(pairId: string, payload: VerdictPayload): Promise<PairRecord> {
    const response = await fetch(
      `${this.baseUrl}/review/${encodeURIComponent(pairId)}`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      },
    );
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as PairRecord;
  }

  dashboard(loop: string): Promise<Dashboard> {
    return this.get(`/loops/${encodeURIComponent(loop)}/dashboard`);
  }

  versions(): Promise<VersionInfo[]> {
    return this.get(`/versions`);
  }

  /** Full report JSON of a frozen version; rendered verbatim, never recomputed. */
  report(version: string): Promise<Record<string, unknown>> {
    return this.get(`/versions/${encodeURIComponent(version)}/report`);
  }
}
