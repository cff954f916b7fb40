import type { AssertionRecord, LabelInfo, Report, Verdict } from "./types.js";

/** HTTP error carrying the status code and the server's detail payload. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : `request failed with status ${status}`);
    this.name = "ApiError";
  }
}

/** Thin typed client over the annotation service; one method per endpoint. */
export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let payload: unknown = null;
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = text;
      }
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  async getCandidates(partition?: number, limit = 50): Promise<AssertionRecord[]> {
    const params = new URLSearchParams({ limit: String(limit) });
    if (partition !== undefined) params.set("partition", String(partition));
    const body = await this.request<{ candidates: AssertionRecord[] }>(
      "GET",
      `/candidates?${params}`,
    );
    return body.candidates;
  }

  async getAssertions(filters: {
    partition?: number;
    status?: string;
    concept?: string;
  } = {}): Promise<AssertionRecord[]> {
    const params = new URLSearchParams();
    if (filters.partition !== undefined) params.set("partition", String(filters.partition));
    if (filters.status) params.set("status", filters.status);
    if (filters.concept) params.set("concept", filters.concept);
    const query = params.toString();
    const body = await this.request<{ assertions: AssertionRecord[] }>(
      "GET",
      query ? `/assertions?${query}` : "/assertions",
    );
    return body.assertions;
  }

  async getLabels(): Promise<LabelInfo[]> {
    const body = await this.request<{ labels: LabelInfo[] }>("GET", "/labels");
    return body.labels;
  }

  async getPartitions(): Promise<number[]> {
    const body = await this.request<{ partitions: number[] }>("GET", "/partitions");
    return body.partitions;
  }

  labelAssertion(
    id: string,
    label: string,
    annotator: string,
    force = false,
  ): Promise<AssertionRecord> {
    return this.request("POST", `/assertions/${encodeURIComponent(id)}/label`, {
      label,
      annotator,
      force,
    });
  }

  rejectAssertion(id: string, annotator: string): Promise<AssertionRecord> {
    return this.request("POST", `/assertions/${encodeURIComponent(id)}/reject`, { annotator });
  }

  judgeAssertion(id: string, expert: string, verdict: Verdict): Promise<unknown> {
    return this.request("POST", `/assertions/${encodeURIComponent(id)}/judgment`, {
      expert,
      verdict,
    });
  }

  getReport(partition: number): Promise<Report> {
    return this.request("GET", `/report/${partition}`);
  }
}
