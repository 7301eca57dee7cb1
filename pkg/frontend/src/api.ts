/** Fetch client for the planning service. */

import type { ApiEnvelope, ApiIssue, Catalog, ScenarioDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public issues: ApiIssue[],
  ) {
    super(`service returned ${status}`);
  }
}

async function readIssues(response: Response): Promise<ApiIssue[]> {
  try {
    const body = await response.json();
    if (Array.isArray(body.errors)) return body.errors;
  } catch {
    // non-JSON error body
  }
  return [{ path: "", message: `service returned status ${response.status}` }];
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async post(
    endpoint: string,
    doc: ScenarioDoc,
    signal?: AbortSignal,
  ): Promise<ApiEnvelope> {
    const response = await fetch(`${this.baseUrl}${endpoint}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
      signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await readIssues(response));
    }
    return (await response.json()) as ApiEnvelope;
  }

  evaluate(doc: ScenarioDoc, signal?: AbortSignal): Promise<ApiEnvelope> {
    return this.post("/api/evaluate", doc, signal);
  }

  correct(doc: ScenarioDoc, signal?: AbortSignal): Promise<ApiEnvelope> {
    return this.post("/api/correct", doc, signal);
  }

  async catalog(): Promise<Catalog> {
    const response = await fetch(`${this.baseUrl}/api/catalog`);
    if (!response.ok) {
      throw new ApiError(response.status, await readIssues(response));
    }
    return (await response.json()) as Catalog;
  }
}
