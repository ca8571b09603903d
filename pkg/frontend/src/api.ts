import type { ScenarioDoc } from "./schema.js";

/**
 * Thin client for the scenario service.  Live-recompute calls are
 * debounced and tagged with a monotonically increasing token so that a
 * slow response for an older edit can never overwrite the report for a
 * newer one: callers only ever see the reply to the latest request.
 */

export const DEBOUNCE_MS = 150;

export interface StabilityResponse {
  status: "ok" | "frozen_market";
  aggregates: { v_o: number; e: number; f_o: number; r_hat: number[] };
  q_hat_min?: number[];
  q_min?: number[];
  sensitive_set?: number[];
  kappa?: number;
  viable?: boolean;
  statuses?: string[];
  stable?: boolean;
  outcome?: {
    new_shares: number[];
    variances: number[];
    new_population: number;
  };
}

export interface ScenarioRecord {
  name: string;
  version: number;
  created_at: string;
  updated_at: string;
  scenario: ScenarioDoc;
}

export interface ApiError {
  status: number;
  error: string;
  message: string;
  field?: string;
}

export type FetchFn = typeof fetch;

async function readError(response: Response): Promise<ApiError> {
  let body: { error?: string; message?: string; field?: string } = {};
  try {
    body = await response.json();
  } catch {
    /* non-JSON error body */
  }
  return {
    status: response.status,
    error: body.error ?? "http_error",
    message: body.message ?? response.statusText,
    field: body.field,
  };
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchFn;
  private readonly debounceMs: number;
  private nextToken = 0;
  private latestToken = 0;
  private pendingTimer: ReturnType<typeof setTimeout> | null = null;
  private pendingCancel: (() => void) | null = null;

  constructor(baseUrl = "", fetchFn: FetchFn = fetch, debounceMs = DEBOUNCE_MS) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
    this.debounceMs = debounceMs;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw await readError(response);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  stability(
    scenario: ScenarioDoc,
    delta: number,
    q?: number[],
  ): Promise<StabilityResponse> {
    return this.request("POST", "/api/v1/stability", { scenario, delta, q });
  }

  /**
   * Debounced stability call for slider edits.  Resolves with the
   * report when this call is still the latest, or null when a newer
   * edit superseded it (either before dispatch or while in flight).
   */
  stabilityDebounced(
    scenario: ScenarioDoc,
    delta: number,
    q?: number[],
  ): Promise<StabilityResponse | null> {
    const token = ++this.nextToken;
    this.latestToken = token;
    if (this.pendingTimer !== null) {
      clearTimeout(this.pendingTimer);
      this.pendingCancel?.();
    }
    return new Promise((resolve, reject) => {
      this.pendingCancel = () => resolve(null);
      this.pendingTimer = setTimeout(() => {
        this.pendingTimer = null;
        this.pendingCancel = null;
        if (token !== this.latestToken) {
          resolve(null);
          return;
        }
        this.stability(scenario, delta, q).then(
          (report) =>
            resolve(token === this.latestToken ? report : null),
          (error) => {
            if (token === this.latestToken) {
              reject(error);
            } else {
              resolve(null);
            }
          },
        );
      }, this.debounceMs);
    });
  }

  listScenarios(): Promise<{ scenarios: ScenarioRecord[] }> {
    return this.request("GET", "/api/v1/scenarios");
  }

  getScenario(name: string): Promise<ScenarioRecord> {
    return this.request("GET", `/api/v1/scenarios/${encodeURIComponent(name)}`);
  }

  putScenario(
    name: string,
    scenario: ScenarioDoc,
    version?: number,
  ): Promise<ScenarioRecord> {
    return this.request("PUT", `/api/v1/scenarios/${encodeURIComponent(name)}`, {
      scenario,
      version,
    });
  }

  deleteScenario(name: string): Promise<void> {
    return this.request("DELETE", `/api/v1/scenarios/${encodeURIComponent(name)}`);
  }
}
