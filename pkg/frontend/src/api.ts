// Client for the analysis service. The service answers malformed requests
// with HTTP 400 and an {"error": {kind, detail}} body; structurally valid
// requests that hit a degenerate computation come back HTTP 200 with the
// same error shape, so both funnel into the same failure type here.

import type { AnalyzeData, ServiceError, TransferData } from "./model.js";

export type ApiResult<T> =
  | { ok: true; value: T; raw: string }
  | { ok: false; error: ServiceError; status: number };

export interface TransferRequest {
  graph: unknown;
  substitutions?: Record<string, string>;
  monic?: boolean;
  variable?: string;
}

export interface AnalyzeRequest {
  graph?: unknown;
  tf?: { num: number[]; den: number[] };
  substitutions?: Record<string, string>;
  variable?: string;
  grid?: { wmin?: number; wmax?: number; points?: number };
  routh?: boolean;
  roots?: boolean;
  reduce?: number;
}

export interface HealthInfo {
  status: string;
  name: string;
  version: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<ApiResult<T>> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
        signal,
      });
    } catch (exc) {
      return {
        ok: false,
        status: 0,
        error: { kind: "network", detail: String(exc) },
      };
    }
    const raw = await response.text();
    let data: unknown = null;
    try {
      data = JSON.parse(raw);
    } catch {
      return {
        ok: false,
        status: response.status,
        error: { kind: "protocol", detail: "response was not JSON" },
      };
    }
    const asError = extractError(data);
    if (asError) return { ok: false, status: response.status, error: asError };
    if (!response.ok) {
      return {
        ok: false,
        status: response.status,
        error: { kind: "http", detail: `unexpected status ${response.status}` },
      };
    }
    return { ok: true, value: data as T, raw };
  }

  health(signal?: AbortSignal): Promise<ApiResult<HealthInfo>> {
    return this.request("GET", "/health", undefined, signal);
  }

  transfer(
    body: TransferRequest,
    signal?: AbortSignal,
  ): Promise<ApiResult<TransferData>> {
    return this.request("POST", "/api/transfer", body, signal);
  }

  analyze(
    body: AnalyzeRequest,
    signal?: AbortSignal,
  ): Promise<ApiResult<AnalyzeData>> {
    return this.request("POST", "/api/analyze", body, signal);
  }
}

function extractError(data: unknown): ServiceError | null {
  if (
    typeof data === "object" &&
    data !== null &&
    "error" in data &&
    typeof (data as { error: unknown }).error === "object" &&
    (data as { error: unknown }).error !== null
  ) {
    const err = (data as { error: Record<string, unknown> }).error;
    return {
      kind: typeof err.kind === "string" ? err.kind : "unknown",
      detail: typeof err.detail === "string" ? err.detail : "",
    };
  }
  return null;
}

export type LatestOutcome<T> = { stale: true } | { stale: false; value: T };

// At most one compute in flight per document: starting a new request aborts
// the previous one, and a response that is no longer the newest is dropped.
export class LatestWins {
  private seq = 0;
  private controller: AbortController | null = null;

  get pending(): boolean {
    return this.controller !== null;
  }

  async run<T>(
    task: (signal: AbortSignal) => Promise<T>,
  ): Promise<LatestOutcome<T>> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const ticket = ++this.seq;
    try {
      const value = await task(controller.signal);
      if (ticket !== this.seq) return { stale: true };
      this.controller = null;
      return { stale: false, value };
    } catch (exc) {
      if (ticket !== this.seq || controller.signal.aborted) {
        return { stale: true };
      }
      this.controller = null;
      throw exc;
    }
  }
}
