/** Transport layer: everything that talks to the server lives here. */

import type {
  ColourToken,
  ScenarioListing,
  SessionSummary,
  StateView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

/** The slice of the API the UI needs; tests substitute a scripted fake. */
export interface Transport {
  listScenarios(): Promise<ScenarioListing>;
  createSession(scenario: string, config: string | null, seed: number | null): Promise<SessionSummary>;
  getState(sessionId: string): Promise<StateView>;
  announce(sessionId: string, colour: ColourToken): Promise<StateView>;
  advance(sessionId: string): Promise<StateView>;
}

export class HttpTransport implements Transport {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const error = body?.error;
      throw new ApiError(
        error?.code ?? "error",
        error?.message ?? `request failed with status ${response.status}`,
        response.status,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
  }

  listScenarios(): Promise<ScenarioListing> {
    return this.request("/api/scenarios");
  }

  createSession(scenario: string, config: string | null, seed: number | null): Promise<SessionSummary> {
    const payload: Record<string, unknown> = { scenario };
    if (config !== null) payload.config = config;
    if (seed !== null) payload.seed = seed;
    return this.post("/api/sessions", payload);
  }

  getState(sessionId: string): Promise<StateView> {
    return this.request(`/api/sessions/${sessionId}`);
  }

  announce(sessionId: string, colour: ColourToken): Promise<StateView> {
    return this.post(`/api/sessions/${sessionId}/announce`, { colour });
  }

  advance(sessionId: string): Promise<StateView> {
    return this.post(`/api/sessions/${sessionId}/advance`);
  }
}
