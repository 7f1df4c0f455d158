import type { ApiErrorBody, CreateGameRequest, SessionState } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

/** Thin typed client for the session service; fetch is injectable so tests
 * can replay recorded traffic without a server. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await res.json();
    if (!res.ok) {
      const err = payload as ApiErrorBody;
      throw new ApiError(res.status, err.error ?? "unknown", err.detail ?? res.statusText);
    }
    return payload as T;
  }

  createGame(body: CreateGameRequest): Promise<SessionState> {
    return this.request("POST", "/games", body);
  }

  getGame(id: string): Promise<SessionState> {
    return this.request("GET", `/games/${id}`);
  }

  submitMove(id: string, move: Record<string, unknown>): Promise<SessionState> {
    return this.request("POST", `/games/${id}/moves`, move);
  }

  engineMove(id: string): Promise<SessionState> {
    return this.request("POST", `/games/${id}/engine-move`);
  }

  listStrategies(): Promise<Record<string, string[]>> {
    return this.request("GET", "/strategies");
  }

  replay(id: string): Promise<{ consistent: boolean; winner: string | null }> {
    return this.request("GET", `/games/${id}/replay`);
  }
}
