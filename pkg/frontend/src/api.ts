import type { Audience, NavEventDoc, NavMove, SessionStateDoc } from "./types";

export interface HttpResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

/** Minimal fetch shape so tests can inject a replaying transport. */
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string }
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Thin typed wrapper over the service's JSON endpoints. */
export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchLike: FetchLike = (url, init) => fetch(url, init)
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  absolute(path: string): string {
    return path.startsWith("http") ? path : this.baseUrl + path;
  }

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await this.fetchLike(this.absolute(path), {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = (await response.json().catch(() => ({}))) as {
      detail?: string;
    };
    if (!response.ok) {
      throw new ApiError(response.status, payload.detail ?? "request failed");
    }
    return payload;
  }

  createSession(audience: Audience): Promise<NavEventDoc> {
    return this.request("POST", "/sessions", { audience }) as Promise<NavEventDoc>;
  }

  getSession(sessionId: string): Promise<SessionStateDoc> {
    return this.request("GET", `/sessions/${sessionId}`) as Promise<SessionStateDoc>;
  }

  move(sessionId: string, move: NavMove): Promise<NavEventDoc> {
    return this.request("POST", `/sessions/${sessionId}/move`, {
      move: move.move,
      index: move.index ?? 0,
    }) as Promise<NavEventDoc>;
  }
}
