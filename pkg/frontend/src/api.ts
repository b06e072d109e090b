// Thin typed client over the crowd-service HTTP API. The UI keeps no
// authoritative state: every number displayed is fetched from here.

import type {
  AnonymousSummary,
  GameConfig,
  Leaderboard,
  MethodSummary,
  Player,
  SummaryResult,
  Task,
  VoteResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown, playerId?: string): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (playerId) headers["X-Player-Id"] = playerId;
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    const data = text ? JSON.parse(text) : {};
    if (!resp.ok) {
      const detail = (data && (data.error || data.detail)) || resp.statusText;
      throw new ApiError(resp.status, String(detail));
    }
    return data as T;
  }

  health(): Promise<{ ok: boolean }> {
    return this.request("GET", "/health");
  }

  config(): Promise<GameConfig> {
    return this.request("GET", "/config");
  }

  register(name: string, tier: string): Promise<Player> {
    return this.request("POST", "/players", { name, tier });
  }

  player(id: string): Promise<Player> {
    return this.request("GET", `/players/${id}`);
  }

  tasks(maxLevel?: number): Promise<{ tasks: Task[] }> {
    const query = maxLevel === undefined ? "" : `?max_level=${maxLevel}`;
    return this.request("GET", `/tasks${query}`);
  }

  submitSummary(playerId: string, taskId: string, text: string): Promise<SummaryResult> {
    return this.request("POST", `/tasks/${taskId}/summaries`, { text }, playerId);
  }

  taskSummaries(taskId: string, playerId?: string): Promise<{ summaries: AnonymousSummary[] }> {
    return this.request("GET", `/tasks/${taskId}/summaries`, undefined, playerId);
  }

  vote(playerId: string, submissionId: string, direction: "up" | "down"): Promise<VoteResult> {
    return this.request("POST", `/summaries/${submissionId}/votes`, { direction }, playerId);
  }

  leaderboardGlobal(playerId?: string): Promise<Leaderboard> {
    return this.request("GET", "/leaderboard/global", undefined, playerId);
  }

  leaderboardLocal(tier: string, playerId?: string): Promise<Leaderboard> {
    return this.request("GET", `/leaderboard/local?tier=${encodeURIComponent(tier)}`, undefined, playerId);
  }

  methodSummary(taskId: string, mode: "upvotes" | "similarity" | "merged"): Promise<MethodSummary> {
    return this.request("GET", `/methods/${taskId}/summaries?mode=${mode}`);
  }
}
