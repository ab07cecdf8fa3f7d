/** Thin typed client over the three review endpoints. */

import type { Label, SessionInfo, TaskPayload } from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

/** Submit outcomes the controller must tell apart. */
export type SubmitResult = "ok" | "conflict";

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async session(): Promise<SessionInfo> {
    const resp = await this.fetchFn(`${this.base}/api/session`);
    if (resp.status !== 200) throw new Error(`session: http ${resp.status}`);
    return (await resp.json()) as SessionInfo;
  }

  /** Next pending task, or null when the queue is idle (204). */
  async nextTask(): Promise<TaskPayload | null> {
    const resp = await this.fetchFn(`${this.base}/api/tasks/next`);
    if (resp.status === 204) return null;
    if (resp.status !== 200) throw new Error(`next: http ${resp.status}`);
    return (await resp.json()) as TaskPayload;
  }

  /**
   * Label one pair. A 409 means the task is stale (already labeled or
   * the session closed underneath us) and the caller should refetch.
   */
  async submit(pairId: number, label: Label): Promise<SubmitResult> {
    const resp = await this.fetchFn(`${this.base}/api/tasks/${pairId}/label`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ label }),
    });
    if (resp.status === 409) return "conflict";
    if (resp.status !== 200) throw new Error(`submit: http ${resp.status}`);
    return "ok";
  }
}
