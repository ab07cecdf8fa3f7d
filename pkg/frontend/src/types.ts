/**
 * Wire types for the review service API.
 *
 * These mirror the JSON the server actually sends; the client renders
 * nothing that is not in one of these payloads.
 */

/** One attribute's masked comparison state. */
export type MaskState =
  | { kind: "agree"; freq?: "freq" | "rare" }
  | { kind: "partial"; a: string | null; b: string | null }
  | { kind: "disagree" }
  | { kind: "withheld" };

/** GET /api/tasks/next (200). */
export interface TaskPayload {
  pair_id: number;
  attributes: Record<string, MaskState>;
}

/** GET /api/session. */
export interface SessionInfo {
  run_id: string;
  pending_count: number;
  budget_remaining: number | null;
}

/** POST /api/tasks/{pair_id}/label body. */
export type Label = "match" | "nonmatch";

/** Everything the page needs to draw one moment of the session. */
export interface TaskViewModel {
  task: TaskPayload | null;
  pendingCount: number;
  budgetRemaining: number | null;
  labeled: number;
}
