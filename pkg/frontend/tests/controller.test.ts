import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ReviewController, type ReviewApi } from "../src/controller.js";
import type { Label, SessionInfo, TaskPayload } from "../src/types.js";
import type { SubmitResult } from "../src/api.js";

function task(pairId: number): TaskPayload {
  return {
    pair_id: pairId,
    attributes: { first_name: { kind: "agree" } },
  };
}

/** Scripted server: a queue of nextTask outcomes plus canned responses. */
class FakeApi implements ReviewApi {
  queue: Array<TaskPayload | null | Error> = [];
  sessionInfo: SessionInfo = {
    run_id: "run",
    pending_count: 0,
    budget_remaining: null,
  };
  submissions: Array<{ pairId: number; label: Label }> = [];
  submitResults: SubmitResult[] = [];
  sessionCalls = 0;

  async session(): Promise<SessionInfo> {
    this.sessionCalls += 1;
    return this.sessionInfo;
  }

  async nextTask(): Promise<TaskPayload | null> {
    const next = this.queue.shift();
    if (next === undefined) return null;
    if (next instanceof Error) throw next;
    return next;
  }

  async submit(pairId: number, label: Label): Promise<SubmitResult> {
    this.submissions.push({ pairId, label });
    return this.submitResults.shift() ?? "ok";
  }
}

// Let queued microtasks (awaits inside the controller) settle.
async function settle(): Promise<void> {
  for (let i = 0; i < 10; i += 1) await Promise.resolve();
}

describe("review controller", () => {
  let api: FakeApi;
  let controller: ReviewController;
  let rendered: string[];

  beforeEach(() => {
    vi.useFakeTimers();
    api = new FakeApi();
    rendered = [];
    controller = new ReviewController(
      api,
      (vm) => rendered.push(vm.task === null ? "idle" : `task:${vm.task.pair_id}`),
      { minDelay: 100, maxDelay: 400 },
    );
  });

  afterEach(() => {
    controller.stop();
    vi.useRealTimers();
  });

  it("shows the idle state on 204 and polls with growing delay", async () => {
    api.queue = [null, null, task(1)];
    await controller.start();
    await settle();
    expect(controller.view().task).toBeNull();

    await vi.advanceTimersByTimeAsync(100); // first retry, still idle
    expect(controller.view().task).toBeNull();

    await vi.advanceTimersByTimeAsync(199); // backoff doubled; not yet due
    expect(controller.view().task).toBeNull();
    await vi.advanceTimersByTimeAsync(1); // 200ms mark: task arrives
    expect(controller.view().task?.pair_id).toBe(1);
  });

  it("treats a network failure like idle and keeps retrying", async () => {
    api.queue = [new Error("connection refused"), task(5)];
    await controller.start();
    await settle();
    expect(controller.view().task).toBeNull();
    await vi.advanceTimersByTimeAsync(100);
    expect(controller.view().task?.pair_id).toBe(5);
  });

  it("refreshes server counters at a batch boundary, then counts down locally", async () => {
    api.sessionInfo = { run_id: "run", pending_count: 2, budget_remaining: 8 };
    api.queue = [task(1)];
    await controller.start();
    await settle();
    expect(api.sessionCalls).toBe(1);
    expect(controller.view().budgetRemaining).toBe(8);
    expect(controller.view().pendingCount).toBe(2);

    api.queue = [task(2)];
    await controller.submit("match");
    await settle();
    // No idle gap between the two tasks: no second session fetch, and
    // the budget ticks down on the client.
    expect(api.sessionCalls).toBe(1);
    expect(controller.view().budgetRemaining).toBe(7);
    expect(controller.view().pendingCount).toBe(1);
    expect(controller.view().labeled).toBe(1);
    expect(controller.view().task?.pair_id).toBe(2);
  });

  it("sends exactly one POST for a double submit", async () => {
    api.queue = [task(3)];
    await controller.start();
    await settle();

    const first = controller.submit("match");
    const second = controller.submit("nonmatch"); // double-click while in flight
    await Promise.all([first, second]);
    await settle();
    expect(api.submissions).toEqual([{ pairId: 3, label: "match" }]);
  });

  it("ignores submits when no task is on screen", async () => {
    await controller.start();
    await settle();
    await controller.submit("match");
    expect(api.submissions).toEqual([]);
  });

  it("refetches a fresh task after a 409 conflict", async () => {
    api.queue = [task(4)];
    await controller.start();
    await settle();

    api.submitResults = ["conflict"];
    api.queue = [task(6)];
    await controller.submit("match");
    await settle();
    expect(controller.view().task?.pair_id).toBe(6);
    // The conflicted label does not count as progress.
    expect(controller.view().labeled).toBe(0);
  });

  it("keeps the task on screen when the POST itself fails", async () => {
    api.queue = [task(9)];
    await controller.start();
    await settle();

    api.submit = async () => {
      throw new Error("socket reset");
    };
    await controller.submit("match");
    expect(controller.view().task?.pair_id).toBe(9);
  });

  it("maps the m and n keys to labels", async () => {
    api.queue = [task(11)];
    await controller.start();
    await settle();

    controller.handleKey("x"); // not a shortcut
    controller.handleKey("m");
    await settle();
    expect(api.submissions).toEqual([{ pairId: 11, label: "match" }]);

    api.queue = [];
    await vi.advanceTimersByTimeAsync(100);
    api.queue = [task(12)];
    await vi.advanceTimersByTimeAsync(200);
    await settle();
    controller.handleKey("N");
    await settle();
    expect(api.submissions).toEqual([
      { pairId: 11, label: "match" },
      { pairId: 12, label: "nonmatch" },
    ]);
  });
});
