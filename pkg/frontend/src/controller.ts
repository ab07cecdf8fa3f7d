/**
 * Session loop: pull one task at a time, push labels, survive the gaps.
 *
 * The server blocks its protocol thread between clerical batches, so
 * the queue is empty most of the time; the controller polls with a
 * growing delay while idle and snaps back to fast polling the moment a
 * batch lands. Task content lives only in memory and only until it is
 * labeled or discarded.
 */

import type { Label, SessionInfo, TaskPayload, TaskViewModel } from "./types.js";
import type { SubmitResult } from "./api.js";

export interface ReviewApi {
  session(): Promise<SessionInfo>;
  nextTask(): Promise<TaskPayload | null>;
  submit(pairId: number, label: Label): Promise<SubmitResult>;
}

export interface ControllerOptions {
  /** Poll delay after the first empty response, ms. */
  minDelay?: number;
  /** Poll delay ceiling while idle, ms. */
  maxDelay?: number;
}

export class ReviewController {
  private vm: TaskViewModel = {
    task: null,
    pendingCount: 0,
    budgetRemaining: null,
    labeled: 0,
  };
  private delay: number;
  private readonly minDelay: number;
  private readonly maxDelay: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private stopped = false;
  private atBatchBoundary = true;

  constructor(
    private readonly api: ReviewApi,
    private readonly onRender: (vm: TaskViewModel) => void,
    options: ControllerOptions = {},
  ) {
    this.minDelay = options.minDelay ?? 300;
    this.maxDelay = options.maxDelay ?? 3000;
    this.delay = this.minDelay;
  }

  view(): TaskViewModel {
    return { ...this.vm };
  }

  async start(): Promise<void> {
    await this.pull();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
  }

  /** m / n keyboard shortcuts. */
  handleKey(key: string): void {
    if (key === "m" || key === "M") void this.submit("match");
    if (key === "n" || key === "N") void this.submit("nonmatch");
  }

  async submit(label: Label): Promise<void> {
    // No task on screen, or a POST already on the wire: a second click
    // (or key repeat) must not produce a second request.
    if (this.vm.task === null || this.inFlight) return;
    const pairId = this.vm.task.pair_id;
    this.inFlight = true;
    try {
      const result = await this.api.submit(pairId, label);
      if (result === "ok") {
        this.vm.labeled += 1;
        if (this.vm.budgetRemaining !== null && this.vm.budgetRemaining > 0) {
          this.vm.budgetRemaining -= 1;
        }
        if (this.vm.pendingCount > 0) this.vm.pendingCount -= 1;
      }
      // ok and conflict both discard the on-screen task; a conflict
      // means someone else settled it, so fetch a fresh one.
      this.vm.task = null;
      this.render();
      this.inFlight = false;
      await this.pull();
    } catch {
      // Network hiccup: keep the task on screen, allow a retry.
      this.inFlight = false;
    }
  }

  private async pull(): Promise<void> {
    if (this.stopped) return;
    let task: TaskPayload | null = null;
    try {
      task = await this.api.nextTask();
    } catch {
      task = null; // treated like idle: retry on the same backoff clock
    }
    if (task === null) {
      this.vm.task = null;
      this.atBatchBoundary = true;
      this.render();
      this.schedule();
      this.delay = Math.min(this.delay * 2, this.maxDelay);
      return;
    }
    if (this.atBatchBoundary) {
      // A fresh batch: the server's counters are authoritative here.
      try {
        const info = await this.api.session();
        this.vm.pendingCount = info.pending_count;
        this.vm.budgetRemaining = info.budget_remaining;
      } catch {
        // keep the local counters; they are display-only
      }
      this.atBatchBoundary = false;
    }
    this.delay = this.minDelay;
    this.vm.task = task;
    this.render();
  }

  private schedule(): void {
    if (this.stopped) return;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => void this.pull(), this.delay);
  }

  private render(): void {
    this.onRender(this.view());
  }
}
