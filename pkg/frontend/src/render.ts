/**
 * Pure HTML builders.
 *
 * Every string that originates in an API payload passes through
 * escapeHtml before it reaches markup, and nothing else is interpolated
 * from task data. That is the whole privacy story of this client: the
 * page can only show characters the server chose to send.
 */

import type { MaskState, TaskPayload, TaskViewModel } from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Symbols are lowercase/punctuation only; payload strings carry the rest. */
function maskCells(mask: MaskState): string {
  switch (mask.kind) {
    case "agree": {
      const tag =
        mask.freq !== undefined
          ? ` <span class="tag tag-${mask.freq}">${mask.freq}</span>`
          : "";
      return `<td class="sym agree" colspan="2">=${tag}</td>`;
    }
    case "disagree":
      return `<td class="sym disagree" colspan="2">&ne;</td>`;
    case "partial": {
      const a = mask.a === null ? "" : escapeHtml(mask.a);
      const b = mask.b === null ? "" : escapeHtml(mask.b);
      return `<td class="mask">${a}</td><td class="mask">${b}</td>`;
    }
    case "withheld":
      return `<td class="sym withheld" colspan="2">&middot;&middot;&middot;</td>`;
  }
}

export function renderTask(task: TaskPayload): string {
  const rows = Object.entries(task.attributes)
    .map(
      ([name, mask]) =>
        `<tr><th>${escapeHtml(name)}</th>${maskCells(mask)}</tr>`,
    )
    .join("");
  return [
    `<div class="task" data-pair-id="${task.pair_id}">`,
    `<table class="pair"><thead><tr><th></th><th>side a</th><th>side b</th></tr></thead>`,
    `<tbody>${rows}</tbody></table>`,
    `<div class="actions">`,
    `<button id="btn-match" title="shortcut: m">match</button>`,
    `<button id="btn-nonmatch" title="shortcut: n">non-match</button>`,
    `</div></div>`,
  ].join("");
}

export function renderIdle(): string {
  return `<div class="idle">waiting for the next task&hellip;</div>`;
}

export function renderStatus(vm: TaskViewModel): string {
  const budget =
    vm.budgetRemaining === null ? "&mdash;" : String(vm.budgetRemaining);
  return [
    `<span class="stat">pending: ${vm.pendingCount}</span>`,
    `<span class="stat">budget left: ${budget}</span>`,
    `<span class="stat">labeled: ${vm.labeled}</span>`,
  ].join(" ");
}

export function renderView(vm: TaskViewModel): string {
  const body = vm.task === null ? renderIdle() : renderTask(vm.task);
  return `<header id="status">${renderStatus(vm)}</header><main>${body}</main>`;
}
