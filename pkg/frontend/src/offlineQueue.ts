/**
 * Offline queue for score submissions.
 * Persists to localStorage; flushes on "online".
 */

import type { ScorePayload } from "./api.js";

const KEY = "annotator_queue_v1";

function ls(): Storage | null {
  try {
    return typeof window === "undefined" ? null : window.localStorage;
  } catch {
    return null;
  }
}

export function loadQueue(): ScorePayload[] {
  const s = ls();
  if (!s) return [];
  try {
    return JSON.parse(s.getItem(KEY) || "[]");
  } catch {
    return [];
  }
}

function save(list: ScorePayload[]): void {
  const s = ls();
  if (!s) return;
  try {
    s.setItem(KEY, JSON.stringify(list));
  } catch {
    // quota exceeded: the submission is lost only if the tab also closes
  }
}

export function enqueue(job: ScorePayload): void {
  const list = loadQueue();
  list.push(job);
  save(list);
}

export function queueSize(): number {
  return loadQueue().length;
}

export function queuedTokens(): Set<string> {
  return new Set(loadQueue().map((j) => j.token));
}

/**
 * "sent" drops the job (any definitive HTTP response, including 409 and
 * 400); "retry" keeps it for the next flush (network failure).
 */
export type FlushSender = (job: ScorePayload) => Promise<"sent" | "retry">;

export async function flushQueue(send: FlushSender): Promise<number> {
  const kept: ScorePayload[] = [];
  let sent = 0;
  for (const job of loadQueue()) {
    if ((await send(job)) === "sent") sent += 1;
    else kept.push(job);
  }
  save(kept);
  return sent;
}

let autoFlushInstalled = false;

export function installAutoFlush(send: FlushSender, onFlushed?: (sent: number) => void): void {
  if (typeof window === "undefined" || autoFlushInstalled) return;
  autoFlushInstalled = true;
  window.addEventListener("online", () => {
    void flushQueue(send).then((n) => {
      if (n > 0 && onFlushed) onFlushed(n);
    });
  });
}

// test seam: lets a fresh jsdom window get its own listener
export function resetAutoFlushForTests(): void {
  autoFlushInstalled = false;
}
