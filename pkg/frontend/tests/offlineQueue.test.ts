import { beforeEach, describe, expect, it, vi } from "vitest";

import type { ScorePayload } from "../src/api.js";
import {
  enqueue,
  flushQueue,
  installAutoFlush,
  loadQueue,
  queueSize,
  queuedTokens,
  resetAutoFlushForTests,
} from "../src/offlineQueue.js";

function job(token: string): ScorePayload {
  return { annotator: "ali", token, accuracy: 3, coherence: 4 };
}

beforeEach(() => {
  localStorage.clear();
});

describe("offline queue", () => {
  it("persists jobs to localStorage and reads them back", () => {
    enqueue(job("t1"));
    enqueue(job("t2"));
    expect(queueSize()).toBe(2);
    expect(loadQueue().map((j) => j.token)).toEqual(["t1", "t2"]);
    expect(queuedTokens()).toEqual(new Set(["t1", "t2"]));
    // raw storage round trip, not just in-memory state
    const raw = localStorage.getItem("annotator_queue_v1");
    expect(JSON.parse(raw!)).toHaveLength(2);
  });

  it("treats corrupt storage as an empty queue", () => {
    localStorage.setItem("annotator_queue_v1", "{nope");
    expect(loadQueue()).toEqual([]);
  });

  it("flush drops sent jobs, keeps retries in order", async () => {
    enqueue(job("a"));
    enqueue(job("b"));
    enqueue(job("c"));
    const send = vi.fn(async (j: ScorePayload): Promise<"sent" | "retry"> => (j.token === "b" ? "retry" : "sent"));
    const sent = await flushQueue(send);
    expect(sent).toBe(2);
    expect(send).toHaveBeenCalledTimes(3);
    expect(loadQueue().map((j) => j.token)).toEqual(["b"]);
  });

  it("flushes automatically when the window comes back online", async () => {
    resetAutoFlushForTests();
    enqueue(job("x"));
    const send = vi.fn(async () => "sent" as const);
    const flushed = vi.fn();
    installAutoFlush(send, flushed);

    window.dispatchEvent(new Event("online"));
    await vi.waitFor(() => expect(flushed).toHaveBeenCalledWith(1));
    expect(send).toHaveBeenCalledTimes(1);
    expect(queueSize()).toBe(0);
  });
});
