/** Typed client for the annotation service HTTP API. */

export interface Task {
  summary_id: string;
  reference: string;
  candidate: string;
  token: string;
  done: boolean;
}

export interface TaskList {
  annotator: string;
  total: number;
  tasks: Task[];
}

export interface ScorePayload {
  annotator: string;
  token: string;
  accuracy: number;
  coherence: number;
}

export type SubmitResult =
  | { kind: "ok" }
  | { kind: "duplicate" }
  | { kind: "invalid"; errors: Record<string, string> };

export interface ProgressInfo {
  total_tasks: number;
  total_scores: number;
  per_annotator: Record<string, number>;
}

/** Thrown when the service responds with a status the client has no handling for. */
export class ApiError extends Error {
  status: number;
  constructor(status: number, detail: string) {
    super(`service returned ${status}: ${detail}`);
    this.status = status;
  }
}

// Network-level failures (fetch rejection) propagate to the caller, which
// decides whether to queue or show a retry banner.

export async function fetchTasks(baseUrl: string, annotator: string): Promise<TaskList> {
  const resp = await fetch(`${baseUrl}/api/tasks?annotator=${encodeURIComponent(annotator)}`);
  const text = await resp.text();
  if (!resp.ok) throw new ApiError(resp.status, text);
  return JSON.parse(text) as TaskList;
}

export async function postScore(baseUrl: string, payload: ScorePayload): Promise<SubmitResult> {
  const resp = await fetch(`${baseUrl}/api/scores`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  });
  if (resp.status === 200) return { kind: "ok" };
  if (resp.status === 409) return { kind: "duplicate" };
  if (resp.status === 400) {
    let errors: Record<string, string> = {};
    try {
      errors = (await resp.json()).errors ?? {};
    } catch {
      errors = { body: "invalid request" };
    }
    return { kind: "invalid", errors };
  }
  throw new ApiError(resp.status, await resp.text());
}

export async function fetchProgress(baseUrl: string): Promise<ProgressInfo> {
  const resp = await fetch(`${baseUrl}/api/progress`);
  const text = await resp.text();
  if (!resp.ok) throw new ApiError(resp.status, text);
  return JSON.parse(text) as ProgressInfo;
}
