/**
 * Page flow: name form, then one task at a time until every candidate is
 * scored. Submissions that fail at the network level are queued locally
 * and flushed when connectivity returns; the task list itself shows a
 * retry banner instead of losing state.
 */

import { fetchTasks, postScore, ScorePayload, Task, TaskList } from "./api.js";
import { enqueue, flushQueue, installAutoFlush, queueSize, queuedTokens, FlushSender } from "./offlineQueue.js";
import { ProgressView } from "./progress.js";
import {
  clearSelection,
  loadAnnotatorName,
  loadSelection,
  saveAnnotatorName,
  saveSelection,
} from "./storage.js";
import { TaskView } from "./taskView.js";

export class AnnotationApp {
  private root: HTMLElement;
  private baseUrl: string;
  private annotator = "";
  private tasks: Task[] = [];
  private doneTokens = new Set<string>();
  private progress = new ProgressView();
  private stage: HTMLElement;
  private note: HTMLElement;
  public view: TaskView | null = null;

  constructor(root: HTMLElement, baseUrl = "") {
    this.root = root;
    this.baseUrl = baseUrl;

    const title = document.createElement("h1");
    title.textContent = "Summary annotation";
    this.stage = document.createElement("div");
    this.stage.className = "stage";
    this.note = document.createElement("div");
    this.note.className = "sync-note";
    this.root.replaceChildren(title, this.progress.element, this.note, this.stage);

    installAutoFlush(this.flushSender, () => this.refreshNote());
  }

  private flushSender: FlushSender = async (job: ScorePayload) => {
    try {
      await postScore(this.baseUrl, job);
      return "sent";
    } catch {
      return "retry";
    }
  };

  async start(): Promise<void> {
    const remembered = loadAnnotatorName();
    if (remembered) {
      this.annotator = remembered;
      await this.loadTasks();
    } else {
      this.renderNameForm();
    }
  }

  private renderNameForm(): void {
    const form = document.createElement("form");
    form.className = "name-form";
    const label = document.createElement("label");
    label.textContent = "Annotator name";
    const input = document.createElement("input");
    input.name = "annotator";
    input.required = true;
    const go = document.createElement("button");
    go.type = "submit";
    go.textContent = "Start";
    label.appendChild(input);
    form.append(label, go);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const name = input.value.trim();
      if (!name) return;
      this.annotator = name;
      saveAnnotatorName(name);
      void this.loadTasks();
    });
    this.stage.replaceChildren(form);
  }

  async loadTasks(): Promise<void> {
    let list: TaskList;
    try {
      list = await fetchTasks(this.baseUrl, this.annotator);
    } catch {
      this.renderRetryBanner();
      return;
    }
    this.tasks = list.tasks;
    this.doneTokens = new Set(list.tasks.filter((t) => t.done).map((t) => t.token));
    for (const token of queuedTokens()) this.doneTokens.add(token);
    this.renderCurrent();
  }

  private renderRetryBanner(): void {
    const banner = document.createElement("div");
    banner.className = "retry-banner";
    banner.textContent = "Cannot reach the annotation service. ";
    const retry = document.createElement("button");
    retry.type = "button";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void this.loadTasks());
    banner.appendChild(retry);
    this.stage.replaceChildren(banner);
    window.addEventListener("online", () => void this.loadTasks(), { once: true });
  }

  private currentTask(): Task | undefined {
    return this.tasks.find((t) => !this.doneTokens.has(t.token));
  }

  private renderCurrent(): void {
    this.progress.update(this.doneTokens.size, this.tasks.length);
    this.refreshNote();
    const task = this.currentTask();
    if (!task) {
      this.renderCompletion();
      return;
    }
    const position = this.tasks.indexOf(task) + 1;
    this.view = new TaskView(task, {
      position,
      total: this.tasks.length,
      initial: loadSelection(this.annotator, task.token),
      onChange: (sel) => saveSelection(this.annotator, task.token, sel),
      onSubmit: (accuracy, coherence) => void this.submit(task, accuracy, coherence),
    });
    this.stage.replaceChildren(this.view.element);
  }

  private async submit(task: Task, accuracy: number, coherence: number): Promise<void> {
    const payload: ScorePayload = { annotator: this.annotator, token: task.token, accuracy, coherence };
    this.view?.setBusy(true);
    let result;
    try {
      result = await postScore(this.baseUrl, payload);
    } catch {
      // network failure: keep the rating, sync later
      enqueue(payload);
      this.finishTask(task);
      return;
    }
    if (result.kind === "invalid") {
      this.view?.setBusy(false);
      this.view?.showFieldErrors(result.errors);
      return;
    }
    // "ok" advances; "duplicate" means the service already has it
    this.finishTask(task);
  }

  private finishTask(task: Task): void {
    clearSelection(this.annotator, task.token);
    this.doneTokens.add(task.token);
    this.renderCurrent();
  }

  private renderCompletion(): void {
    const doneMsg = document.createElement("div");
    doneMsg.className = "completion";
    const h = document.createElement("h2");
    h.textContent = this.tasks.length === 0 ? "No tasks assigned" : "All tasks scored";
    const p = document.createElement("p");
    p.textContent =
      this.tasks.length === 0
        ? "There is nothing to annotate right now."
        : `Thank you, ${this.annotator}. ${this.tasks.length} of ${this.tasks.length} candidates rated.`;
    doneMsg.append(h, p);
    this.stage.replaceChildren(doneMsg);
  }

  private refreshNote(): void {
    const pending = queueSize();
    this.note.textContent = pending > 0 ? `${pending} submission(s) queued, will sync when online.` : "";
  }

  /** Manual flush hook, also used by tests. */
  async flushPending(): Promise<number> {
    const sent = await flushQueue(this.flushSender);
    this.refreshNote();
    return sent;
  }
}
