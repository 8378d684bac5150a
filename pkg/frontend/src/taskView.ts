/**
 * One rating task: reference beside one candidate, two 0-5 scales.
 * The opaque token stays on the instance; it is never written into the DOM,
 * and the client never learns which system produced the candidate.
 */

import type { Task } from "./api.js";
import type { Selection } from "./storage.js";

const SCALE = [0, 1, 2, 3, 4, 5];

export interface TaskViewOptions {
  position: number; // 1-based
  total: number;
  initial: Selection;
  onChange: (sel: Selection) => void;
  onSubmit: (accuracy: number, coherence: number) => void;
}

class ScoreScale {
  public element: HTMLFieldSetElement;
  public value: number | null = null;
  private buttons: HTMLButtonElement[] = [];
  private errorSlot: HTMLElement;

  constructor(label: string, initial: number | null, onPick: () => void) {
    this.element = document.createElement("fieldset");
    this.element.className = "score-scale";

    const legend = document.createElement("legend");
    legend.textContent = label;
    this.element.appendChild(legend);

    const row = document.createElement("div");
    row.className = "scale-row";
    for (const v of SCALE) {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.textContent = String(v);
      btn.setAttribute("aria-pressed", "false");
      btn.addEventListener("click", () => {
        this.set(v);
        onPick();
      });
      this.buttons.push(btn);
      row.appendChild(btn);
    }
    this.element.appendChild(row);

    this.errorSlot = document.createElement("div");
    this.errorSlot.className = "field-error";
    this.element.appendChild(this.errorSlot);

    if (initial !== null && SCALE.includes(initial)) this.set(initial);
  }

  set(v: number): void {
    this.value = v;
    for (const btn of this.buttons) {
      btn.setAttribute("aria-pressed", btn.textContent === String(v) ? "true" : "false");
    }
    this.showError("");
  }

  showError(msg: string): void {
    this.errorSlot.textContent = msg;
  }
}

export class TaskView {
  public element: HTMLElement;
  public readonly token: string;
  private accuracy: ScoreScale;
  private coherence: ScoreScale;
  private submitBtn: HTMLButtonElement;
  private banner: HTMLElement;
  private opts: TaskViewOptions;

  constructor(task: Task, opts: TaskViewOptions) {
    this.token = task.token;
    this.opts = opts;

    this.element = document.createElement("section");
    this.element.className = "task-view";

    const header = document.createElement("header");
    header.textContent = `Task ${opts.position} of ${opts.total}`;
    this.element.appendChild(header);

    const texts = document.createElement("div");
    texts.className = "texts";
    texts.appendChild(this.textPanel("Reference summary", task.reference, "reference"));
    texts.appendChild(this.textPanel("Candidate summary", task.candidate, "candidate"));
    this.element.appendChild(texts);

    const onPick = () => {
      this.opts.onChange({ accuracy: this.accuracy.value, coherence: this.coherence.value });
      this.refreshSubmit();
    };
    this.accuracy = new ScoreScale("Accuracy / Relevance", opts.initial.accuracy, onPick);
    this.coherence = new ScoreScale("Coherence", opts.initial.coherence, onPick);
    this.element.appendChild(this.accuracy.element);
    this.element.appendChild(this.coherence.element);

    this.banner = document.createElement("div");
    this.banner.className = "banner";
    this.element.appendChild(this.banner);

    this.submitBtn = document.createElement("button");
    this.submitBtn.type = "button";
    this.submitBtn.className = "submit";
    this.submitBtn.textContent = "Submit";
    this.submitBtn.addEventListener("click", () => {
      if (this.accuracy.value === null || this.coherence.value === null) return;
      this.opts.onSubmit(this.accuracy.value, this.coherence.value);
    });
    this.element.appendChild(this.submitBtn);

    this.refreshSubmit();
  }

  private textPanel(title: string, body: string, cls: string): HTMLElement {
    const panel = document.createElement("article");
    panel.className = `panel ${cls}`;
    const heading = document.createElement("h3");
    heading.textContent = title;
    panel.appendChild(heading);
    const text = document.createElement("p");
    text.dir = "rtl";
    text.lang = "ur";
    text.textContent = body;
    panel.appendChild(text);
    return panel;
  }

  private refreshSubmit(): void {
    this.submitBtn.disabled = this.accuracy.value === null || this.coherence.value === null;
  }

  get submitDisabled(): boolean {
    return this.submitBtn.disabled;
  }

  setBusy(busy: boolean): void {
    this.submitBtn.disabled = busy || this.accuracy.value === null || this.coherence.value === null;
  }

  /** Field-level messages from a 400 response, rendered next to the control. */
  showFieldErrors(errors: Record<string, string>): void {
    this.accuracy.showError(errors["accuracy"] ?? "");
    this.coherence.showError(errors["coherence"] ?? "");
    const rest = Object.entries(errors)
      .filter(([field]) => field !== "accuracy" && field !== "coherence")
      .map(([field, msg]) => `${field}: ${msg}`);
    this.showBanner(rest.join("; "));
  }

  showBanner(msg: string): void {
    this.banner.textContent = msg;
  }
}
