/** Per-task selection persistence, so ratings survive a page reload. */

export interface Selection {
  accuracy: number | null;
  coherence: number | null;
}

const ANNOTATOR_KEY = "annotator_name_v1";

function selectionKey(annotator: string, token: string): string {
  return `annotator_sel_v1:${annotator}:${token}`;
}

function ls(): Storage | null {
  try {
    return typeof window === "undefined" ? null : window.localStorage;
  } catch {
    return null;
  }
}

export function loadSelection(annotator: string, token: string): Selection {
  const s = ls();
  const empty: Selection = { accuracy: null, coherence: null };
  if (!s) return empty;
  try {
    const raw = s.getItem(selectionKey(annotator, token));
    if (!raw) return empty;
    const parsed = JSON.parse(raw);
    return {
      accuracy: Number.isInteger(parsed.accuracy) ? parsed.accuracy : null,
      coherence: Number.isInteger(parsed.coherence) ? parsed.coherence : null,
    };
  } catch {
    return empty;
  }
}

export function saveSelection(annotator: string, token: string, sel: Selection): void {
  const s = ls();
  if (!s) return;
  try {
    s.setItem(selectionKey(annotator, token), JSON.stringify(sel));
  } catch {}
}

export function clearSelection(annotator: string, token: string): void {
  const s = ls();
  if (!s) return;
  try {
    s.removeItem(selectionKey(annotator, token));
  } catch {}
}

export function loadAnnotatorName(): string {
  return ls()?.getItem(ANNOTATOR_KEY) ?? "";
}

export function saveAnnotatorName(name: string): void {
  try {
    ls()?.setItem(ANNOTATOR_KEY, name);
  } catch {}
}
