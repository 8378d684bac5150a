import { describe, expect, it } from "vitest";

import { ProgressView } from "../src/progress.js";

describe("ProgressView", () => {
  it("shows done/total and fills the bar", () => {
    const view = new ProgressView();
    view.update(1, 3);
    const bar = view.element.querySelector("progress")!;
    expect(view.element.textContent).toContain("1/3");
    expect(bar.value).toBe(1);
    expect(bar.max).toBe(3);

    view.update(3, 3);
    expect(view.element.textContent).toContain("3/3");
    expect(bar.value).toBe(3);
  });

  it("stays well formed with zero tasks", () => {
    const view = new ProgressView();
    expect(view.element.textContent).toContain("0/0");
    expect(view.element.querySelector("progress")!.max).toBe(1);
  });
});
