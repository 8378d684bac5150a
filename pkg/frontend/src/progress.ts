export class ProgressView {
  public element: HTMLElement;
  private bar: HTMLProgressElement;
  private text: HTMLElement;

  constructor() {
    this.element = document.createElement("div");
    this.element.className = "progress-section";

    this.bar = document.createElement("progress");
    this.bar.max = 1;
    this.bar.value = 0;
    this.element.appendChild(this.bar);

    this.text = document.createElement("span");
    this.text.className = "progress-text";
    this.element.appendChild(this.text);

    this.update(0, 0);
  }

  public update(done: number, total: number): void {
    this.bar.max = Math.max(total, 1);
    this.bar.value = done;
    this.text.textContent = `${done}/${total}`;
  }
}
