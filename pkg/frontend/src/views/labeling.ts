import { ApiClient } from "../api.js";
import { button, clear, el } from "../dom.js";
import { formatSimilarity } from "../format.js";
import { LabelingQueue } from "../queue.js";
import { LABELS, type LabelInfo, type Session } from "../types.js";

/**
 * Card-at-a-time labeling queue. Keys 1-9 assign the nine labels in rule
 * order, 0 rejects, s skips. A failed submission keeps the card on screen
 * with the error and a retry button.
 */
export class LabelingView {
  private readonly queue: LabelingQueue;
  private rules = new Map<string, string>();
  private error: string | null = null;
  private retry: (() => void) | null = null;
  private readonly keyHandler = (event: KeyboardEvent) => this.onKey(event);

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    session: Session,
  ) {
    this.queue = new LabelingQueue(client, session.actor);
  }

  async start(): Promise<void> {
    try {
      const labels = await this.client.getLabels();
      this.rules = new Map(labels.map((info: LabelInfo) => [info.label, info.rule]));
    } catch {
      this.rules = new Map(); // tooltips are optional; labeling still works
    }
    await this.queue.refresh();
    document.addEventListener("keydown", this.keyHandler);
    this.render();
  }

  stop(): void {
    document.removeEventListener("keydown", this.keyHandler);
  }

  private onKey(event: KeyboardEvent): void {
    if (event.target instanceof HTMLInputElement) return;
    const index = "123456789".indexOf(event.key);
    if (index >= 0) {
      void this.submit(LABELS[index]);
    } else if (event.key === "0") {
      void this.reject();
    } else if (event.key === "s") {
      this.queue.skip();
      this.render();
    }
  }

  private async submit(label: string): Promise<void> {
    const result = await this.queue.labelCurrent(label);
    this.error = result.ok ? null : (result.error ?? "failed");
    this.retry = !result.ok && result.retryable ? () => void this.submit(label) : null;
    this.render();
  }

  private async reject(): Promise<void> {
    const result = await this.queue.rejectCurrent();
    this.error = result.ok ? null : (result.error ?? "failed");
    this.retry = !result.ok && result.retryable ? () => void this.reject() : null;
    this.render();
  }

  private render(): void {
    clear(this.root);
    const card = this.queue.current;
    if (!card) {
      this.root.appendChild(el("p", "empty-state", "no pending candidates"));
      return;
    }
    const box = el("div", "card");
    box.appendChild(el("div", "concept-pair", `${card.concept1}  ?  ${card.concept2}`));
    box.appendChild(
      el(
        "div",
        "card-meta",
        `partition ${card.partition} | similarity ${formatSimilarity(card.similarity)}` +
          (card.provenance ? ` | neighbor rank ${card.provenance.rank}` : ""),
      ),
    );
    const buttons = el("div", "label-buttons");
    LABELS.forEach((label, i) => {
      const node = button(`${i + 1} ${label}`, () => void this.submit(label), "btn label-btn");
      const rule = this.rules.get(label);
      if (rule) node.title = rule;
      buttons.appendChild(node);
    });
    buttons.appendChild(button("0 Reject", () => void this.reject(), "btn reject-btn"));
    buttons.appendChild(
      button("s Skip", () => {
        this.queue.skip();
        this.render();
      }, "btn skip-btn"),
    );
    box.appendChild(buttons);
    if (this.error) {
      const banner = el("div", "error-banner", this.error);
      if (this.retry) banner.appendChild(button("retry", this.retry, "btn retry-btn"));
      box.appendChild(banner);
    }
    box.appendChild(el("div", "queue-count", `${this.queue.size} candidates remaining`));
    this.root.appendChild(box);
  }
}
