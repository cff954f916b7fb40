import { ApiClient } from "../api.js";
import { button, clear, el } from "../dom.js";
import { formatAssertion, formatRate } from "../format.js";
import { Dashboard, ValidationQueue } from "../queue.js";
import type { Session, Verdict } from "../types.js";

/**
 * Expert review: one labeled assertion at a time with Agree/Disagree, plus a
 * per-partition agreeability dashboard refreshed from the server after every
 * verdict. Non-experts see the queue read-only with the buttons disabled.
 */
export class ValidationView {
  private readonly queue: ValidationQueue;
  private readonly dashboard: Dashboard;
  private readonly canJudge: boolean;
  private error: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    client: ApiClient,
    session: Session,
  ) {
    this.queue = new ValidationQueue(client, session.actor);
    this.dashboard = new Dashboard(client);
    this.canJudge = session.role === "expert";
  }

  async start(): Promise<void> {
    await this.queue.refresh();
    await this.dashboard.refresh();
    this.render();
  }

  stop(): void {}

  private async judge(verdict: Verdict): Promise<void> {
    const result = await this.queue.judgeCurrent(verdict);
    this.error = result.ok ? null : (result.error ?? "failed");
    if (result.ok) {
      await this.dashboard.refresh();
    }
    this.render();
  }

  private render(): void {
    clear(this.root);

    const card = this.queue.current;
    if (!card) {
      this.root.appendChild(el("p", "empty-state", "no labeled assertions to judge"));
    } else {
      const box = el("div", "card");
      box.appendChild(el("div", "assertion", formatAssertion(card)));
      box.appendChild(el("div", "card-meta", `partition ${card.partition}`));
      const controls = el("div", "verdict-buttons");
      const agree = button("Agree", () => void this.judge("agree"), "btn agree-btn");
      const disagree = button("Disagree", () => void this.judge("disagree"), "btn disagree-btn");
      if (!this.canJudge) {
        agree.disabled = true;
        disagree.disabled = true;
        controls.appendChild(el("span", "role-note", "expert role required to judge"));
      }
      controls.appendChild(agree);
      controls.appendChild(disagree);
      controls.appendChild(
        button("Skip", () => {
          this.queue.skip();
          this.render();
        }, "btn skip-btn"),
      );
      box.appendChild(controls);
      if (this.error) box.appendChild(el("div", "error-banner", this.error));
      box.appendChild(el("div", "queue-count", `${this.queue.size} assertions remaining`));
      this.root.appendChild(box);
    }

    const panel = el("div", "dashboard");
    panel.appendChild(el("h2", undefined, "agreeability by partition"));
    const list = el("ul");
    for (const [partition, rate] of [...this.dashboard.rates.entries()].sort()) {
      const item = el("li");
      item.appendChild(el("span", "dash-partition", String(partition)));
      item.appendChild(el("span", "dash-rate", formatRate(rate)));
      list.appendChild(item);
    }
    panel.appendChild(list);
    this.root.appendChild(panel);
  }
}
