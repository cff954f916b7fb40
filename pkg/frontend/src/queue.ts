import { ApiClient, ApiError } from "./api.js";
import type { AssertionRecord, Verdict } from "./types.js";

/** Outcome of a mutation attempt; failed cards stay in the queue. */
export interface SubmitResult {
  ok: boolean;
  /** Human-readable problem when ok is false. */
  error?: string;
  /** True when the request never reached the server and should be retried. */
  retryable?: boolean;
}

function describeFailure(err: unknown): SubmitResult {
  if (err instanceof ApiError) {
    const detail =
      typeof err.detail === "string" ? err.detail : JSON.stringify(err.detail ?? err.status);
    return { ok: false, error: `server rejected the request (${err.status}): ${detail}` };
  }
  const message = err instanceof Error ? err.message : String(err);
  return { ok: false, error: `network failure: ${message}`, retryable: true };
}

/**
 * Queue of pending candidates for an annotator. The current card leaves the
 * queue only after the server acknowledges the label or reject; any failure
 * keeps it in place so the action can be retried.
 */
export class LabelingQueue {
  private items: AssertionRecord[] = [];

  constructor(
    private readonly client: ApiClient,
    private readonly annotator: string,
  ) {}

  get current(): AssertionRecord | null {
    return this.items[0] ?? null;
  }

  get size(): number {
    return this.items.length;
  }

  async refresh(partition?: number): Promise<void> {
    this.items = await this.client.getCandidates(partition, 200);
  }

  /** Move the current card to the back without deciding on it. */
  skip(): void {
    const head = this.items.shift();
    if (head) this.items.push(head);
  }

  async labelCurrent(label: string): Promise<SubmitResult> {
    const card = this.current;
    if (!card) return { ok: false, error: "no pending candidates" };
    try {
      await this.client.labelAssertion(card.id, label, this.annotator);
    } catch (err) {
      return describeFailure(err);
    }
    this.items.shift();
    return { ok: true };
  }

  async rejectCurrent(): Promise<SubmitResult> {
    const card = this.current;
    if (!card) return { ok: false, error: "no pending candidates" };
    try {
      await this.client.rejectAssertion(card.id, this.annotator);
    } catch (err) {
      return describeFailure(err);
    }
    this.items.shift();
    return { ok: true };
  }
}

/** Queue of labeled assertions awaiting this expert's agree/disagree verdict. */
export class ValidationQueue {
  private items: AssertionRecord[] = [];
  private judged = new Set<string>();

  constructor(
    private readonly client: ApiClient,
    private readonly expert: string,
  ) {}

  get current(): AssertionRecord | null {
    return this.items[0] ?? null;
  }

  get size(): number {
    return this.items.length;
  }

  async refresh(partition?: number): Promise<void> {
    const labeled = await this.client.getAssertions({ partition, status: "labeled" });
    this.items = labeled.filter((a) => !this.judged.has(a.id));
  }

  skip(): void {
    const head = this.items.shift();
    if (head) this.items.push(head);
  }

  async judgeCurrent(verdict: Verdict): Promise<SubmitResult> {
    const card = this.current;
    if (!card) return { ok: false, error: "nothing to judge" };
    try {
      await this.client.judgeAssertion(card.id, this.expert, verdict);
    } catch (err) {
      return describeFailure(err);
    }
    this.judged.add(card.id);
    this.items.shift();
    return { ok: true };
  }
}

/**
 * Per-partition agreeability snapshot. Every number comes from GET /report
 * at refresh time; a partition without judgments is kept as null so the view
 * can say "no data" instead of showing an invented zero.
 */
export class Dashboard {
  readonly rates = new Map<number, number | null>();

  constructor(private readonly client: ApiClient) {}

  async refresh(partitions?: number[]): Promise<void> {
    const targets = partitions ?? (await this.client.getPartitions());
    this.rates.clear();
    for (const partition of targets) {
      try {
        const report = await this.client.getReport(partition);
        this.rates.set(partition, report.agreeability);
      } catch (err) {
        if (err instanceof ApiError && err.status === 404) {
          this.rates.set(partition, null);
        } else {
          throw err;
        }
      }
    }
  }
}
