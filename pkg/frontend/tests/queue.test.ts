import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { Dashboard, LabelingQueue, ValidationQueue } from "../src/queue.js";
import type { AssertionRecord } from "../src/types.js";

function candidate(id: string, similarity = 0.8): AssertionRecord {
  return {
    id,
    concept1: "storm",
    label: null,
    concept2: `w-${id}`,
    partition: 2019,
    similarity,
    status: "candidate",
    provenance: { seed: "storm", rank: 1 },
    annotator: null,
    labeled_at: null,
  };
}

function stubClient(overrides: Partial<Record<keyof ApiClient, unknown>>): ApiClient {
  return {
    getCandidates: vi.fn(async () => []),
    getAssertions: vi.fn(async () => []),
    getLabels: vi.fn(async () => []),
    getPartitions: vi.fn(async () => []),
    labelAssertion: vi.fn(async () => candidate("x")),
    rejectAssertion: vi.fn(async () => candidate("x")),
    judgeAssertion: vi.fn(async () => ({})),
    getReport: vi.fn(async () => ({})),
    ...overrides,
  } as unknown as ApiClient;
}

describe("LabelingQueue", () => {
  it("advances past a card once the server accepts the label", async () => {
    const client = stubClient({
      getCandidates: vi.fn(async () => [candidate("a"), candidate("b")]),
    });
    const queue = new LabelingQueue(client, "ann");
    await queue.refresh();
    expect(queue.current?.id).toBe("a");
    const result = await queue.labelCurrent("SYN");
    expect(result.ok).toBe(true);
    expect(queue.current?.id).toBe("b");
    expect(client.labelAssertion).toHaveBeenCalledWith("a", "SYN", "ann");
  });

  it("keeps the card and reports the error on a 422", async () => {
    const client = stubClient({
      getCandidates: vi.fn(async () => [candidate("a")]),
      labelAssertion: vi.fn(async () => {
        throw new ApiError(422, { error: "invalid label", valid_labels: [] });
      }),
    });
    const queue = new LabelingQueue(client, "ann");
    await queue.refresh();
    const result = await queue.labelCurrent("NOPE");
    expect(result.ok).toBe(false);
    expect(result.retryable).toBeUndefined();
    expect(result.error).toContain("422");
    expect(queue.current?.id).toBe("a"); // card retained
  });

  it("marks network failures as retryable and retains the card", async () => {
    const client = stubClient({
      getCandidates: vi.fn(async () => [candidate("a")]),
      labelAssertion: vi.fn(async () => {
        throw new TypeError("fetch failed");
      }),
    });
    const queue = new LabelingQueue(client, "ann");
    await queue.refresh();
    const result = await queue.labelCurrent("SYN");
    expect(result.ok).toBe(false);
    expect(result.retryable).toBe(true);
    expect(queue.current?.id).toBe("a");
    expect(queue.size).toBe(1);
  });

  it("reports the empty-queue state", async () => {
    const queue = new LabelingQueue(stubClient({}), "ann");
    await queue.refresh();
    expect(queue.current).toBeNull();
    const result = await queue.labelCurrent("SYN");
    expect(result.ok).toBe(false);
    expect(result.error).toBe("no pending candidates");
  });

  it("skip rotates without deciding", async () => {
    const client = stubClient({
      getCandidates: vi.fn(async () => [candidate("a"), candidate("b")]),
    });
    const queue = new LabelingQueue(client, "ann");
    await queue.refresh();
    queue.skip();
    expect(queue.current?.id).toBe("b");
    expect(queue.size).toBe(2);
  });
});

describe("ValidationQueue", () => {
  const labeledRow = (id: string): AssertionRecord => ({
    ...candidate(id),
    label: "SYN",
    status: "labeled",
  });

  it("advances on a recorded verdict and never re-queues it", async () => {
    const client = stubClient({
      getAssertions: vi.fn(async () => [labeledRow("a"), labeledRow("b")]),
    });
    const queue = new ValidationQueue(client, "expert1");
    await queue.refresh();
    const result = await queue.judgeCurrent("agree");
    expect(result.ok).toBe(true);
    expect(client.judgeAssertion).toHaveBeenCalledWith("a", "expert1", "agree");
    await queue.refresh();
    expect(queue.current?.id).toBe("b");
    expect(queue.size).toBe(1);
  });

  it("keeps the assertion on a server conflict", async () => {
    const client = stubClient({
      getAssertions: vi.fn(async () => [labeledRow("a")]),
      judgeAssertion: vi.fn(async () => {
        throw new ApiError(409, "not labeled");
      }),
    });
    const queue = new ValidationQueue(client, "expert1");
    await queue.refresh();
    const result = await queue.judgeCurrent("agree");
    expect(result.ok).toBe(false);
    expect(queue.current?.id).toBe("a");
  });
});

describe("Dashboard", () => {
  it("stores server rates and null for missing reports", async () => {
    const client = stubClient({
      getPartitions: vi.fn(async () => [2017, 2019]),
      getReport: vi.fn(async (partition: number) => {
        if (partition === 2017) throw new ApiError(404, "no judgments");
        return { partition, agreeability: 2 / 3 };
      }),
    });
    const dashboard = new Dashboard(client);
    await dashboard.refresh();
    expect(dashboard.rates.get(2017)).toBeNull();
    expect(dashboard.rates.get(2019)).toBeCloseTo(2 / 3, 9);
  });

  it("propagates non-404 failures", async () => {
    const client = stubClient({
      getPartitions: vi.fn(async () => [2019]),
      getReport: vi.fn(async () => {
        throw new ApiError(500, "boom");
      }),
    });
    await expect(new Dashboard(client).refresh()).rejects.toThrow(ApiError);
  });
});
