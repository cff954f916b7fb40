import type { AssertionRecord } from "./types.js";

export function formatAssertion(a: AssertionRecord): string {
  return `[${a.concept1} ${a.label ?? "?"} ${a.concept2}]`;
}

export function formatSimilarity(value: number): string {
  return value.toFixed(3);
}

/** Dashboard rate: a missing report renders as "no data", never as 0. */
export function formatRate(rate: number | null): string {
  return rate === null ? "no data" : rate.toFixed(4);
}
