/** Shared types mirroring the annotation service's JSON bodies. */

export interface AssertionRecord {
  id: string;
  concept1: string;
  label: string | null;
  concept2: string;
  partition: number;
  similarity: number;
  status: "candidate" | "labeled" | "rejected";
  provenance: { seed: string; rank: number } | null;
  annotator: string | null;
  labeled_at: string | null;
}

export interface Report {
  partition: number;
  n_assertions: number;
  n_judgments: number;
  agreeability: number;
  micro_agreeability: number;
  per_expert: Record<string, number>;
  per_label: Record<string, number>;
}

export interface LabelInfo {
  label: string;
  rule: string;
}

export type Verdict = "agree" | "disagree";
export type Role = "annotator" | "expert";

export interface Session {
  actor: string;
  role: Role;
}

/** The nine labels in rule order; keys 1-9 map onto this array. */
export const LABELS: readonly string[] = [
  "SYN",
  "ANT",
  "HYP",
  "DO",
  "PartOf",
  "IS",
  "CAUSE",
  "dueTo",
  "RAND",
];
