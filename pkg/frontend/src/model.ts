/** Review view-model: verdict validation mirrors the service's decision
 * rules, so anything the UI lets through the server also accepts. */

import type { PairRecord, VerdictPayload } from "./api.js";

export type Verdict = "UNTOUCHED" | "MODIFIED" | "DISCARDED";

export const TARGET_LABELS = [
  "DISABLED",
  "JEWS",
  "LGBT+",
  "MIGRANTS",
  "MUSLIMS",
  "POC",
  "WOMEN",
  "OTHER",
] as const;

/** Session banner threshold per the reviewer well-being guidance. */
export const SESSION_LIMIT_MS = 2 * 60 * 60 * 1000;

export interface Validation {
  ok: boolean;
  reason?: string;
}

export class ReviewViewModel {
  readonly pairId: string;
  readonly hsOriginal: string;
  readonly cnOriginal: string;
  hsEdited: string;
  cnEdited: string;
  verdict: Verdict | null = null;
  label: string | null = null;
  private readonly startedAt: number;

  constructor(record: PairRecord, private readonly now: () => number = Date.now) {
    this.pairId = record.id;
    this.hsOriginal = record.hs_original;
    this.cnOriginal = record.cn_original;
    this.hsEdited = record.hs_original;
    this.cnEdited = record.cn_original;
    this.startedAt = this.now();
  }

  get edited(): boolean {
    return this.hsEdited !== this.hsOriginal || this.cnEdited !== this.cnOriginal;
  }

  elapsedSeconds(): number {
    return (this.now() - this.startedAt) / 1000;
  }

  /** Submit stays disabled until this returns ok. */
  validate(): Validation {
    if (this.verdict === null) return { ok: false, reason: "choose a verdict" };
    if (this.verdict === "DISCARDED") {
      return { ok: true };
    }
    if (this.label === null) {
      return { ok: false, reason: "accepted pairs need a hate target label" };
    }
    if (this.verdict === "UNTOUCHED" && this.edited) {
      return {
        ok: false,
        reason: "pair was edited; approve as modified or revert the edits",
      };
    }
    if (this.verdict === "MODIFIED" && !this.edited) {
      return { ok: false, reason: "modify requires a change to the pair" };
    }
    return { ok: true };
  }

  /** POST body for /review/{pair_id}; only valid states produce one. */
  payload(annotator: string): VerdictPayload {
    const check = this.validate();
    if (!check.ok) throw new Error(check.reason);
    const body: VerdictPayload = {
      verdict: this.verdict as Verdict,
      annotator,
      elapsed_seconds: Math.round(this.elapsedSeconds() * 10) / 10,
    };
    if (this.verdict === "MODIFIED") {
      body.hs_edited = this.hsEdited;
      body.cn_edited = this.cnEdited;
    }
    if (this.verdict !== "DISCARDED" && this.label !== null) {
      body.target = this.label;
    }
    return body;
  }
}

export class SessionTimer {
  private readonly startedAt: number;

  constructor(private readonly now: () => number = Date.now) {
    this.startedAt = this.now();
  }

  elapsedMs(): number {
    return this.now() - this.startedAt;
  }

  /** True once the reviewer has been at it for the session limit. */
  overLimit(): boolean {
    return this.elapsedMs() >= SESSION_LIMIT_MS;
  }
}
