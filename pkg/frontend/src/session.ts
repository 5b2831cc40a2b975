/** Review session controller: fetch-next / submit flow with lease-expiry
 * handling. All state transitions are headless and testable; the DOM layer
 * only renders what this exposes. */

import { ApiClient, ApiError, type PairRecord } from "./api.js";
import { ReviewViewModel, SessionTimer } from "./model.js";

export type SessionEvent =
  | { kind: "pair"; record: PairRecord }
  | { kind: "empty" }
  | { kind: "submitted"; record: PairRecord }
  | { kind: "reassigned"; detail: string }
  | { kind: "rejected"; detail: string }
  | { kind: "error"; detail: string };

export class ReviewSession {
  current: ReviewViewModel | null = null;
  readonly timer: SessionTimer;

  constructor(
    readonly api: ApiClient,
    readonly annotator: string,
    now: () => number = Date.now,
    private readonly makeModel: (r: PairRecord) => ReviewViewModel = (r) =>
      new ReviewViewModel(r, now),
  ) {
    this.timer = new SessionTimer(now);
  }

  async fetchNext(): Promise<SessionEvent> {
    try {
      const record = await this.api.fetchNext(this.annotator);
      if (record === null) {
        this.current = null;
        return { kind: "empty" };
      }
      this.current = this.makeModel(record);
      return { kind: "pair", record };
    } catch (error) {
      return { kind: "error", detail: String(error) };
    }
  }

  /**
   * Submit the current verdict. Optimistic: the pair is cleared before the
   * round-trip and restored when the service rejects it with a validation
   * error (4xx other than lease conflicts, which surface as "reassigned").
   */
  async submit(): Promise<SessionEvent> {
    const model = this.current;
    if (model === null) return { kind: "error", detail: "no pair under review" };
    const check = model.validate();
    if (!check.ok) return { kind: "rejected", detail: check.reason ?? "invalid" };
    const payload = model.payload(this.annotator);
    this.current = null;
    try {
      const record = await this.api.submitVerdict(model.pairId, payload);
      return { kind: "submitted", record };
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // lease expired or stolen; the pair went back to the queue
        return { kind: "reassigned", detail: error.message };
      }
      if (error instanceof ApiError && error.status >= 400 && error.status < 500) {
        this.current = model; // roll back the optimistic clear
        return { kind: "rejected", detail: error.message };
      }
      this.current = model;
      return { kind: "error", detail: String(error) };
    }
  }
}
